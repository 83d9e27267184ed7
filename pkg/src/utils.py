"""
Combinatorial helpers used across the engine
Keep these pure functions without side effects
"""
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, Sequence

# ============================================================
# Permutations & Koszul Signs
# ============================================================

def koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """
    Sign of reordering graded letters with the given degrees into `order`

    order[i] is the original position of the letter placed at position i.
    Each inversion between odd letters contributes a factor -1.
    """
    sign = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j] and degrees[order[i]] % 2 and degrees[order[j]] % 2:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(permutations(range(n)))


@lru_cache(maxsize=None)
def unshuffles(n: int, first: int) -> tuple[tuple[int, ...], ...]:
    """
    (first, n - first)-unshuffles as position orders

    Each result lists the positions taken by the first block (increasing)
    followed by the remaining positions (increasing).
    """
    result = []
    for chosen in combinations(range(n), first):
        rest = tuple(i for i in range(n) if i not in chosen)
        result.append(tuple(chosen) + rest)
    return tuple(result)

# ============================================================
# Word Enumeration
# ============================================================

def bounded_words(
    indices: Sequence[int],
    weights: Sequence[int],
    length: int,
    max_weight: int,
) -> Iterator[tuple[int, ...]]:
    """
    All words of the given length over `indices` with total weight <= max_weight

    Words are produced in lexicographic order of the index sequence.
    """
    if length == 0:
        yield ()
        return
    for i in indices:
        w = weights[i]
        # every remaining letter weighs at least 1
        if w + (length - 1) > max_weight:
            continue
        for rest in bounded_words(indices, weights, length - 1, max_weight - w):
            yield (i,) + rest
