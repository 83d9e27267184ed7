"""
Sparse multilinear maps and their extensions to the tensor coalgebra

A tensor element is a dict {word: coefficient} where a word is a tuple of
basis indices. Families of multilinear maps are dicts {arity: MultilinearMap}.
The full coderivation Q and coalgebra map Φ act on tensor elements of every
length at once; projecting back to the first tensor power recovers the
identities Σ Q¹ₖQᵏₙ, Σ Φ¹ₖQᵏₙ, Σ Ψ¹ₖΦᵏₙ without enumerating partitions by hand.
"""
from typing import Any, Iterable, Mapping, Optional

from .exceptions import ArityError, DegreeError, FiltrationError, InvariantViolation
from .linalg import FilteredGradedSpace, FilteredLinearMap, LinearSolver, Vector, vec_axpy
from .utils import bounded_words

Word = tuple[int, ...]
TensorElement = dict[Word, Any]

# ============================================================
# Words
# ============================================================

def word_weight(space: FilteredGradedSpace, word: Word) -> int:
    weights = space.weights
    return sum(weights[i] for i in word)


def word_degree(space: FilteredGradedSpace, word: Word) -> int:
    degrees = space.degrees
    return sum(degrees[i] for i in word)


def admissible_words(space: FilteredGradedSpace, length: int, cutoff: Optional[int] = None) -> Iterable[Word]:
    """Words of the given length whose total weight stays below the cutoff (default N)"""
    limit = (space.nilpotency if cutoff is None else cutoff) - 1
    return bounded_words(range(space.dimension), space.weights, length, limit)


def tensor_axpy(target: TensorElement, scale: Any, source: Mapping[Word, Any]) -> TensorElement:
    if not scale:
        return target
    for word, c in source.items():
        value = target.get(word)
        value = scale * c if value is None else value + scale * c
        if value:
            target[word] = value
        else:
            target.pop(word, None)
    return target


def tensor_power(v: Mapping[int, Any], n: int) -> TensorElement:
    """v^{⊗n} expanded in words"""
    result: TensorElement = {(): 1}
    for _ in range(n):
        step: TensorElement = {}
        for word, c in result.items():
            for i, a in v.items():
                key = word + (i,)
                value = step.get(key)
                value = c * a if value is None else value + c * a
                if value:
                    step[key] = value
                else:
                    step.pop(key, None)
        result = step
    return result


def tensor_product(left: Mapping[Word, Any], right: Mapping[Word, Any]) -> TensorElement:
    result: TensorElement = {}
    for u, a in left.items():
        for v, b in right.items():
            tensor_axpy(result, a * b, {u + v: 1})
    return result


def prune(space: FilteredGradedSpace, element: Mapping[Word, Any], cutoff: int) -> TensorElement:
    return {w: c for w, c in element.items() if c and word_weight(space, w) < cutoff}

# ============================================================
# Multilinear Maps
# ============================================================

class MultilinearMap:
    """
    Sparse table {input word: output vector} for one arity

    Invariants: output degree = Σ input degrees + degree; every output
    component weighs at least the sum of the input weights.
    """

    def __init__(
        self,
        source: FilteredGradedSpace,
        target: FilteredGradedSpace,
        arity: int,
        table: Mapping[Word, Mapping[int, Any]],
        degree: int = 0,
        *,
        check: bool = True,
    ):
        if arity < 1:
            raise ArityError(f"Arity must be at least 1, got {arity}")
        self.source = source
        self.target = target
        self.arity = arity
        self.degree = degree
        self.table: dict[Word, Vector] = {}
        for word, image in table.items():
            cleaned = {j: c for j, c in image.items() if c}
            if cleaned:
                self.table[tuple(word)] = cleaned
        if check:
            self.validate()

    def validate(self) -> None:
        for word, image in self.table.items():
            if len(word) != self.arity:
                raise ArityError(f"Entry {word} in an arity-{self.arity} table")
            expected = word_degree(self.source, word) + self.degree
            weight = word_weight(self.source, word)
            for j in image:
                if self.target.degrees[j] != expected:
                    raise DegreeError(
                        f"Entry on {self._names(word)} has output {self.target.names[j]!r} "
                        f"in degree {self.target.degrees[j]}, expected {expected}",
                        {"word": self._names(word), "output": self.target.names[j]}
                    )
                if self.target.weights[j] < weight:
                    raise FiltrationError(
                        f"Entry on {self._names(word)} (total weight {weight}) has output "
                        f"{self.target.names[j]!r} of weight {self.target.weights[j]}",
                        {"word": self._names(word), "output": self.target.names[j]}
                    )

    def _names(self, word: Word) -> list[str]:
        return [self.source.names[i] for i in word]

    def evaluate(self, word: Word) -> Vector:
        return self.table.get(word, {})

    def __call__(self, *vectors: Mapping[int, Any]) -> Vector:
        if len(vectors) != self.arity:
            raise ArityError(f"Expected {self.arity} arguments, got {len(vectors)}")
        result: Vector = {}
        expansion: TensorElement = {(): 1}
        for v in vectors:
            expansion = tensor_product(expansion, {(i,): c for i, c in v.items()})
        for word, c in expansion.items():
            image = self.table.get(word)
            if image:
                vec_axpy(result, c, image)
        return result

    def on_element(self, element: Mapping[Word, Any]) -> Vector:
        result: Vector = {}
        for word, c in element.items():
            image = self.table.get(word)
            if image:
                vec_axpy(result, c, image)
        return result

    @property
    def is_zero(self) -> bool:
        return not self.table

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MultilinearMap)
            and other.arity == self.arity
            and other.degree == self.degree
            and other.table == self.table
        )

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_linear(cls, f: FilteredLinearMap) -> "MultilinearMap":
        return cls(f.source, f.target, 1, {(i,): v for i, v in f.table.items()}, f.degree, check=False)

    def to_linear(self) -> FilteredLinearMap:
        if self.arity != 1:
            raise ArityError("Only arity-1 maps are linear")
        return FilteredLinearMap(
            self.source, self.target, {w[0]: v for w, v in self.table.items()}, self.degree, check=False
        )


Components = Mapping[int, MultilinearMap]

# ============================================================
# Extensions to the Tensor Coalgebra
# ============================================================

def project(components: Components, element: Mapping[Word, Any]) -> Vector:
    """Σ c_w · comp[len(w)](w): the arity-one projection of a full map"""
    result: Vector = {}
    for word, c in element.items():
        component = components.get(len(word))
        if component is None:
            continue
        image = component.table.get(word)
        if image:
            vec_axpy(result, c, image)
    return result


def apply_coderivation(
    components: Components,
    space: FilteredGradedSpace,
    element: Mapping[Word, Any],
    cutoff: Optional[int] = None,
) -> TensorElement:
    """
    The coderivation extending {Q¹ₖ}, applied to a tensor element

    Q(a₁⊗⋯⊗aₙ) = Σ (-1)^{|a₁|+⋯+|aᵢ|} a₁⊗⋯⊗aᵢ⊗Q¹ₖ(aᵢ₊₁,…)⊗⋯⊗aₙ.
    Output words of total weight >= cutoff are dropped.
    """
    limit = space.nilpotency if cutoff is None else cutoff
    degrees, weights = space.degrees, space.weights
    result: TensorElement = {}
    for word, c in element.items():
        n = len(word)
        parity = 0
        for i in range(n):
            sign = -c if parity else c
            for k, component in components.items():
                if i + k > n:
                    continue
                image = component.table.get(word[i:i + k])
                if not image:
                    continue
                head, tail = word[:i], word[i + k:]
                rest = sum(weights[j] for j in head) + sum(weights[j] for j in tail)
                for out, coefficient in image.items():
                    if rest + weights[out] >= limit:
                        continue
                    key = head + (out,) + tail
                    value = result.get(key)
                    value = sign * coefficient if value is None else value + sign * coefficient
                    if value:
                        result[key] = value
                    else:
                        result.pop(key, None)
            parity ^= degrees[word[i]] & 1
    return result


def apply_coalgebra_map(
    components: Components,
    element: Mapping[Word, Any],
    cutoff: Optional[int] = None,
) -> TensorElement:
    """
    The coalgebra morphism extending degree-0 maps {Φ¹ₖ}

    Φ(a₁⊗⋯⊗aₙ) = Σ over compositions n = n₁+⋯+nₖ of
    Φ¹ₙ₁(a₁,…)⊗⋯⊗Φ¹ₙₖ(…,aₙ); no signs since every Φ¹ₖ has degree 0.
    """
    if not components:
        return {}
    target = next(iter(components.values())).target
    limit = target.nilpotency if cutoff is None else cutoff
    weights = target.weights
    result: TensorElement = {}
    for word, c in element.items():
        n = len(word)
        # partial[pos] = {(target word, weight): coefficient}
        partial: list[dict[tuple[Word, int], Any]] = [dict() for _ in range(n + 1)]
        partial[0][((), 0)] = c
        for pos in range(n):
            if not partial[pos]:
                continue
            for length, component in components.items():
                if pos + length > n:
                    continue
                image = component.table.get(word[pos:pos + length])
                if not image:
                    continue
                bucket = partial[pos + length]
                for (prefix, weight), a in partial[pos].items():
                    for out, b in image.items():
                        total = weight + weights[out]
                        if total >= limit:
                            continue
                        key = (prefix + (out,), total)
                        value = bucket.get(key)
                        value = a * b if value is None else value + a * b
                        if value:
                            bucket[key] = value
                        else:
                            bucket.pop(key, None)
        for (target_word, _), a in partial[n].items():
            value = result.get(target_word)
            value = a if value is None else value + a
            if value:
                result[target_word] = value
            else:
                result.pop(target_word, None)
    return result


def component_of(element: Mapping[Word, Any], length: int) -> TensorElement:
    return {w: c for w, c in element.items() if len(w) == length}


def coderivation_component(
    components: Components,
    space: FilteredGradedSpace,
    k: int,
    n: int,
) -> dict[Word, TensorElement]:
    """Qᵏₙ as a table {length-n word: length-k tensor element}"""
    if not 1 <= k <= n:
        raise ArityError(f"Qᵏₙ requires 1 <= k <= n, got k={k}, n={n}")
    table: dict[Word, TensorElement] = {}
    for word in admissible_words(space, n):
        image = component_of(apply_coderivation(components, space, {word: space.field.one}), k)
        if image:
            table[word] = image
    return table


def coalgebra_component(components: Components, source: FilteredGradedSpace, k: int, n: int) -> dict[Word, TensorElement]:
    """Φᵏₙ as a table {length-n word: length-k tensor element}"""
    if not 1 <= k <= n:
        raise ArityError(f"Φᵏₙ requires 1 <= k <= n, got k={k}, n={n}")
    table: dict[Word, TensorElement] = {}
    for word in admissible_words(source, n):
        image = component_of(apply_coalgebra_map(components, {word: source.field.one}), k)
        if image:
            table[word] = image
    return table

# ============================================================
# Inversion
# ============================================================

def invert_linear(f: FilteredLinearMap) -> FilteredLinearMap:
    """Inverse of a filtered linear isomorphism whose inverse also preserves the filtration"""
    source, target = f.source, f.target
    if source.dimension != target.dimension:
        raise InvariantViolation("invertibility", "Linear part is not a bijection")
    solver = LinearSolver(source.field, [f.image(i) for i in range(source.dimension)], range(target.dimension))
    if solver.rank != source.dimension:
        raise InvariantViolation("invertibility", "Linear part is not a bijection")
    table = {j: solver.solve({j: target.field.one}) or {} for j in range(target.dimension)}
    return FilteredLinearMap(target, source, table, -f.degree)


def invert_coalgebra_map(components: Components) -> dict[int, MultilinearMap]:
    """
    Components {G¹ₙ} of the inverse coalgebra morphism

    G¹₁ = (Φ¹₁)⁻¹ and G¹ₙ = -G¹₁(Σ_{k>=2} Φ¹ₖ Gᵏₙ), solved arity by arity.
    """
    linear = components[1]
    source, target = linear.source, linear.target
    inverse = MultilinearMap.from_linear(invert_linear(linear.to_linear()))
    result: dict[int, MultilinearMap] = {1: inverse}
    minus = source.field(-1)
    occupied = {(source.degrees[i], source.weights[i]) for i in range(source.dimension)}
    for n in range(2, source.nilpotency):
        table: dict[Word, Vector] = {}
        for word in admissible_words(target, n, source.nilpotency):
            degree, weight = word_degree(target, word), word_weight(target, word)
            if not any(d == degree and w >= weight for d, w in occupied):
                continue
            expanded = apply_coalgebra_map(result, {word: target.field.one}, source.nilpotency)
            correction = project(components, expanded)
            if correction:
                image = inverse.on_element({(j,): c for j, c in correction.items()})
                if image:
                    table[word] = {j: minus * c for j, c in image.items()}
        if table:
            result[n] = MultilinearMap(target, source, n, table)
    return result
