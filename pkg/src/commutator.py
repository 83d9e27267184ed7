"""
Commutator shifted L∞-algebras (characteristic 0)

ℓ¹ₙ(x₁,…,xₙ) = Σ_{σ∈Sₙ} ε(σ) Q¹ₙ(x_{σ(1)},…,x_{σ(n)}) with Koszul signs on
shifted degrees. The L∞ curvature carries 1/m! factors, so on degree-0
elements it coincides with the A∞ curvature and both have the same
Maurer-Cartan set.
"""
import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Any, Mapping, Optional

import sympy

from .ainfty import InftyMorphism, ShiftedAInftyAlgebra
from .config import settings
from .exceptions import CharacteristicError, InvariantViolation, NotMaurerCartanError, NotStrictError
from .linalg import FilteredGradedSpace, FilteredLinearMap, Vector, vec_axpy
from .logging_config import get_logger
from .maurer_cartan import curvature, pushforward, solve_mc_symbolic, symbolic_curvature
from .metrics import record_structure_check
from .multilinear import MultilinearMap, Word, word_weight
from .utils import all_permutations, koszul_sign, unshuffles

logger = get_logger(__name__)


def _require_char_zero(field) -> None:
    if field.is_finite:
        raise CharacteristicError(field.characteristic)

# ============================================================
# L∞-Algebras
# ============================================================

class ShiftedLInfty:
    """
    Graded-symmetric degree +1 brackets ℓ¹ₖ on a filtered graded space

    Tables are stored on every ordering of a word, so evaluation never
    needs to re-sort its inputs.
    """

    def __init__(
        self,
        space: FilteredGradedSpace,
        brackets: Mapping[int, Any],
        *,
        check: Optional[bool] = None,
        label: str = "",
    ):
        _require_char_zero(space.field)
        self.space = space
        self.label = label
        self.brackets: dict[int, MultilinearMap] = {}
        for k, op in sorted(brackets.items()):
            if not isinstance(op, MultilinearMap):
                op = MultilinearMap(space, space, k, op, 1)
            if not op.is_zero:
                self.brackets[k] = op
        if settings.strict_checks if check is None else check:
            assert_symmetric(self)
            assert_jacobi(self)

    @property
    def field(self):
        return self.space.field

    @property
    def nilpotency(self) -> int:
        return self.space.nilpotency

    def bracket(self, k: int) -> MultilinearMap:
        op = self.brackets.get(k)
        if op is None:
            return MultilinearMap(self.space, self.space, k, {}, 1, check=False)
        return op

    @property
    def differential(self) -> FilteredLinearMap:
        return self.bracket(1).to_linear()

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"ShiftedLInfty{name}(dim={self.space.dimension}, N={self.nilpotency})"


def symmetry_defect(L: ShiftedLInfty) -> Optional[tuple[Word, Word]]:
    degrees = L.space.degrees
    for k, op in L.brackets.items():
        for word, image in op.table.items():
            for s in range(k - 1):
                swapped = word[:s] + (word[s + 1], word[s]) + word[s + 2:]
                sign = -1 if degrees[word[s]] * degrees[word[s + 1]] % 2 else 1
                other = op.evaluate(swapped)
                if {i: sign * c for i, c in image.items()} != other:
                    return word, swapped
    return None


def assert_symmetric(L: ShiftedLInfty) -> None:
    defect = symmetry_defect(L)
    record_structure_check("graded-symmetry", defect is None)
    if defect is not None:
        raise InvariantViolation(
            "graded-symmetry",
            "Bracket is not graded-symmetric",
            {"words": [[L.space.names[i] for i in w] for w in defect]}
        )


def jacobi_defect(L: ShiftedLInfty) -> Optional[tuple[int, Word, Vector]]:
    """
    First sorted word on which Σ ε ℓ(ℓ(x_S), x_{S̄}) over unshuffles is nonzero
    """
    space = L.space
    degrees = space.degrees
    for n in range(1, space.nilpotency):
        for word in combinations_with_replacement(range(space.dimension), n):
            if word_weight(space, word) >= space.nilpotency:
                continue
            total: Vector = {}
            for i in range(1, n + 1):
                inner = L.brackets.get(i)
                outer = L.brackets.get(n - i + 1)
                if inner is None or outer is None:
                    continue
                for order in unshuffles(n, i):
                    chosen, rest = order[:i], order[i:]
                    sign = koszul_sign([degrees[w] for w in word], order)
                    value = inner(*({word[p]: space.field.one} for p in chosen))
                    if not value:
                        continue
                    image = outer(value, *({word[p]: space.field.one} for p in rest))
                    vec_axpy(total, space.field(sign), image)
            if total:
                return n, word, total
    return None


def check_jacobi(L: ShiftedLInfty) -> bool:
    defect = jacobi_defect(L)
    record_structure_check("jacobi", defect is None)
    if defect is not None:
        logger.warning("jacobi_check_failed", arity=defect[0], word=[L.space.names[i] for i in defect[1]])
    return defect is None


def assert_jacobi(L: ShiftedLInfty) -> None:
    defect = jacobi_defect(L)
    record_structure_check("jacobi", defect is None)
    if defect is not None:
        n, word, value = defect
        raise InvariantViolation(
            "generalized-jacobi",
            f"Generalized Jacobi identity fails in arity {n}",
            {"word": [L.space.names[i] for i in word], "value": L.space.format_vector(value)}
        )

# ============================================================
# The Commutator Functor
# ============================================================

def symmetrize(op: MultilinearMap) -> MultilinearMap:
    """Σ_σ ε(σ) op∘σ on every word of the source"""
    space = op.source
    degrees = space.degrees
    k = op.arity
    table: dict[Word, Vector] = {}
    for word in combinations_with_replacement(range(space.dimension), k):
        if word_weight(space, word) >= space.nilpotency:
            continue
        orderings = {tuple(word[p] for p in perm) for perm in all_permutations(k)}
        base: Vector = {}
        for perm in all_permutations(k):
            image = op.evaluate(tuple(word[p] for p in perm))
            if image:
                vec_axpy(base, space.field(koszul_sign([degrees[w] for w in word], perm)), image)
        if not base:
            continue
        for ordering in orderings:
            # ordering = word∘π for some π; the value picks up ε(π)
            positions = list(range(k))
            perm = []
            for letter in ordering:
                p = next(p for p in positions if word[p] == letter)
                positions.remove(p)
                perm.append(p)
            sign = koszul_sign([degrees[w] for w in word], perm)
            table[ordering] = {i: sign * c for i, c in base.items()}
    return MultilinearMap(space, op.target, k, table, op.degree)


def commutator(A: ShiftedAInftyAlgebra, *, check: Optional[bool] = None) -> ShiftedLInfty:
    """The commutator L∞-algebra 𝓛(A); defined over QQ only"""
    _require_char_zero(A.field)
    brackets = {k: symmetrize(op) for k, op in A.operations.items()}
    L = ShiftedLInfty(A.space, brackets, check=check, label=f"L({A.label})" if A.label else "")
    logger.debug("commutator_built", arities=sorted(L.brackets))
    return L


class StrictLInftyMorphism:
    """A linear map f with f∘ℓ¹ₖ = ℓ′¹ₖ∘f^{⊗k} for every k"""

    def __init__(self, source: ShiftedLInfty, target: ShiftedLInfty, linear: FilteredLinearMap, *, check: bool = True):
        self.source = source
        self.target = target
        self.linear = linear
        if check and not self.commutes():
            raise InvariantViolation("strict-linfty-morphism", "Linear map does not intertwine the brackets")

    def commutes(self) -> bool:
        f = self.linear
        one = self.source.field.one
        arities = set(self.source.brackets) | set(self.target.brackets)
        for k in arities:
            source_op, target_op = self.source.bracket(k), self.target.bracket(k)
            for word in combinations_with_replacement(range(self.source.space.dimension), k):
                lhs = f(source_op(*({i: one} for i in word)))
                rhs = target_op(*(f.image(i) for i in word))
                if lhs != rhs:
                    return False
        return True

    def __call__(self, x: Mapping[int, Any]) -> Vector:
        return self.linear(x)


def commutator_morphism(phi: InftyMorphism) -> StrictLInftyMorphism:
    """𝓛 on strict morphisms is the identity on tangent tables"""
    if not phi.is_strict:
        raise NotStrictError("The commutator functor is applied to strict morphisms only")
    return StrictLInftyMorphism(commutator(phi.source), commutator(phi.target), phi.tangent)

# ============================================================
# Curvature & MC Sets
# ============================================================

def curvature_lie(L: ShiftedLInfty, x: Mapping[int, Any]) -> Vector:
    """curv_Lie(x) = Σ_{m>=1} (1/m!) ℓ¹ₘ(x,…,x)"""
    if not x:
        return {}
    result: Vector = {}
    for m, op in L.brackets.items():
        image = op(*([x] * m))
        if image:
            vec_axpy(result, L.field.fraction(1, factorial(m)), image)
    return result


def is_maurer_cartan_lie(L: ShiftedLInfty, x: Mapping[int, Any]) -> bool:
    return not curvature_lie(L, x)


def symbolic_curvature_lie(L: ShiftedLInfty, A: ShiftedAInftyAlgebra, point: Mapping[int, Any]) -> dict[int, Any]:
    return symbolic_curvature(A, point, L.brackets, lambda m: sympy.Rational(1, factorial(m)))


def pushforward_lie(f: StrictLInftyMorphism, x: Mapping[int, Any]) -> Vector:
    if not is_maurer_cartan_lie(f.source, x):
        raise NotMaurerCartanError("Element is not Maurer-Cartan in the source L∞-algebra")
    return f(x)


def _sample_points(A: ShiftedAInftyAlgebra, samples: int, seed: int) -> list[Vector]:
    field = A.field
    zero_degree = A.space.indices(degree=0)
    points: list[Vector] = [{}]
    points += [{i: field.one} for i in zero_degree]
    points += [{i: field.one, j: field(-1)} for i, j in combinations(zero_degree, 2)]
    rng = random.Random(seed)
    for _ in range(samples):
        point = {}
        for i in zero_degree:
            value = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            if value:
                point[i] = field.fraction(value.numerator, value.denominator)
        points.append(point)
    return points


def mc_equality_check(A: ShiftedAInftyAlgebra, samples: int = 8, seed: int = 0) -> bool:
    """
    curv_As = curv_Lie∘𝓛 as polynomials, on sampled points, and as layered
    MC varieties
    """
    _require_char_zero(A.field)
    L = commutator(A)
    symbols = {i: sympy.Symbol(f"x_{A.space.names[i]}") for i in A.space.indices(degree=0)}
    polynomial_ok = symbolic_curvature(A, symbols) == symbolic_curvature_lie(L, A, symbols)
    points_ok = all(curvature(A, x) == curvature_lie(L, x) for x in _sample_points(A, samples, seed))
    variety_ok = solve_mc_symbolic(A) == solve_mc_symbolic(A, lambda point: symbolic_curvature_lie(L, A, point))
    ok = polynomial_ok and points_ok and variety_ok
    record_structure_check("mc-equality", ok)
    if not ok:
        logger.warning(
            "mc_equality_failed",
            polynomial=polynomial_ok,
            points=points_ok,
            variety=variety_ok,
        )
    return ok


def check_mc_naturality(phi: InftyMorphism, x: Mapping[int, Any]) -> bool:
    """𝓛(Θ) and Θ push an MC element forward to the same element"""
    return pushforward_lie(commutator_morphism(phi), x) == pushforward(phi, x)
