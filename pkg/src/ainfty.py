"""
Complete filtered shifted A∞-algebras and ∞-morphisms

Shifted convention throughout: every Q¹ₖ has degree +1, every Φ¹ₖ degree 0,
and the only signs are Koszul signs from moving Q¹ₖ past earlier inputs.
"""
from typing import Any, Mapping, Optional

from .cochains import FiniteDGAlgebra
from .config import settings
from .exceptions import (
    DGAlgebraError,
    FieldMismatchError,
    FiltrationError,
    InvariantViolation,
    MorphismError,
    StasheffError,
)
from .linalg import (
    BasisVector,
    ChainMap,
    FilteredComplex,
    FilteredGradedSpace,
    FilteredLinearMap,
    Vector,
)
from .logging_config import get_logger
from .metrics import record_structure_check
from .multilinear import (
    Components,
    MultilinearMap,
    TensorElement,
    Word,
    admissible_words,
    apply_coalgebra_map,
    apply_coderivation,
    coderivation_component,
    invert_coalgebra_map,
    project,
    word_degree,
    word_weight,
)

logger = get_logger(__name__)

# ============================================================
# Algebras
# ============================================================

class ShiftedAInftyAlgebra:
    """
    A family {Q¹ₖ}, 1 <= k <= N-1, of degree +1 weight-raising maps on a
    filtered graded space, satisfying Σ Q¹ₖ Qᵏₙ = 0
    """

    def __init__(
        self,
        space: FilteredGradedSpace,
        operations: Mapping[int, Any],
        *,
        check: Optional[bool] = None,
        label: str = "",
    ):
        self.space = space
        self.label = label
        self.operations: dict[int, MultilinearMap] = {}
        for k, op in sorted(operations.items()):
            if not isinstance(op, MultilinearMap):
                op = MultilinearMap(space, space, k, op, 1)
            if op.arity != k or op.degree != 1:
                raise InvariantViolation("operation-shape", f"Operation of arity {k} has the wrong shape")
            if op.source != space or op.target != space:
                raise FieldMismatchError(f"Operation of arity {k} lives on another carrier")
            if op.is_zero:
                continue
            if k >= space.nilpotency:
                raise FiltrationError(f"Nonzero Q¹_{k} with N = {space.nilpotency}")
            self.operations[k] = op
        if settings.strict_checks if check is None else check:
            assert_stasheff(self)

    @property
    def field(self):
        return self.space.field

    @property
    def nilpotency(self) -> int:
        return self.space.nilpotency

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def operation(self, k: int) -> MultilinearMap:
        op = self.operations.get(k)
        if op is None:
            return MultilinearMap(self.space, self.space, k, {}, 1, check=False)
        return op

    @property
    def differential(self) -> FilteredLinearMap:
        return self.operation(1).to_linear()

    @property
    def complex(self) -> FilteredComplex:
        return FilteredComplex(self.space, self.differential, check=False)

    @property
    def is_abelian(self) -> bool:
        return all(k == 1 for k in self.operations)

    @property
    def max_arity(self) -> int:
        return max(self.operations, default=0)

    def apply(self, element: TensorElement, cutoff: Optional[int] = None) -> TensorElement:
        """The full coderivation Q on a tensor element"""
        return apply_coderivation(self.operations, self.space, element, cutoff)

    def same_structure(self, other: "ShiftedAInftyAlgebra") -> bool:
        return (
            self.space == other.space
            and {k: op.table for k, op in self.operations.items()}
            == {k: op.table for k, op in other.operations.items()}
        )

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"ShiftedAInftyAlgebra{name}(dim={self.dimension}, N={self.nilpotency}, {self.field})"


def zero_algebra(field, nilpotency: int = 2) -> ShiftedAInftyAlgebra:
    return ShiftedAInftyAlgebra(FilteredGradedSpace(field, [], nilpotency), {}, check=False)


def abelian_algebra(complex_: FilteredComplex) -> ShiftedAInftyAlgebra:
    """A filtered complex viewed as an A∞-algebra with Q¹ₖ = 0 for k >= 2"""
    return ShiftedAInftyAlgebra(complex_.space, {1: MultilinearMap.from_linear(complex_.differential)})

# ============================================================
# Structure Identities
# ============================================================

def _possible(space: FilteredGradedSpace, degree: int, weight: int) -> bool:
    return any(
        space.degrees[i] == degree and space.weights[i] >= weight
        for i in range(space.dimension)
    )


def extend_coderivation(A: ShiftedAInftyAlgebra, k: int, n: int) -> dict[Word, TensorElement]:
    """Qᵏₙ : A^{⊗n} → A^{⊗k} as a sparse table"""
    return coderivation_component(A.operations, A.space, k, n)


def stasheff_defect(A: ShiftedAInftyAlgebra) -> Optional[tuple[int, Word, Vector]]:
    """First word on which Σ Q¹ₖ Qᵏₙ is nonzero, or None"""
    space = A.space
    one = space.field.one
    for n in range(1, space.nilpotency):
        for word in admissible_words(space, n):
            if not _possible(space, word_degree(space, word) + 2, word_weight(space, word)):
                continue
            value = project(A.operations, A.apply({word: one}))
            if value:
                return n, word, value
    return None


def check_stasheff(A: ShiftedAInftyAlgebra) -> bool:
    defect = stasheff_defect(A)
    record_structure_check("stasheff", defect is None)
    if defect is not None:
        n, word, _ = defect
        logger.warning("stasheff_check_failed", arity=n, word=[A.space.names[i] for i in word])
    return defect is None


def assert_stasheff(A: ShiftedAInftyAlgebra) -> None:
    defect = stasheff_defect(A)
    record_structure_check("stasheff", defect is None)
    if defect is not None:
        n, word, value = defect
        raise StasheffError(
            n, tuple(A.space.names[i] for i in word),
            {"value": A.space.format_vector(value)}
        )

# ============================================================
# Morphisms
# ============================================================

class InftyMorphism:
    """
    Degree-0 weight-raising maps {Φ¹ₖ} with Σ Φ¹ₖQᵏₙ = Σ Q′¹ₖΦᵏₙ
    """

    def __init__(
        self,
        source: ShiftedAInftyAlgebra,
        target: ShiftedAInftyAlgebra,
        components: Mapping[int, Any],
        *,
        check: Optional[bool] = None,
    ):
        if source.field != target.field:
            raise FieldMismatchError("Morphism between algebras over different fields")
        self.source = source
        self.target = target
        self.components: dict[int, MultilinearMap] = {}
        for k, comp in sorted(components.items()):
            if not isinstance(comp, MultilinearMap):
                comp = MultilinearMap(source.space, target.space, k, comp, 0)
            if comp.arity != k or comp.degree != 0:
                raise InvariantViolation("component-shape", f"Component of arity {k} has the wrong shape")
            if comp.source != source.space or comp.target != target.space:
                raise FieldMismatchError(f"Component of arity {k} has mismatched carriers")
            if not comp.is_zero:
                self.components[k] = comp
        if settings.strict_checks if check is None else check:
            assert_morphism(self)

    def component(self, k: int) -> MultilinearMap:
        comp = self.components.get(k)
        if comp is None:
            return MultilinearMap(self.source.space, self.target.space, k, {}, 0, check=False)
        return comp

    @property
    def tangent(self) -> FilteredLinearMap:
        """Φ¹₁ as a filtered linear map"""
        return self.component(1).to_linear()

    @property
    def tangent_chain_map(self) -> ChainMap:
        return ChainMap(self.source.complex, self.target.complex, self.tangent, check=False)

    @property
    def is_strict(self) -> bool:
        return all(k == 1 for k in self.components)

    def apply(self, element: TensorElement, cutoff: Optional[int] = None) -> TensorElement:
        """The full coalgebra morphism on a tensor element"""
        return apply_coalgebra_map(self.components, element, cutoff)

    def same_as(self, other: "InftyMorphism") -> bool:
        return (
            self.source.space == other.source.space
            and self.target.space == other.target.space
            and {k: c.table for k, c in self.components.items()}
            == {k: c.table for k, c in other.components.items()}
        )

    def __repr__(self) -> str:
        kind = "strict" if self.is_strict else f"arity<={max(self.components, default=0)}"
        return f"InftyMorphism({kind}, {self.source.dimension}→{self.target.dimension})"


def morphism_defect(phi: InftyMorphism) -> Optional[tuple[int, Word, Vector]]:
    """First word on which ΦQ and Q′Φ differ in arity one, or None"""
    source, target = phi.source, phi.target
    one = source.field.one
    for n in range(1, source.nilpotency):
        for word in admissible_words(source.space, n):
            if not _possible(target.space, word_degree(source.space, word) + 1, word_weight(source.space, word)):
                continue
            lhs = project(phi.components, source.apply({word: one}))
            rhs = project(target.operations, phi.apply({word: one}))
            if lhs != rhs:
                difference = dict(lhs)
                for j, c in rhs.items():
                    value = difference.get(j, 0) - c
                    if value:
                        difference[j] = value
                    else:
                        difference.pop(j, None)
                return n, word, difference
    return None


def check_morphism(phi: InftyMorphism) -> bool:
    defect = morphism_defect(phi)
    record_structure_check("morphism", defect is None)
    if defect is not None:
        n, word, _ = defect
        logger.warning("morphism_check_failed", arity=n, word=[phi.source.space.names[i] for i in word])
    return defect is None


def assert_morphism(phi: InftyMorphism) -> None:
    defect = morphism_defect(phi)
    record_structure_check("morphism", defect is None)
    if defect is not None:
        n, word, value = defect
        raise MorphismError(
            n, tuple(phi.source.space.names[i] for i in word),
            {"difference": phi.target.space.format_vector(value)}
        )


def identity_morphism(A: ShiftedAInftyAlgebra) -> InftyMorphism:
    return InftyMorphism(A, A, {1: MultilinearMap.from_linear(FilteredLinearMap.identity(A.space))}, check=False)


def strict_morphism(
    source: ShiftedAInftyAlgebra,
    target: ShiftedAInftyAlgebra,
    linear: FilteredLinearMap,
    *,
    check: Optional[bool] = None,
) -> InftyMorphism:
    return InftyMorphism(source, target, {1: MultilinearMap.from_linear(linear)}, check=check)


def compose(psi: InftyMorphism, phi: InftyMorphism, *, check: Optional[bool] = None) -> InftyMorphism:
    """Ψ∘Φ with (ΨΦ)¹ₙ = Σₖ Ψ¹ₖ Φᵏₙ"""
    if phi.target.space != psi.source.space:
        raise FieldMismatchError("Morphisms are not composable")
    source, target = phi.source.space, psi.target.space
    one = source.field.one
    components: dict[int, MultilinearMap] = {}
    for n in range(1, source.nilpotency):
        table: dict[Word, Vector] = {}
        for word in admissible_words(source, n, target.nilpotency):
            image = project(psi.components, phi.apply({word: one}))
            if image:
                table[word] = image
        if table:
            components[n] = MultilinearMap(source, target, n, table, 0, check=False)
    return InftyMorphism(phi.source, psi.target, components, check=check)


def invert_morphism(phi: InftyMorphism, *, check: Optional[bool] = None) -> InftyMorphism:
    """Inverse of an ∞-isomorphism (Φ¹₁ a filtered isomorphism); both composites asserted to be identities"""
    components = invert_coalgebra_map(phi.components)
    inverse = InftyMorphism(phi.target, phi.source, components, check=check)
    if not compose(phi, inverse, check=False).same_as(identity_morphism(phi.target)):
        raise InvariantViolation("inverse", "Φ∘Φ⁻¹ ≠ id")
    if not compose(inverse, phi, check=False).same_as(identity_morphism(phi.source)):
        raise InvariantViolation("inverse", "Φ⁻¹∘Φ ≠ id")
    return inverse


def transport_structure(
    A: ShiftedAInftyAlgebra,
    components: Components,
    *,
    label: str = "",
) -> tuple[ShiftedAInftyAlgebra, InftyMorphism]:
    """
    Conjugate Q along a coalgebra isomorphism F with invertible F¹₁

    Q′ = F∘Q∘F⁻¹ on the target carrier of F; returns A′ and F as an
    ∞-isomorphism A → A′.
    """
    target_space = components[1].target
    inverse = invert_coalgebra_map(components)
    one = A.field.one
    operations: dict[int, dict[Word, Vector]] = {}
    for n in range(1, target_space.nilpotency):
        table: dict[Word, Vector] = {}
        for word in admissible_words(target_space, n):
            pulled = apply_coalgebra_map(inverse, {word: one}, A.nilpotency)
            image = project(components, A.apply(pulled))
            if image:
                table[word] = image
        if table:
            operations[n] = table
    transported = ShiftedAInftyAlgebra(target_space, operations, label=label or A.label)
    return transported, InftyMorphism(A, transported, components)

# ============================================================
# DG Algebra Presentations
# ============================================================

class DGAlgebraPresentation:
    """
    Complete filtered non-unital dg associative algebra (C, d_C, μ) in unshifted degrees

    Laws are checked through FiniteDGAlgebra; filtration compatibility
    μ(ℱ_a, ℱ_b) ⊆ ℱ_{a+b} and d(ℱ_a) ⊆ ℱ_a is checked here.
    """

    def __init__(
        self,
        space: FilteredGradedSpace,
        differential: Mapping[int, Mapping[int, Any]],
        product: Mapping[tuple[int, int], Mapping[int, Any]],
        *,
        label: str = "",
    ):
        self.space = space
        self.label = label
        self.algebra = FiniteDGAlgebra(space.field, space.names, space.degrees, differential, product)
        weights = space.weights
        for i, image in self.algebra.differential.items():
            if any(weights[j] < weights[i] for j in image):
                raise FiltrationError(f"d lowers the weight of {space.names[i]!r}")
        for (i, j), image in self.algebra.product.items():
            if any(weights[k] < weights[i] + weights[j] for k in image):
                raise FiltrationError(
                    f"Product {space.names[i]!r}·{space.names[j]!r} does not raise weight additively",
                    {"pair": [space.names[i], space.names[j]]}
                )
        self._shifted: Optional[ShiftedAInftyAlgebra] = None

    @property
    def field(self):
        return self.space.field

    @property
    def differential(self) -> dict[int, Vector]:
        return self.algebra.differential

    @property
    def product(self) -> dict[tuple[int, int], Vector]:
        return self.algebra.product

    def d(self, v: Mapping[int, Any]) -> Vector:
        return self.algebra.d(v)

    def multiply(self, u: Mapping[int, Any], v: Mapping[int, Any]) -> Vector:
        return self.algebra.multiply(u, v)

    @property
    def shifted(self) -> ShiftedAInftyAlgebra:
        if self._shifted is None:
            self._shifted = from_dga(self)
        return self._shifted


def shifted_space(space: FilteredGradedSpace) -> FilteredGradedSpace:
    """s⁻¹: every degree lowered by one"""
    return FilteredGradedSpace(
        space.field,
        [BasisVector(b.name, b.degree - 1, b.weight) for b in space.basis],
        space.nilpotency,
    )


def from_dga(C: DGAlgebraPresentation) -> ShiftedAInftyAlgebra:
    """
    Q¹₁ = s⁻¹ d s, Q¹₂(s⁻¹a, s⁻¹b) = (-1)^{|s⁻¹a|} s⁻¹ μ(a, b), Q¹_{k>=3} = 0
    """
    space = shifted_space(C.space)
    minus = space.field(-1)
    operations: dict[int, dict[Word, Vector]] = {}
    if C.differential:
        operations[1] = {(i,): dict(v) for i, v in C.differential.items()}
    if C.product:
        table: dict[Word, Vector] = {}
        for (i, j), image in C.product.items():
            if space.degrees[i] % 2:
                table[(i, j)] = {k: minus * c for k, c in image.items()}
            else:
                table[(i, j)] = dict(image)
        operations[2] = table
    return ShiftedAInftyAlgebra(space, operations, label=C.label)


def lift_dga_morphism(
    source: DGAlgebraPresentation,
    target: DGAlgebraPresentation,
    table: Mapping[int, Mapping[int, Any]],
) -> InftyMorphism:
    """Strict Φ with Φ¹₁ = s⁻¹ φ s for a filtered dg algebra morphism φ"""
    linear = FilteredLinearMap(source.space, target.space, table)
    one = source.field.one
    for i in range(source.space.dimension):
        if target.d(linear.image(i)) != linear(source.d({i: one})):
            raise DGAlgebraError("chain-map", f"φ does not commute with d on {source.space.names[i]!r}")
    for i in range(source.space.dimension):
        for j in range(source.space.dimension):
            lhs = linear(source.algebra.basis_product(i, j))
            rhs = target.multiply(linear.image(i), linear.image(j))
            if lhs != rhs:
                raise DGAlgebraError(
                    "multiplicativity",
                    f"φ is not multiplicative on ({source.space.names[i]}, {source.space.names[j]})"
                )
    shifted_linear = FilteredLinearMap(source.shifted.space, target.shifted.space, linear.table)
    return strict_morphism(source.shifted, target.shifted, shifted_linear)
