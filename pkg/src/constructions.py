"""
Constructions on shifted A∞-algebras: tensoring with finite dg algebras,
binary products, and twisting by Maurer-Cartan elements
"""
from functools import lru_cache
from typing import Any, Mapping, Optional, Sequence

from .ainfty import InftyMorphism, ShiftedAInftyAlgebra, strict_morphism
from .cochains import DGAlgebraMap, FiniteDGAlgebra, ground_algebra, tensor_name
from .exceptions import DegreeError, FieldMismatchError, InputError, NotMaurerCartanError
from .linalg import BasisVector, FilteredGradedSpace, FilteredLinearMap, Vector, vec_axpy
from .multilinear import (
    MultilinearMap,
    TensorElement,
    Word,
    admissible_words,
    prune,
    tensor_axpy,
    tensor_power,
    tensor_product,
    project,
)

# ============================================================
# Tensor With a Finite DG Algebra
# ============================================================

class TensorAlgebra(ShiftedAInftyAlgebra):
    """
    A ⊗ B for a finite dg algebra B with the discrete filtration

    Basis x⊗b has degree |x| + |b| and weight(x); pair(i, j) indexes it.
    """

    def __init__(self, base: ShiftedAInftyAlgebra, coefficients: FiniteDGAlgebra, operations, *, check=None):
        self.base = base
        self.coefficients = coefficients
        super().__init__(
            tensor_space(base.space, coefficients),
            operations,
            check=check,
            label=f"{base.label}⊗B" if base.label else "",
        )

    def pair(self, i: int, j: int) -> int:
        return i * self.coefficients.dimension + j

    def unpair(self, index: int) -> tuple[int, int]:
        return divmod(index, self.coefficients.dimension)

    def embed(self, x: Mapping[int, Any], b: Mapping[int, Any]) -> Vector:
        """x ⊗ b"""
        result: Vector = {}
        for i, c in x.items():
            for j, e in b.items():
                vec_axpy(result, c * e, {self.pair(i, j): 1})
        return result

    def coefficient_of(self, element: Mapping[int, Any], j: int) -> Vector:
        """The A-component β_j of β = Σ β_j ⊗ b_j"""
        result: Vector = {}
        for index, c in element.items():
            i, k = self.unpair(index)
            if k == j:
                result[i] = c
        return result


def tensor_space(space: FilteredGradedSpace, coefficients: FiniteDGAlgebra) -> FilteredGradedSpace:
    basis = [
        BasisVector(tensor_name(b.name, coefficients.names[j]), b.degree + coefficients.degrees[j], b.weight)
        for b in space.basis
        for j in range(coefficients.dimension)
    ]
    return FilteredGradedSpace(space.field, basis, space.nilpotency)


def _iterated_products(B: FiniteDGAlgebra, max_length: int) -> dict[int, dict[tuple[int, ...], Vector]]:
    """Nonzero products b₁⋯bₖ for k <= max_length, built by prefix extension"""
    one = B.field.one
    products: dict[int, dict[tuple[int, ...], Vector]] = {1: {(j,): {j: one} for j in range(B.dimension)}}
    for k in range(2, max_length + 1):
        layer: dict[tuple[int, ...], Vector] = {}
        for prefix, value in products[k - 1].items():
            for j in range(B.dimension):
                image = B.multiply(value, {j: one})
                if image:
                    layer[prefix + (j,)] = image
        products[k] = layer
    return products


def _koszul_parity(b_degrees: Sequence[int], x_degrees: Sequence[int]) -> int:
    """Σ_{i<j} |b_i||x_j| mod 2"""
    parity = 0
    odd_b = 0
    for b, x in zip(b_degrees, x_degrees):
        if x % 2:
            parity ^= odd_b
        odd_b ^= b % 2
    return parity


def _tensor_components(
    components: Mapping[int, MultilinearMap],
    source: FilteredGradedSpace,
    B: FiniteDGAlgebra,
    products: dict[int, dict[tuple[int, ...], Vector]],
) -> dict[int, dict[Word, Vector]]:
    m = B.dimension
    minus = source.field(-1)
    tables: dict[int, dict[Word, Vector]] = {}
    for k, component in components.items():
        table: dict[Word, Vector] = {}
        for word, image in component.table.items():
            x_degrees = [source.degrees[i] for i in word]
            for bs, b_product in products.get(k, {}).items():
                sign = minus if _koszul_parity([B.degrees[j] for j in bs], x_degrees) else source.field.one
                key = tuple(i * m + j for i, j in zip(word, bs))
                entry = table.setdefault(key, {})
                for out, c in image.items():
                    for bj, e in b_product.items():
                        vec_axpy(entry, sign * c * e, {out * m + bj: 1})
        tables[k] = {w: v for w, v in table.items() if v}
    return tables


@lru_cache(maxsize=256)
def tensor_with_dga(A: ShiftedAInftyAlgebra, B: FiniteDGAlgebra) -> TensorAlgebra:
    """
    A ⊗ B with d(x⊗b) = dx⊗b + (-1)^|x| x⊗δb and
    Q¹ₖ(x₁⊗b₁,…,xₖ⊗bₖ) = (-1)^ε Q¹ₖ(x₁,…,xₖ)⊗b₁⋯bₖ, ε = Σ_{i<j}|bᵢ||xⱼ|
    """
    if A.field != B.field:
        raise FieldMismatchError("Algebra and coefficient algebra over different fields")
    products = _iterated_products(B, max(A.max_arity, 1))
    tables = _tensor_components(A.operations, A.space, B, products)
    m = B.dimension
    minus = A.field(-1)
    linear = tables.setdefault(1, {})
    for i in range(A.dimension):
        sign = minus if A.space.degrees[i] % 2 else A.field.one
        for j, image in B.differential.items():
            entry = linear.setdefault((i * m + j,), {})
            for k, c in image.items():
                vec_axpy(entry, sign * c, {i * m + k: 1})
    tables[1] = {w: v for w, v in linear.items() if v}
    return TensorAlgebra(A, B, tables)


def tensor_morphism(
    phi: InftyMorphism,
    B: FiniteDGAlgebra,
    *,
    check: Optional[bool] = None,
) -> InftyMorphism:
    """Φ ⊗ B, with the same Koszul sign as the structure maps"""
    source = tensor_with_dga(phi.source, B)
    target = tensor_with_dga(phi.target, B)
    products = _iterated_products(B, max(phi.components, default=1))
    tables = _tensor_components(phi.components, phi.source.space, B, products)
    return InftyMorphism(source, target, tables, check=check)


def tensor_dga_map(
    A: ShiftedAInftyAlgebra,
    f: DGAlgebraMap,
    *,
    check: Optional[bool] = None,
) -> InftyMorphism:
    """The strict morphism id_A ⊗ f : A⊗B → A⊗B′"""
    source = tensor_with_dga(A, f.source)
    target = tensor_with_dga(A, f.target)
    table: dict[int, Vector] = {}
    for i in range(A.dimension):
        for j, image in f.table.items():
            table[source.pair(i, j)] = {target.pair(i, k): c for k, c in image.items()}
    linear = FilteredLinearMap(source.space, target.space, table)
    return strict_morphism(source, target, linear, check=check)


def ground_identification(A: ShiftedAInftyAlgebra) -> InftyMorphism:
    """The strict isomorphism A ≅ A ⊗ N*(Δ⁰)"""
    target = tensor_with_dga(A, ground_algebra(A.field))
    linear = FilteredLinearMap(A.space, target.space, {i: {i: A.field.one} for i in range(A.dimension)})
    return strict_morphism(A, target, linear, check=False)


def ground_projection(A: ShiftedAInftyAlgebra) -> InftyMorphism:
    """A ⊗ N*(Δ⁰) ≅ A"""
    source = tensor_with_dga(A, ground_algebra(A.field))
    linear = FilteredLinearMap(source.space, A.space, {i: {i: A.field.one} for i in range(A.dimension)})
    return strict_morphism(source, A, linear, check=False)

# ============================================================
# Products
# ============================================================

class ProductAlgebra(ShiftedAInftyAlgebra):
    """A × A′ with componentwise structure maps; left basis first, then right"""

    def __init__(self, left: ShiftedAInftyAlgebra, right: ShiftedAInftyAlgebra, *, check=None):
        if left.field != right.field:
            raise FieldMismatchError("Product factors live over different fields")
        self.left = left
        self.right = right
        self.offset = left.dimension
        nilpotency = max(left.nilpotency, right.nilpotency)
        clash = set(left.space.names) & set(right.space.names)
        basis = [
            BasisVector(f"1:{b.name}" if clash else b.name, b.degree, b.weight) for b in left.space.basis
        ] + [
            BasisVector(f"2:{b.name}" if clash else b.name, b.degree, b.weight) for b in right.space.basis
        ]
        space = FilteredGradedSpace(left.field, basis, nilpotency)
        operations: dict[int, dict[Word, Vector]] = {}
        for k, op in left.operations.items():
            operations.setdefault(k, {}).update(op.table)
        for k, op in right.operations.items():
            table = operations.setdefault(k, {})
            for word, image in op.table.items():
                table[self.right_word(word)] = self.right_vector(image)
        super().__init__(space, operations, check=check)

    def right_word(self, word: Word) -> Word:
        return tuple(i + self.offset for i in word)

    def right_vector(self, v: Mapping[int, Any]) -> Vector:
        return {i + self.offset: c for i, c in v.items()}

    def split(self, v: Mapping[int, Any]) -> tuple[Vector, Vector]:
        left = {i: c for i, c in v.items() if i < self.offset}
        right = {i - self.offset: c for i, c in v.items() if i >= self.offset}
        return left, right

    def join(self, left: Mapping[int, Any], right: Mapping[int, Any]) -> Vector:
        return {**dict(left), **self.right_vector(right)}

    def projection(self, side: int) -> InftyMorphism:
        """Strict pr₁ (side 0) or pr₂ (side 1)"""
        one = self.field.one
        if side == 0:
            table = {i: {i: one} for i in range(self.offset)}
            target = self.left
        else:
            table = {i + self.offset: {i: one} for i in range(self.right.dimension)}
            target = self.right
        return strict_morphism(self, target, FilteredLinearMap(self.space, target.space, table), check=False)

    def inclusion(self, side: int) -> InftyMorphism:
        """Strict i₁ : A → A × A′ (side 0) or i₂ (side 1)"""
        one = self.field.one
        if side == 0:
            source = self.left
            table = {i: {i: one} for i in range(self.offset)}
        else:
            source = self.right
            table = {i: {i + self.offset: one} for i in range(self.right.dimension)}
        return strict_morphism(source, self, FilteredLinearMap(source.space, self.space, table), check=False)


def product(left: ShiftedAInftyAlgebra, right: ShiftedAInftyAlgebra) -> ProductAlgebra:
    return ProductAlgebra(left, right)


def pairing(
    phi: InftyMorphism,
    psi: InftyMorphism,
    target: Optional[ProductAlgebra] = None,
    *,
    check: Optional[bool] = None,
) -> InftyMorphism:
    """⟨Φ, Ψ⟩ : C → A × A′ with components (Φ¹ₖ, Ψ¹ₖ)"""
    if phi.source is not psi.source and phi.source.space != psi.source.space:
        raise FieldMismatchError("Pairing requires a common source")
    target = target or ProductAlgebra(phi.target, psi.target)
    components: dict[int, dict[Word, Vector]] = {}
    for k, comp in phi.components.items():
        components.setdefault(k, {}).update({w: dict(v) for w, v in comp.table.items()})
    for k, comp in psi.components.items():
        table = components.setdefault(k, {})
        for word, image in comp.table.items():
            entry = table.setdefault(word, {})
            entry.update(target.right_vector(image))
    return InftyMorphism(phi.source, target, components, check=check)


def product_morphism(
    phi: InftyMorphism,
    psi: InftyMorphism,
    source: Optional[ProductAlgebra] = None,
    target: Optional[ProductAlgebra] = None,
    *,
    check: Optional[bool] = None,
) -> InftyMorphism:
    """Φ × Ψ : A × A′ → B × B′, zero on mixed words"""
    source = source or ProductAlgebra(phi.source, psi.source)
    target = target or ProductAlgebra(phi.target, psi.target)
    components: dict[int, dict[Word, Vector]] = {}
    for k, comp in phi.components.items():
        components.setdefault(k, {}).update({w: dict(v) for w, v in comp.table.items()})
    for k, comp in psi.components.items():
        table = components.setdefault(k, {})
        for word, image in comp.table.items():
            table[source.right_word(word)] = target.right_vector(image)
    return InftyMorphism(source, target, components, check=check)

# ============================================================
# Twisting
# ============================================================

def interleave(
    space: FilteredGradedSpace,
    alpha: Mapping[int, Any],
    letters: Sequence[Mapping[int, Any]],
    cutoff: Optional[int] = None,
) -> TensorElement:
    """
    Σ over k₀,…,kₙ >= 0 of α^{⊗k₀}⊗x₁⊗α^{⊗k₁}⊗⋯⊗xₙ⊗α^{⊗kₙ}

    No Koszul signs arise since α has degree 0. Words of total weight
    >= cutoff are dropped, which makes the sum finite.
    """
    limit = space.nilpotency if cutoff is None else cutoff
    one = space.field.one
    series: TensorElement = {}
    for k in range(limit):
        power = prune(space, tensor_power(alpha, k), limit)
        if not power:
            break
        tensor_axpy(series, one, power)
    result: TensorElement = {(): one}
    for letter in letters:
        result = prune(space, tensor_product(result, series), limit)
        result = prune(space, tensor_product(result, {(i,): c for i, c in letter.items()}), limit)
    return prune(space, tensor_product(result, series), limit)


def _require_mc(A: ShiftedAInftyAlgebra, alpha: Mapping[int, Any]) -> None:
    from .maurer_cartan import curvature

    if A.space.vector_degree(alpha) not in (None, 0):
        raise DegreeError("Twisting element must have degree 0")
    value = curvature(A, alpha)
    if value:
        raise NotMaurerCartanError(
            "Twisting element is not Maurer-Cartan",
            {"curvature": A.space.format_vector(value)}
        )


def twist_algebra(A: ShiftedAInftyAlgebra, alpha: Mapping[int, Any], *, check: Optional[bool] = None) -> ShiftedAInftyAlgebra:
    """A^α with (Q^α)¹ₙ(x₁,…,xₙ) = Σ Q¹_{n+k}(α^{⊗k} ⋆_sh x₁⊗⋯⊗xₙ)"""
    _require_mc(A, alpha)
    if not alpha:
        return A
    one = A.field.one
    operations: dict[int, dict[Word, Vector]] = {}
    for n in range(1, A.nilpotency):
        table: dict[Word, Vector] = {}
        for word in admissible_words(A.space, n):
            image = project(A.operations, interleave(A.space, alpha, [{i: one} for i in word]))
            if image:
                table[word] = image
        if table:
            operations[n] = table
    return ShiftedAInftyAlgebra(A.space, operations, check=check, label=A.label)


def twist_morphism(
    phi: InftyMorphism,
    alpha: Mapping[int, Any],
    *,
    check: Optional[bool] = None,
) -> InftyMorphism:
    """Φ^α : A^α → A′^{Φ⁎α} with (Φ^α)¹ₙ = Σ Φ¹_{n+k}(α^{⊗k} ⋆_sh −)"""
    from .maurer_cartan import pushforward

    source = twist_algebra(phi.source, alpha)
    target = twist_algebra(phi.target, pushforward(phi, alpha))
    if not alpha:
        return InftyMorphism(source, target, phi.components, check=False)
    one = phi.source.field.one
    components: dict[int, dict[Word, Vector]] = {}
    for n in range(1, phi.source.nilpotency):
        table: dict[Word, Vector] = {}
        for word in admissible_words(phi.source.space, n, phi.target.nilpotency):
            letters = [{i: one} for i in word]
            image = project(phi.components, interleave(phi.source.space, alpha, letters, phi.target.nilpotency))
            if image:
                table[word] = image
        if table:
            components[n] = table
    return InftyMorphism(source, target, components, check=check)


def check_tensor_functoriality(A: ShiftedAInftyAlgebra, f: DGAlgebraMap, g: DGAlgebraMap) -> bool:
    """(id⊗g)∘(id⊗f) = id⊗(g∘f) on tables"""
    if f.target is not g.source:
        raise InputError("Coefficient maps are not composable")
    composed = tensor_dga_map(A, g.compose(f), check=False).tangent
    separately = tensor_dga_map(A, g, check=False).tangent.compose(tensor_dga_map(A, f, check=False).tangent)
    return composed.table == separately.table


def reparenthesization_agrees(A: ShiftedAInftyAlgebra, B: FiniteDGAlgebra, C: FiniteDGAlgebra) -> bool:
    """(A⊗B)⊗C and A⊗(B⊗C) have equal tables under x⊗b⊗c ↔ x⊗(b⊗c)"""
    from .cochains import tensor_dg_algebras

    left = tensor_with_dga(tensor_with_dga(A, B), C)
    right = tensor_with_dga(A, tensor_dg_algebras(B, C))
    if left.space.names != right.space.names or left.space.degrees != right.space.degrees:
        return False
    return {k: op.table for k, op in left.operations.items()} == {k: op.table for k, op in right.operations.items()}
