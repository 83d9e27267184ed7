"""
Homotopy-theoretic constructions on ∞-morphisms

Acyclic fibrations split as products with their (acyclic) kernel, which
yields right inverses; strict fibrations pull back along arbitrary
morphisms by conjugating the product structure; the path object
A ⊗ N*(Δ¹) turns every morphism into a weak equivalence followed by a
fibration.
"""
from dataclasses import dataclass
from typing import Any, Mapping

from .ainfty import (
    InftyMorphism,
    ShiftedAInftyAlgebra,
    abelian_algebra,
    compose,
    identity_morphism,
    invert_morphism,
    strict_morphism,
    transport_structure,
)
from .cochains import interval_evaluations, interval_unit
from .constructions import (
    ProductAlgebra,
    ground_identification,
    ground_projection,
    pairing,
    tensor_dga_map,
)
from .exceptions import InvariantViolation, NotAcyclicFibrationError, NotAFibrationError, NotStrictError
from .linalg import (
    AcyclicFibrationContraction,
    BasisVector,
    FilteredComplex,
    FilteredGradedSpace,
    FilteredLinearMap,
    LinearSolver,
    Subspace,
    Vector,
    contract_acyclic_fibration,
    filtered_section,
    is_fibration,
    is_weak_equivalence,
    kernel_subspace,
    vec_add,
)
from .logging_config import get_logger
from .metrics import record_structure_check
from .multilinear import (
    MultilinearMap,
    TensorElement,
    Word,
    admissible_words,
    invert_coalgebra_map,
    project,
    tensor_product,
)

logger = get_logger(__name__)


def is_acyclic_fibration(phi: InftyMorphism) -> bool:
    return is_fibration(phi.tangent) and is_weak_equivalence(phi.tangent_chain_map)


def is_weak_equivalence_morphism(phi: InftyMorphism) -> bool:
    return is_weak_equivalence(phi.tangent_chain_map)


def _expand(inclusion: FilteredLinearMap, word: Word) -> TensorElement:
    """ι^{⊗n} applied to a word"""
    element: TensorElement = {(): inclusion.source.field.one}
    for i in word:
        element = tensor_product(element, {(j,): c for j, c in inclusion.image(i).items()})
    return element

# ============================================================
# Acyclic Fibrations
# ============================================================

@dataclass
class FibrationDecomposition:
    """
    An acyclic fibration Φ : A ↠ A′ as the projection A ≅ A′ × K ↠ A′

    K = ker Φ¹₁ with the restricted differential; `isomorphism` is ⟨Φ, Ψ⟩
    and `inverse` its ∞-inverse, whose tangent is θ(x′, z) = τ(x′) + z.
    """

    phi: InftyMorphism
    kernel: Subspace
    kernel_algebra: ShiftedAInftyAlgebra
    psi: InftyMorphism
    product: ProductAlgebra
    isomorphism: InftyMorphism
    inverse: InftyMorphism
    contraction: AcyclicFibrationContraction


def decompose_acyclic_fibration(phi: InftyMorphism, order: str = "ascending") -> FibrationDecomposition:
    """Ψ¹₁ = id - τΦ¹₁ and Ψ¹ₙ = Ψ¹₁ h Q¹ₙ, with (τ, h) contracting Φ¹₁"""
    if not is_acyclic_fibration(phi):
        raise NotAcyclicFibrationError()
    A, target = phi.source, phi.target
    contraction = contract_acyclic_fibration(phi.tangent_chain_map, order)
    tau, h, kernel = contraction.section, contraction.homotopy, contraction.kernel
    K = abelian_algebra(FilteredComplex(kernel.space, kernel.restrict(A.differential)))
    one = A.field.one

    def project_to_kernel(v: Vector) -> Vector:
        return kernel.coordinates(vec_add(v, {i: -c for i, c in tau(phi.tangent(v)).items()}))

    components: dict[int, dict[Word, Vector]] = {1: {}}
    for i in range(A.dimension):
        image = project_to_kernel({i: one})
        if image:
            components[1][(i,)] = image
    for n in range(2, A.nilpotency):
        op = A.operations.get(n)
        if op is None:
            continue
        table: dict[Word, Vector] = {}
        for word, value in op.table.items():
            image = project_to_kernel(h(value))
            if image:
                table[word] = image
        if table:
            components[n] = table
    psi = InftyMorphism(A, K, components)
    product = ProductAlgebra(target, K)
    isomorphism = pairing(phi, psi, product)

    theta_table: dict[int, Vector] = {}
    for j in range(target.dimension):
        theta_table[j] = tau.linear.image(j)
    for k in range(K.dimension):
        theta_table[product.offset + k] = kernel.vectors[k]
    theta = FilteredLinearMap(product.space, A.space, theta_table)
    if theta.compose(isomorphism.tangent).table != FilteredLinearMap.identity(A.space).table:
        raise InvariantViolation("decomposition", "θ∘⟨Φ,Ψ⟩¹₁ ≠ id")
    if isomorphism.tangent.compose(theta).table != FilteredLinearMap.identity(product.space).table:
        raise InvariantViolation("decomposition", "⟨Φ,Ψ⟩¹₁∘θ ≠ id")
    inverse = invert_morphism(isomorphism)
    if not compose(product.projection(0), isomorphism, check=False).same_as(phi):
        raise InvariantViolation("decomposition", "pr₁∘⟨Φ,Ψ⟩ ≠ Φ")
    logger.debug("acyclic_fibration_decomposed", kernel_dimension=K.dimension)
    return FibrationDecomposition(phi, kernel, K, psi, product, isomorphism, inverse, contraction)


def right_inverse_acyclic_fibration(phi: InftyMorphism, order: str = "ascending") -> InftyMorphism:
    """χ = ⟨Φ, Ψ⟩⁻¹ ∘ i_{A′}, so that Φ∘χ = id"""
    decomposition = decompose_acyclic_fibration(phi, order)
    chi = compose(decomposition.inverse, decomposition.product.inclusion(0))
    if not compose(phi, chi, check=False).same_as(identity_morphism(phi.target)):
        raise InvariantViolation("right-inverse", "Φ∘χ ≠ id")
    if not is_weak_equivalence_morphism(chi):
        raise InvariantViolation("two-of-three", "Right inverse of an acyclic fibration is not a weak equivalence")
    return chi

# ============================================================
# Pullbacks of Strict Fibrations
# ============================================================

class StrictPullback:
    """
    Pullback of a strict fibration Φ : A ↠ A″ along Θ : A′ → A″

    H is the coalgebra automorphism of A′ × A with H¹₁(a′, a) = (a′, σΘ¹₁a′ + a)
    and H¹ₖ(a′₁,…,a′ₖ) = (0, σΘ¹ₖ(a′₁,…,a′ₖ)); J = H⁻¹ and Q̃ = J Q_× H. The
    pullback is A′ × ker Φ¹₁ with Q̃ restricted, and its legs are pr′H and prH.
    """

    def __init__(self, phi: InftyMorphism, theta: InftyMorphism, order: str = "ascending"):
        if not phi.is_strict:
            raise NotStrictError("Only strict fibrations are pulled back")
        if not is_fibration(phi.tangent):
            raise NotAFibrationError()
        if theta.target.space != phi.target.space:
            raise InvariantViolation("cospan", "Φ and Θ have different targets")
        self.phi = phi
        self.theta = theta
        A_prime, A = theta.source, phi.source
        self.sigma = filtered_section(phi.tangent, order)
        self.kernel = kernel_subspace(phi.tangent)
        self.ambient = ProductAlgebra(A_prime, A)
        P = self.ambient

        h_components: dict[int, dict[Word, Vector]] = {}
        one = A.field.one
        h_components[1] = {(i,): {i: one} for i in range(P.dimension)}
        for word, value in theta.component(1).table.items():
            h_components[1][word] = vec_add(h_components[1][word], P.right_vector(self.sigma(value)))
        for k, comp in theta.components.items():
            if k == 1:
                continue
            table = {}
            for word, value in comp.table.items():
                image = P.right_vector(self.sigma(value))
                if image:
                    table[word] = image
            if table:
                h_components[k] = table
        self.H_components = {
            k: MultilinearMap(P.space, P.space, k, table) for k, table in h_components.items()
        }
        self.J_components = invert_coalgebra_map(self.H_components)
        self.conjugated, self.J = transport_structure(P, self.J_components, label="pullback")
        self.H = InftyMorphism(self.conjugated, P, self.H_components)

        self.space, self.embedding = self._carrier()
        self.algebra = self._restrict_structure()
        self.inclusion = strict_morphism(self.algebra, self.conjugated, self.embedding)
        through = compose(self.H, self.inclusion)
        self.first = compose(P.projection(0), through)
        self.second = compose(P.projection(1), through)
        self._through = through
        if not compose(phi, self.second, check=False).same_as(compose(theta, self.first, check=False)):
            raise InvariantViolation("pullback-square", "Φ∘prH ≠ Θ∘pr′H")
        if not is_fibration(self.first.tangent):
            raise InvariantViolation("pullback-fibration", "pr′H is not a fibration")
        if is_weak_equivalence_morphism(phi) and not is_weak_equivalence_morphism(self.first):
            raise InvariantViolation("pullback-acyclic", "Pullback of an acyclic fibration is not acyclic")
        logger.debug("strict_pullback_built", dimension=self.algebra.dimension)

    def _carrier(self) -> tuple[FilteredGradedSpace, FilteredLinearMap]:
        P, kernel = self.ambient, self.kernel
        left = self.theta.source.space
        clash = set(left.names) & set(kernel.space.names)
        basis = [BasisVector(f"1:{b.name}" if clash else b.name, b.degree, b.weight) for b in left.basis]
        basis += [BasisVector(f"2:{b.name}" if clash else b.name, b.degree, b.weight) for b in kernel.space.basis]
        space = FilteredGradedSpace(P.field, basis, P.nilpotency)
        one = P.field.one
        table = {i: {i: one} for i in range(left.dimension)}
        for k, v in enumerate(kernel.vectors):
            table[left.dimension + k] = P.right_vector(v)
        return space, FilteredLinearMap(space, P.space, table)

    def coordinates(self, v: Mapping[int, Any]) -> Vector:
        """Coordinates in A′ × ker Φ¹₁ of a vector of A′ × A lying there"""
        left, right = self.ambient.split(v)
        offset = self.theta.source.dimension
        result = dict(left)
        for k, c in self.kernel.coordinates(right).items():
            result[offset + k] = c
        return result

    def _restrict_structure(self) -> ShiftedAInftyAlgebra:
        space = self.space
        operations: dict[int, dict[Word, Vector]] = {}
        for n in range(1, space.nilpotency):
            table: dict[Word, Vector] = {}
            for word in admissible_words(space, n):
                value = project(self.conjugated.operations, _expand(self.embedding, word))
                if value:
                    table[word] = self.coordinates(value)
            if table:
                operations[n] = table
        return ShiftedAInftyAlgebra(space, operations, label="pullback")

    def check_conjugation(self) -> bool:
        """HJ = JH = id on the ambient coalgebra"""
        P = self.ambient
        identity = identity_morphism(P)
        via = InftyMorphism(P, P, self.J_components, check=False)
        back = InftyMorphism(P, P, self.H_components, check=False)
        ok = compose(back, via, check=False).same_as(identity) and compose(via, back, check=False).same_as(identity)
        record_structure_check("pullback-conjugation", ok)
        return ok

    def mediating(self, to_theta_side: InftyMorphism, to_phi_side: InftyMorphism) -> InftyMorphism:
        """
        The unique M : C → Ã with pr′H∘M = Ψ′ and prH∘M = Ψ for a cone
        Θ∘Ψ′ = Φ∘Ψ; M = J∘⟨Ψ′, Ψ⟩ read in pullback coordinates
        """
        if not compose(self.theta, to_theta_side, check=False).same_as(compose(self.phi, to_phi_side, check=False)):
            raise InvariantViolation("cone", "Θ∘Ψ′ ≠ Φ∘Ψ")
        into_product = pairing(to_theta_side, to_phi_side, self.ambient)
        into_conjugated = compose(self.J, into_product)
        components = {
            k: {word: self.coordinates(value) for word, value in comp.table.items()}
            for k, comp in into_conjugated.components.items()
        }
        M = InftyMorphism(to_theta_side.source, self.algebra, components)
        if not compose(self.first, M, check=False).same_as(to_theta_side):
            raise InvariantViolation("pullback-triangle", "pr′H∘M ≠ Ψ′")
        if not compose(self.second, M, check=False).same_as(to_phi_side):
            raise InvariantViolation("pullback-triangle", "prH∘M ≠ Ψ")
        return M

    def mediating_is_unique(self) -> bool:
        """
        (pr′H, prH) has injective tangent, so a mediating morphism is determined
        arity by arity from the two triangle identities
        """
        tangent = self._through.tangent
        solver = LinearSolver(
            self.space.field,
            [tangent.image(i) for i in range(self.space.dimension)],
            range(self.ambient.dimension),
        )
        return solver.rank == self.space.dimension


def pullback_strict_fibration(phi: InftyMorphism, theta: InftyMorphism, order: str = "ascending") -> StrictPullback:
    return StrictPullback(phi, theta, order)

# ============================================================
# Path Objects & Factorization
# ============================================================

@dataclass
class PathObject:
    """A → A⊗N*(Δ¹) → A × A factoring the diagonal"""

    algebra: ShiftedAInftyAlgebra
    path: ShiftedAInftyAlgebra
    unit: InftyMorphism
    evaluations: tuple[InftyMorphism, InftyMorphism]
    endpoints: InftyMorphism
    square: ProductAlgebra


def path_object(A: ShiftedAInftyAlgebra) -> PathObject:
    """id⊗𝟏 is a strict weak equivalence and ⟨id⊗ev₀, id⊗ev₁⟩ a strict fibration"""
    field = A.field
    unit = compose(tensor_dga_map(A, interval_unit(field)), ground_identification(A))
    path = unit.target
    ev0, ev1 = (compose(ground_projection(A), tensor_dga_map(A, ev)) for ev in interval_evaluations(field))
    square = ProductAlgebra(A, A)
    endpoints = pairing(ev0, ev1, square)
    diagonal = pairing(identity_morphism(A), identity_morphism(A), square)
    if not compose(endpoints, unit, check=False).same_as(diagonal):
        raise InvariantViolation("path-object", "(id⊗ρ)∘(id⊗𝟏) is not the diagonal")
    if not is_weak_equivalence_morphism(unit):
        raise InvariantViolation("path-object", "id⊗𝟏 is not a weak equivalence")
    if not is_fibration(endpoints.tangent):
        raise InvariantViolation("path-object", "id⊗ρ is not a fibration")
    return PathObject(A, path, unit, (ev0, ev1), endpoints, square)


@dataclass
class Factorization:
    """Θ = P_Θ ∘ Ψ with Ψ a weak equivalence and P_Θ a fibration"""

    theta: InftyMorphism
    pullback: StrictPullback
    path: PathObject
    weak_equivalence: InftyMorphism
    fibration: InftyMorphism

    @property
    def fibration_is_acyclic(self) -> bool:
        return is_weak_equivalence_morphism(self.fibration)


def factorize(theta: InftyMorphism, order: str = "ascending") -> Factorization:
    """
    Pull id⊗ev₀ back along Θ; Ψ mediates the cone (id, (id⊗𝟏)∘Θ) and
    P_Θ = (id⊗ev₁)∘prH
    """
    path = path_object(theta.target)
    ev0, ev1 = path.evaluations
    pullback = StrictPullback(ev0, theta, order)
    psi = pullback.mediating(identity_morphism(theta.source), compose(path.unit, theta))
    p_theta = compose(ev1, pullback.second)
    if not compose(p_theta, psi, check=False).same_as(theta):
        raise InvariantViolation("factorization", "P_Θ∘Ψ ≠ Θ")
    if not compose(pullback.first, psi, check=False).same_as(identity_morphism(theta.source)):
        raise InvariantViolation("factorization", "Ψ is not a section of pr′H")
    if not is_weak_equivalence_morphism(psi):
        raise InvariantViolation("factorization", "Ψ is not a weak equivalence")
    if not is_fibration(p_theta.tangent):
        raise InvariantViolation("factorization", "P_Θ is not a fibration")
    factorization = Factorization(theta, pullback, path, psi, p_theta)
    if is_weak_equivalence_morphism(theta) and not factorization.fibration_is_acyclic:
        raise InvariantViolation("factorization", "Θ is a weak equivalence but P_Θ is not acyclic")
    return factorization


def compare_splittings(phi: InftyMorphism, theta: InftyMorphism) -> bool:
    """
    Pullbacks built from the ascending and descending sections σ are
    isomorphic: the mediating morphism between them has invertible tangent
    """
    ascending = StrictPullback(phi, theta, "ascending")
    descending = StrictPullback(phi, theta, "descending")
    M = descending.mediating(ascending.first, ascending.second)
    dimension = ascending.space.dimension
    if dimension != descending.space.dimension:
        return False
    solver = LinearSolver(
        ascending.space.field,
        [M.tangent.image(i) for i in range(dimension)],
        range(dimension),
    )
    ok = solver.rank == dimension
    record_structure_check("pullback-splitting", ok)
    return ok
