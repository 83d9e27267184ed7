"""
Homotopy transfer onto cohomology

For a contraction (ι, π, h) of (A, Q¹₁) onto H with id - ιπ = dh + hd:

    λₙ = Σ_{k>=2} Q¹ₖ ∘ Φᵏₙ        (only Φ¹ₘ with m < n enter)
    Q_tran¹ₙ = π λₙ,  Φ¹₁ = ι,  Φ¹ₙ = -h λₙ

Φ : (H, 0, Q_tran) → A is an ∞-quasi-isomorphism. Every output is checked
against the Stasheff and morphism identities before it is returned.
"""
from dataclasses import dataclass

from .ainfty import InftyMorphism, ShiftedAInftyAlgebra
from .exceptions import TransferError
from .linalg import CohomologyContraction, Vector, cohomology_contraction, is_weak_equivalence
from .logging_config import get_logger
from .metrics import record_structure_check
from .multilinear import MultilinearMap, Word, admissible_words, apply_coalgebra_map, project

logger = get_logger(__name__)


@dataclass
class TransferResult:
    """H with the transferred structure, Φ : H → A and the contraction used"""

    algebra: ShiftedAInftyAlgebra
    morphism: InftyMorphism
    contraction: CohomologyContraction

    @property
    def is_weak_equivalence(self) -> bool:
        return is_weak_equivalence(self.morphism.tangent_chain_map)


def transfer(A: ShiftedAInftyAlgebra, *, label: str = "") -> TransferResult:
    contraction = cohomology_contraction(A.complex)
    H = contraction.space
    one = A.field.one
    minus = A.field(-1)
    higher = {k: op for k, op in A.operations.items() if k >= 2}

    components: dict[int, MultilinearMap] = {1: MultilinearMap.from_linear(contraction.inclusion)}
    operations: dict[int, dict[Word, Vector]] = {}
    for n in range(2, H.nilpotency):
        structure: dict[Word, Vector] = {}
        morphism: dict[Word, Vector] = {}
        for word in admissible_words(H, n, A.nilpotency):
            expanded = apply_coalgebra_map(components, {word: one}, A.nilpotency)
            lam = project(higher, expanded)
            if not lam:
                continue
            projected = contraction.projection(lam)
            if projected:
                structure[word] = projected
            lifted = contraction.homotopy(lam)
            if lifted:
                morphism[word] = {i: minus * c for i, c in lifted.items()}
        if structure:
            operations[n] = structure
        if morphism:
            components[n] = MultilinearMap(H, A.space, n, morphism)

    transferred = ShiftedAInftyAlgebra(H, operations, check=True, label=label or f"H({A.label})")
    phi = InftyMorphism(transferred, A, components, check=True)
    result = TransferResult(transferred, phi, contraction)
    ok = result.is_weak_equivalence
    record_structure_check("transfer-weak-equivalence", ok)
    if not ok:
        raise TransferError("Transfer morphism is not a weak equivalence")
    logger.debug(
        "structure_transferred",
        source_dimension=A.dimension,
        cohomology_dimension=transferred.dimension,
        arities=sorted(transferred.operations),
    )
    return result


def transfer_product(result: TransferResult, x: Vector, y: Vector) -> Vector:
    """Q_tran¹₂(x, y) on cohomology coordinates"""
    return result.algebra.operation(2)(x, y)
