"""
Seeded generators for valid instances

Random Stasheff-valid tables are rare, so most families are built from
constructions that are valid by design (nilpotent matrix algebras, truncated
polynomial ideals, B ⊗ 𝔪) and then disguised by transport along a random
∞-isomorphism, which produces genuine Q¹₃ and non-strict morphisms. Sparse
tables on a zero differential are rejection-sampled.
"""
import random
from dataclasses import dataclass
from typing import Any, Optional

from .ainfty import (
    DGAlgebraPresentation,
    InftyMorphism,
    ShiftedAInftyAlgebra,
    abelian_algebra,
    check_stasheff,
    compose,
    invert_morphism,
    transport_structure,
)
from .cochains import FiniteDGAlgebra, tensor_name
from .constructions import ProductAlgebra
from .exceptions import InputError
from .linalg import BasisVector, Field, FilteredComplex, FilteredGradedSpace, FilteredLinearMap, Vector, get_field
from .logging_config import get_logger
from .models import InstanceDescriptor
from .multilinear import MultilinearMap, Word, admissible_words, word_degree, word_weight

logger = get_logger(__name__)


@dataclass
class Instance:
    """A generated structure and where it came from"""

    descriptor: InstanceDescriptor
    value: Any


def _rng(seed: int, salt: str) -> random.Random:
    return random.Random(f"{salt}:{seed}")


def _scalar(rng: random.Random, field: Field, allow_zero: bool = True):
    if field.is_finite:
        choices = field.elements() if allow_zero else field.nonzero_elements()
        return rng.choice(choices)
    value = rng.choice([-2, -1, 1, 2, 3] + ([0] if allow_zero else []))
    return field(value)

# ============================================================
# DG Algebra Families
# ============================================================

def truncated_polynomial(field: Field, order: int, degree: int = 0) -> DGAlgebraPresentation:
    """t·𝔽[t]/(tᴺ) with |t| = degree (unshifted) and tʲ of weight j"""
    names = ["t" if j == 1 else f"t{j}" for j in range(1, order)]
    basis = [BasisVector(names[j - 1], degree * j, j) for j in range(1, order)]
    space = FilteredGradedSpace(field, basis, order)
    product = {
        (i - 1, j - 1): {i + j - 1: field.one}
        for i in range(1, order)
        for j in range(1, order)
        if i + j < order
    }
    return DGAlgebraPresentation(space, {}, product, label=f"tF{field.characteristic}[t]/(t^{order})")


def z4_regression() -> DGAlgebraPresentation:
    """t·𝔽₂[t]/(t³) in degree 0: π₁ is Z/4, not the Klein four-group"""
    return truncated_polynomial(get_field(2), 3, 0)


def upper_triangular(
    field: Field,
    size: int,
    heights: list[int],
    differential_entry: Optional[tuple[int, int]] = None,
) -> DGAlgebraPresentation:
    """
    Strictly upper triangular matrices, E_ij of degree h_j - h_i and weight j - i

    d = [E_pq, -] (graded commutator) for a degree-1 entry E_pq, which squares
    to zero since E_pq² = 0.
    """
    cells = [(i, j) for i in range(size) for j in range(i + 1, size)]
    index = {cell: k for k, cell in enumerate(cells)}
    basis = [BasisVector(f"E{i}{j}", heights[j] - heights[i], j - i) for i, j in cells]
    space = FilteredGradedSpace(field, basis, size)
    product = {
        (index[(i, j)], index[(j, k)]): {index[(i, k)]: field.one}
        for (i, j) in cells
        for k in range(j + 1, size)
    }
    differential: dict[int, Vector] = {}
    if differential_entry is not None:
        p, q = differential_entry
        if heights[q] - heights[p] != 1:
            raise InputError(f"The differential entry {differential_entry} must have degree 1")
        minus = field(-1)
        for (a, b), k in index.items():
            image: Vector = {}
            if a == q:
                image[index[(p, b)]] = field.one
            if b == p:
                sign = field.one if (heights[b] - heights[a]) % 2 else minus
                image[index[(a, q)]] = image.get(index[(a, q)], field.zero) + sign
            image = {i: c for i, c in image.items() if c}
            if image:
                differential[k] = image
    label = f"n{size}({','.join(map(str, heights))})"
    return DGAlgebraPresentation(space, differential, product, label=label)


def exterior_algebra(field: Field, degree: int) -> FiniteDGAlgebra:
    """𝔽[ε]/ε² with |ε| = degree, unital"""
    one = field.one
    product = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}}
    return FiniteDGAlgebra(field, ["1", "e"], [0, degree], {}, product, {0: one})


def tensor_ideal(B: FiniteDGAlgebra, order: int) -> DGAlgebraPresentation:
    """B ⊗ t·𝔽[t]/(tᴺ)"""
    field = B.field
    m = B.dimension
    basis = [
        BasisVector(tensor_name(B.names[i], "t" if j == 1 else f"t{j}"), B.degrees[i], j)
        for j in range(1, order)
        for i in range(m)
    ]

    def pair(i: int, j: int) -> int:
        return (j - 1) * m + i

    space = FilteredGradedSpace(field, basis, order)
    differential = {
        pair(i, j): {pair(k, j): c for k, c in image.items()}
        for i, image in B.differential.items()
        for j in range(1, order)
    }
    product = {
        (pair(i1, j1), pair(i2, j2)): {pair(k, j1 + j2): c for k, c in image.items()}
        for (i1, i2), image in B.product.items()
        for j1 in range(1, order)
        for j2 in range(1, order)
        if j1 + j2 < order
    }
    return DGAlgebraPresentation(space, differential, product, label=f"B⊗m(t^{order})")


def random_dga(seed: int, field: Optional[Field] = None, max_dimension: int = 4) -> Instance:
    """One of the dg algebra families, with seeded parameters"""
    rng = _rng(seed, "dga")
    field = field or get_field(rng.choice([2, 3]))
    family = rng.choice(["polynomial", "triangular", "exterior"])
    if family == "triangular" and max_dimension >= 3:
        size = 3 if max_dimension < 6 else rng.choice([3, 4])
        heights = [0]
        for _ in range(size - 1):
            heights.append(heights[-1] + rng.choice([0, 1]))
        entries = [(p, q) for p in range(size) for q in range(p + 1, size) if heights[q] - heights[p] == 1]
        entry = rng.choice(entries) if entries and rng.random() < 0.5 else None
        C = upper_triangular(field, size, heights, entry)
        parameters = {"size": size, "heights": heights, "differential": list(entry) if entry else None}
    elif family == "exterior" and max_dimension >= 2:
        degree = rng.choice([-1, 0, 1])
        order = 2 if max_dimension < 4 else rng.choice([2, 3])
        C = tensor_ideal(exterior_algebra(field, degree), order)
        parameters = {"degree": degree, "order": order}
    else:
        family = "polynomial"
        order = rng.randint(2, min(4, max_dimension + 1))
        degree = rng.choice([0, 0, 1, -1])
        C = truncated_polynomial(field, order, degree)
        parameters = {"order": order, "degree": degree}
    descriptor = InstanceDescriptor(
        name=f"dga-{family}-{seed}",
        generator=f"dga/{family}",
        seed=seed,
        parameters={"characteristic": field.characteristic, **parameters},
    )
    return Instance(descriptor, C)

# ============================================================
# A∞ Families
# ============================================================

def random_isomorphism_components(
    rng: random.Random,
    A: ShiftedAInftyAlgebra,
    density: float = 0.5,
    max_arity: int = 2,
) -> dict[int, MultilinearMap]:
    """id + weight-raising noise in arity 1, sparse degree-0 tables above"""
    space = A.space
    field = A.field
    linear: dict[Word, Vector] = {(i,): {i: field.one} for i in range(space.dimension)}
    for i in range(space.dimension):
        for j in range(space.dimension):
            if space.degrees[j] == space.degrees[i] and space.weights[j] > space.weights[i] and rng.random() < density:
                c = _scalar(rng, field, allow_zero=False)
                linear[(i,)] = {**linear[(i,)], j: c}
    components = {1: MultilinearMap(space, space, 1, linear, 0)}
    for k in range(2, min(max_arity, space.nilpotency - 1) + 1):
        table: dict[Word, Vector] = {}
        for word in admissible_words(space, k):
            degree, weight = word_degree(space, word), word_weight(space, word)
            targets = [j for j in range(space.dimension) if space.degrees[j] == degree and space.weights[j] >= weight]
            if targets and rng.random() < density:
                table[word] = {rng.choice(targets): _scalar(rng, field, allow_zero=False)}
        if table:
            components[k] = MultilinearMap(space, space, k, table, 0)
    return components


def disguise(rng: random.Random, A: ShiftedAInftyAlgebra, density: float = 0.5) -> tuple[ShiftedAInftyAlgebra, InftyMorphism]:
    """Transport along a random ∞-isomorphism F; returns (A′, F : A → A′)"""
    return transport_structure(A, random_isomorphism_components(rng, A, density), label=f"{A.label}'")


def sample_sparse_ainfty(
    seed: int,
    field: Field,
    dimension: int = 3,
    nilpotency: int = 4,
    attempts: int = 200,
) -> ShiftedAInftyAlgebra:
    """Random Q¹₂, Q¹₃ tables on a zero differential, rejection-sampled for Stasheff"""
    rng = _rng(seed, "sparse")
    for attempt in range(attempts):
        basis = [
            BasisVector(f"x{i}", rng.choice([-1, 0]), rng.randint(1, nilpotency - 1))
            for i in range(dimension)
        ]
        space = FilteredGradedSpace(field, basis, nilpotency)
        operations: dict[int, dict[Word, Vector]] = {}
        for k in (2, 3):
            table: dict[Word, Vector] = {}
            for word in admissible_words(space, k):
                degree, weight = word_degree(space, word) + 1, word_weight(space, word)
                targets = [j for j in range(dimension) if space.degrees[j] == degree and space.weights[j] >= weight]
                if targets and rng.random() < 0.4:
                    table[word] = {rng.choice(targets): _scalar(rng, field, allow_zero=False)}
            if table:
                operations[k] = table
        candidate = ShiftedAInftyAlgebra(space, operations, check=False, label=f"sparse-{seed}")
        if check_stasheff(candidate):
            logger.debug("sparse_instance_accepted", seed=seed, attempts=attempt + 1)
            return candidate
    logger.debug("sparse_instance_fallback", seed=seed)
    return ShiftedAInftyAlgebra(FilteredGradedSpace(field, [], nilpotency), {}, label=f"sparse-{seed}")


def random_ainfty(seed: int, field: Optional[Field] = None, max_dimension: int = 4) -> Instance:
    """A dg algebra, a disguised dg algebra, or a sparse sample"""
    rng = _rng(seed, "ainfty")
    field = field or get_field(rng.choice([2, 3]))
    family = rng.choice(["dga", "disguised", "disguised", "sparse"])
    if family == "sparse":
        A = sample_sparse_ainfty(seed, field, min(3, max_dimension))
        parameters: dict[str, Any] = {}
    else:
        base = random_dga(seed, field, max_dimension)
        A = base.value.shifted
        parameters = dict(base.descriptor.parameters)
        parameters["base"] = base.descriptor.generator
        if family == "disguised":
            A, _ = disguise(rng, A)
    descriptor = InstanceDescriptor(
        name=f"ainfty-{family}-{seed}",
        generator=f"ainfty/{family}",
        seed=seed,
        parameters={"characteristic": field.characteristic, **parameters},
    )
    return Instance(descriptor, A)


def rational_instance(seed: int) -> Instance:
    """Over QQ, with nonzero Q¹₃ on odd seeds"""
    rng = _rng(seed, "rational")
    field = get_field(0)
    choice = seed % 3
    if choice == 0:
        C = truncated_polynomial(field, rng.randint(3, 4), 0)
    elif choice == 1:
        C = upper_triangular(field, 3, [0, 1, 1], (0, 1))
    else:
        C = tensor_ideal(exterior_algebra(field, rng.choice([-1, 0])), 3)
    A = C.shifted
    if seed % 2:
        A, _ = disguise(rng, A, density=0.7)
    descriptor = InstanceDescriptor(
        name=f"rational-{seed}",
        generator="rational",
        seed=seed,
        parameters={"base": C.label, "disguised": bool(seed % 2), "q3": 3 in A.operations},
    )
    return Instance(descriptor, A)

# ============================================================
# Morphism Families
# ============================================================

def acyclic_abelian(field: Field, degree: int, weight: int, nilpotency: int) -> ShiftedAInftyAlgebra:
    """x ↦ y with d x = y, both of the given weight"""
    basis = [BasisVector("kx", degree, weight), BasisVector("ky", degree + 1, weight)]
    space = FilteredGradedSpace(field, basis, nilpotency)
    d = FilteredLinearMap(space, space, {0: {1: field.one}}, 1)
    return abelian_algebra(FilteredComplex(space, d))


def product_projection(seed: int, A: ShiftedAInftyAlgebra) -> InftyMorphism:
    """pr₁ : A × K ↠ A for acyclic K, precomposed with a random ∞-isomorphism"""
    rng = _rng(seed, "projection")
    K = acyclic_abelian(A.field, rng.choice([-1, 0]), rng.randint(1, A.nilpotency - 1), A.nilpotency)
    P = ProductAlgebra(A, K)
    _, F = disguise(rng, P, density=0.4)
    return compose(P.projection(0), invert_morphism(F))


def strict_projection(A: ShiftedAInftyAlgebra, B: ShiftedAInftyAlgebra) -> InftyMorphism:
    """pr₁ : A × B ↠ A, a strict fibration"""
    return ProductAlgebra(A, B).projection(0)


def random_cone_morphism(seed: int, A: ShiftedAInftyAlgebra) -> InftyMorphism:
    """An ∞-isomorphism C → A from a random disguise C of A"""
    rng = _rng(seed, "cone")
    _, F = disguise(rng, A, density=0.4)
    return invert_morphism(F)

