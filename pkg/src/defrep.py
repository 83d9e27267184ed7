"""
Deformations of finite group representations

The Hochschild complex C*(G, End V)^ρ is a dg algebra under the cup product;
tensoring with the maximal ideal of 𝔽[t]/(tᴺ) gives the complete filtered dg
algebra C_R, whose MC elements are the lifts ρ + Σ tʲcⱼ of ρ to R. Lifts up
to conjugation by 1 + 𝔪·End V are counted three ways: gauge orbits on C_R,
π₀ of the nerve of C_R, and π₀ of the nerve of the transferred structure.
"""
from dataclasses import dataclass
from itertools import permutations, product as cartesian
from typing import Any, Mapping, Optional, Sequence

from sympy.polys.matrices import DomainMatrix

from .ainfty import DGAlgebraPresentation, ShiftedAInftyAlgebra
from .cochains import FiniteDGAlgebra, tensor_name
from .config import settings
from .exceptions import GroupAxiomError, InputError, InvariantViolation, SizeCapExceeded
from .linalg import BasisVector, Field, FilteredGradedSpace, Vector, vec_axpy, vector_key
from .logging_config import get_logger
from .maurer_cartan import gauge_orbits, is_maurer_cartan, pushforward
from .metrics import record_structure_check
from .nerve import pi0
from .transfer import TransferResult, transfer

logger = get_logger(__name__)

# ============================================================
# Groups & Representations
# ============================================================

class FiniteGroup:
    """Cayley table on elements 0..order-1; axioms checked exhaustively"""

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[int]], identity: int = 0, *, check: bool = True):
        self.elements = tuple(elements)
        self.table = tuple(tuple(row) for row in table)
        self.identity = identity
        if check:
            self.validate()
        self._inverses = tuple(
            next(h for h in range(self.order) if self.table[g][h] == identity) for g in range(self.order)
        )

    @property
    def order(self) -> int:
        return len(self.elements)

    def multiply(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inverse(self, g: int) -> int:
        return self._inverses[g]

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise InputError(f"Unknown group element {name!r}") from None

    def validate(self) -> None:
        n = self.order
        if len(set(self.elements)) != n:
            raise GroupAxiomError("group-elements", "Duplicate group element names")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise GroupAxiomError("group-table", "Cayley table is not square")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise GroupAxiomError("group-closure", "Cayley table entry outside the group")
        e = self.identity
        for g in range(n):
            if self.table[e][g] != g or self.table[g][e] != g:
                raise GroupAxiomError("group-identity", f"{self.elements[e]!r} is not an identity")
            if not any(self.table[g][h] == e and self.table[h][g] == e for h in range(n)):
                raise GroupAxiomError("group-inverse", f"{self.elements[g]!r} has no inverse")
        for g, h, k in cartesian(range(n), repeat=3):
            if self.table[self.table[g][h]][k] != self.table[g][self.table[h][k]]:
                raise GroupAxiomError(
                    "group-associativity",
                    f"({self.elements[g]}{self.elements[h]}){self.elements[k]} ≠ "
                    f"{self.elements[g]}({self.elements[h]}{self.elements[k]})"
                )

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


def trivial_group() -> FiniteGroup:
    return FiniteGroup(["e"], [[0]])


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError(f"Cyclic group order must be positive, got {n}")
    names = ["e"] + [f"g{k}" if k > 1 else "g" for k in range(1, n)]
    return FiniteGroup(names, [[(a + b) % n for b in range(n)] for a in range(n)])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    names = [f"({g},{h})" for g in G.elements for h in H.elements]

    def index(g: int, h: int) -> int:
        return g * H.order + h

    table = [
        [index(G.multiply(g1, g2), H.multiply(h1, h2)) for g2 in range(G.order) for h2 in range(H.order)]
        for g1 in range(G.order)
        for h1 in range(H.order)
    ]
    return FiniteGroup(names, table, index(G.identity, H.identity))


def symmetric_group(n: int) -> FiniteGroup:
    """Sₙ on permutations in lexicographic order; (στ)(i) = σ(τ(i))"""
    perms = list(permutations(range(n)))
    position = {p: k for k, p in enumerate(perms)}
    names = ["".join(str(i + 1) for i in p) for p in perms]
    table = [[position[tuple(s[t[i]] for i in range(n))] for t in perms] for s in perms]
    return FiniteGroup(names, table, position[tuple(range(n))])


def same_matrix(a: DomainMatrix, b: DomainMatrix) -> bool:
    """Entrywise equality; DomainMatrix == also compares dense against sparse storage"""
    return a.to_dense() == b.to_dense()


class Representation:
    """ρ : G → GL_d(𝔽) as one DomainMatrix per group element"""

    def __init__(self, group: FiniteGroup, field: Field, matrices: Sequence[Sequence[Sequence[Any]]], *, check: bool = True):
        self.group = group
        self.field = field
        if len(matrices) != group.order:
            raise InputError(f"Expected {group.order} matrices, got {len(matrices)}")
        self.dimension = len(matrices[0]) if matrices else 0
        self.matrices = [
            DomainMatrix([[field(c) for c in row] for row in m], (self.dimension, self.dimension), field.domain)
            for m in matrices
        ]
        self.entries = [m.to_list() for m in self.matrices]
        if check:
            self.validate()

    def validate(self) -> None:
        d = self.dimension
        identity = DomainMatrix.eye(d, self.field.domain)
        if any(m.shape != (d, d) for m in self.matrices):
            raise GroupAxiomError("representation-shape", "Matrices are not all d×d")
        if not same_matrix(self.matrices[self.group.identity], identity):
            raise GroupAxiomError("representation-identity", "ρ(e) ≠ id")
        G = self.group
        for g, h in cartesian(range(G.order), repeat=2):
            if not same_matrix(self.matrices[g] * self.matrices[h], self.matrices[G.multiply(g, h)]):
                raise GroupAxiomError(
                    "representation-homomorphism",
                    f"ρ({G.elements[g]})ρ({G.elements[h]}) ≠ ρ({G.elements[g]}{G.elements[h]})"
                )

    def __repr__(self) -> str:
        return f"Representation(dim={self.dimension}, {self.group}, {self.field})"


def trivial_representation(group: FiniteGroup, field: Field, dimension: int = 1) -> Representation:
    eye = [[field.one if a == b else field.zero for b in range(dimension)] for a in range(dimension)]
    return Representation(group, field, [eye] * group.order)


def regular_representation(group: FiniteGroup, field: Field) -> Representation:
    """g·e_h = e_{gh}"""
    n = group.order
    matrices = [
        [[field.one if group.multiply(g, h) == k else field.zero for h in range(n)] for k in range(n)]
        for g in range(n)
    ]
    return Representation(group, field, matrices)


@dataclass(frozen=True)
class ArtinLocalRing:
    """𝔽[t]/(tᴺ) with 𝔪 spanned by t, …, t^{N-1}, tʲ of weight j"""

    field: Field
    order: int

    def __post_init__(self):
        if self.order < 2:
            raise InputError(f"Truncation order must be at least 2, got {self.order}")

    @property
    def names(self) -> list[str]:
        return ["t" if j == 1 else f"t^{j}" for j in range(1, self.order)]

    def power(self, i: int, j: int) -> Optional[int]:
        """tⁱ·tʲ as a power, or None when it vanishes"""
        return i + j if i + j < self.order else None

    @classmethod
    def parse(cls, field: Field, text: str) -> "ArtinLocalRing":
        """'t^N' names 𝔽[t]/(tᴺ)"""
        body = text.strip()
        if not body.startswith("t^") or not body[2:].isdigit():
            raise InputError(f"Ring must be given as t^N, got {text!r}")
        return cls(field, int(body[2:]))

# ============================================================
# Hochschild Complexes
# ============================================================

class HochschildComplex(FiniteDGAlgebra):
    """
    C*(G, End V)^ρ brutally truncated above top_degree + 1

    Basis φ_{T,ab} is E_ab at the tuple T ∈ Gⁿ and zero elsewhere. Cⁿ for
    n <= top_degree + 1 is kept, so Hⁿ is exact for n <= top_degree.
    """

    def __init__(self, representation: Representation, top_degree: int, cells, differential, product):
        self.representation = representation
        self.top_degree = top_degree
        self.cells: list[tuple[tuple[int, ...], int, int]] = cells
        self._cell_index = {cell: i for i, cell in enumerate(cells)}
        G, d = representation.group, representation.dimension
        names = []
        for tuple_, a, b in cells:
            label = f"c{len(tuple_)}({','.join(G.elements[g] for g in tuple_)})"
            names.append(label if d == 1 else f"{label}_{a}{b}")
        super().__init__(
            representation.field, names, [len(t) for t, _, _ in cells], differential, product
        )

    def cell(self, tuple_: tuple[int, ...], a: int = 0, b: int = 0) -> int:
        return self._cell_index[(tuple(tuple_), a, b)]

    def evaluate(self, v: Mapping[int, Any], tuple_: Sequence[int]) -> list[list[Any]]:
        """The matrix φ(g₁,…,gₙ) of a cochain"""
        d = self.representation.dimension
        field = self.field
        matrix = [[field.zero] * d for _ in range(d)]
        for i, c in v.items():
            t, a, b = self.cells[i]
            if t == tuple(tuple_):
                matrix[a][b] += c
        return matrix


def hochschild_complex(representation: Representation, top_degree: Optional[int] = None) -> HochschildComplex:
    """
    (dφ)(g₁,…,gₙ₊₁) = ρ(g₁)φ(g₂,…) + Σᵢ(-1)ⁱ φ(…,gᵢgᵢ₊₁,…) + (-1)ⁿ⁺¹ φ(g₁,…,gₙ)ρ(gₙ₊₁)
    and (φ⌣ψ)(g₁,…,g_{p+q}) = φ(g₁,…,g_p)ψ(g_{p+1},…,g_{p+q})
    """
    top = settings.hochschild_top_degree if top_degree is None else top_degree
    G, d, field = representation.group, representation.dimension, representation.field
    rho = representation.entries
    for n in range(top + 2):
        size = G.order ** n * d * d
        if size > settings.hochschild_max_dimension:
            raise SizeCapExceeded(f"C^{n}(G, End V)", size, settings.hochschild_max_dimension)

    cells: list[tuple[tuple[int, ...], int, int]] = []
    for n in range(top + 2):
        for tuple_ in cartesian(range(G.order), repeat=n):
            for a, b in cartesian(range(d), repeat=2):
                cells.append((tuple_, a, b))
    index = {cell: i for i, cell in enumerate(cells)}
    one, minus = field.one, field(-1)

    differential: dict[int, Vector] = {}
    for i, (T, a, b) in enumerate(cells):
        n = len(T)
        if n > top:
            continue
        image: Vector = {}
        for g in range(G.order):
            # ρ(g)E_ab = Σ_k ρ(g)_ka E_kb
            for k in range(d):
                c = rho[g][k][a]
                if c:
                    vec_axpy(image, c, {index[((g,) + T, k, b)]: one})
            # E_ab ρ(g) = Σ_k ρ(g)_bk E_ak
            sign = minus if (n + 1) % 2 else one
            for k in range(d):
                c = rho[g][b][k]
                if c:
                    vec_axpy(image, sign * c, {index[(T + (g,), a, k)]: one})
        for position in range(1, n + 1):
            sign = minus if position % 2 else one
            merged = T[position - 1]
            for g in range(G.order):
                h = G.multiply(G.inverse(g), merged)
                S = T[:position - 1] + (g, h) + T[position:]
                vec_axpy(image, sign, {index[(S, a, b)]: one})
        if image:
            differential[i] = image

    product: dict[tuple[int, int], Vector] = {}
    for i, (T, a, b) in enumerate(cells):
        for j, (U, c, e) in enumerate(cells):
            if b != c or len(T) + len(U) > top + 1:
                continue
            product[(i, j)] = {index[(T + U, a, e)]: one}

    C = HochschildComplex(representation, top, cells, differential, product)
    logger.debug("hochschild_complex_built", dimension=C.dimension, top_degree=top)
    return C

# ============================================================
# Deformation Complexes
# ============================================================

class DeformationComplex(DGAlgebraPresentation):
    """C ⊗ 𝔪 with basis φ⊗tʲ of weight j; index (j-1)·dim C + i"""

    def __init__(self, cochains: FiniteDGAlgebra, ring: ArtinLocalRing):
        self.cochains = cochains
        self.ring = ring
        m = cochains.dimension
        ring_names = ring.names
        basis = [
            BasisVector(tensor_name(cochains.names[i], ring_names[j - 1]), cochains.degrees[i], j)
            for j in range(1, ring.order)
            for i in range(m)
        ]
        space = FilteredGradedSpace(cochains.field, basis, ring.order)
        differential: dict[int, Vector] = {}
        for i, image in cochains.differential.items():
            for j in range(1, ring.order):
                differential[self.pair(i, j)] = {self.pair(k, j): c for k, c in image.items()}
        product: dict[tuple[int, int], Vector] = {}
        for (i1, i2), image in cochains.product.items():
            for j1 in range(1, ring.order):
                for j2 in range(1, ring.order):
                    power = ring.power(j1, j2)
                    if power is None:
                        continue
                    product[(self.pair(i1, j1), self.pair(i2, j2))] = {
                        self.pair(k, power): c for k, c in image.items()
                    }
        super().__init__(space, differential, product, label=f"C⊗m(t^{ring.order})")

    def pair(self, i: int, j: int) -> int:
        return (j - 1) * self.cochains.dimension + i

    def unpair(self, index: int) -> tuple[int, int]:
        j, i = divmod(index, self.cochains.dimension)
        return i, j + 1

    def layer(self, v: Mapping[int, Any], j: int) -> Vector:
        """Coefficient of tʲ, as a cochain"""
        result: Vector = {}
        for index, c in v.items():
            i, power = self.unpair(index)
            if power == j:
                result[i] = c
        return result


def deform_complex(C: FiniteDGAlgebra, R: ArtinLocalRing) -> DeformationComplex:
    return DeformationComplex(C, R)


def deformation_algebra(C: FiniteDGAlgebra, R: ArtinLocalRing) -> ShiftedAInftyAlgebra:
    """The shifted A∞-algebra of C ⊗ 𝔪"""
    return deform_complex(C, R).shifted

# ============================================================
# Lifts
# ============================================================

Lift = list[list[list[list[Any]]]]


def lift_of(CR: DeformationComplex, x: Mapping[int, Any]) -> Lift:
    """ρ_R(g) = ρ(g) + Σ tʲ x_j(g) as coefficient matrices [g][j]"""
    C = CR.cochains
    if not isinstance(C, HochschildComplex):
        raise InputError("Lifts are read off Hochschild deformation complexes only")
    rho = C.representation
    G = rho.group
    lift: Lift = []
    for g in range(G.order):
        powers = [rho.entries[g]]
        for j in range(1, CR.ring.order):
            powers.append(C.evaluate(CR.layer(x, j), (g,)))
        lift.append(powers)
    return lift


def is_lift_homomorphism(CR: DeformationComplex, lift: Lift) -> bool:
    """ρ_R(g)ρ_R(h) = ρ_R(gh) modulo tᴺ"""
    C = CR.cochains
    G = C.representation.group
    field, d, N = CR.field, C.representation.dimension, CR.ring.order

    def as_matrices(powers):
        return [DomainMatrix(p, (d, d), field.domain) for p in powers]

    matrices = [as_matrices(powers) for powers in lift]
    for g, h in cartesian(range(G.order), repeat=2):
        target = matrices[G.multiply(g, h)]
        for j in range(N):
            total = DomainMatrix.zeros((d, d), field.domain).to_dense()
            for i in range(j + 1):
                total = total + matrices[g][i] * matrices[h][j - i]
            if not same_matrix(total, target[j]):
                return False
    return True

# ============================================================
# Classification
# ============================================================

@dataclass
class DeformationClassification:
    """Lifts of ρ to R up to equivalence, counted by three routes"""

    complex: DeformationComplex
    transfer: TransferResult
    gauge_classes: list[list[Vector]]
    nerve_classes: list[list[Vector]]
    transferred_classes: list[list[Vector]]
    gauge_to_nerve: dict[int, int]
    transferred_to_nerve: dict[int, int]

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.gauge_classes), len(self.nerve_classes), len(self.transferred_classes)

    @property
    def agrees(self) -> bool:
        counts = self.counts
        return (
            counts[0] == counts[1] == counts[2]
            and _is_bijection(self.gauge_to_nerve, counts[0], counts[1])
            and _is_bijection(self.transferred_to_nerve, counts[2], counts[1])
        )


def _is_bijection(mapping: Mapping[int, int], source_size: int, target_size: int) -> bool:
    return (
        sorted(mapping) == list(range(source_size))
        and sorted(mapping.values()) == list(range(target_size))
    )


def _class_lookup(field: Field, classes: Sequence[Sequence[Vector]]) -> dict[tuple, int]:
    return {vector_key(field, v): k for k, members in enumerate(classes) for v in members}


def _match(field: Field, classes: Sequence[Sequence[Vector]], lookup: Mapping[tuple, int], send) -> dict[int, int]:
    """Class k ↦ the class of send(v) for every member v; must be well defined"""
    mapping: dict[int, int] = {}
    for k, members in enumerate(classes):
        images = set()
        for v in members:
            key = vector_key(field, send(v))
            if key not in lookup:
                raise InvariantViolation("classification-matching", "Matched element is not an MC element")
            images.add(lookup[key])
        if len(images) != 1:
            raise InvariantViolation("classification-matching", f"Class {k} is sent to {len(images)} classes")
        mapping[k] = images.pop()
    return mapping


def classify_deformations(
    representation: Representation,
    ring: ArtinLocalRing,
    top_degree: Optional[int] = None,
    *,
    leaf_limit: Optional[int] = None,
) -> DeformationClassification:
    """
    (i) gauge orbits on C_R, (ii) π₀𝒩•(C_R), (iii) π₀𝒩•(H_R) after transfer;
    (i)↔(ii) is the identity on MC elements, (iii)↔(ii) pushes forward along
    the transfer weak equivalence
    """
    if ring.field != representation.field:
        raise InputError("Ring and representation live over different fields")
    C = hochschild_complex(representation, top_degree)
    CR = deform_complex(C, ring)
    A = CR.shifted
    field = A.field
    gauge = gauge_orbits(CR, leaf_limit=leaf_limit)
    nerve = pi0(A, leaf_limit=leaf_limit)
    transferred = transfer(A, label="H(C⊗m)")
    transferred_classes = pi0(transferred.algebra, leaf_limit=leaf_limit)

    lookup = _class_lookup(field, nerve)
    gauge_to_nerve = _match(field, gauge, lookup, lambda v: v)
    transferred_to_nerve = _match(field, transferred_classes, lookup, lambda v: pushforward(transferred.morphism, v))
    result = DeformationClassification(
        CR, transferred, gauge, nerve, transferred_classes, gauge_to_nerve, transferred_to_nerve
    )
    record_structure_check("deformation-classification", result.agrees)
    logger.info(
        "deformations_classified",
        group_order=representation.group.order,
        dimension=representation.dimension,
        ring_order=ring.order,
        counts=list(result.counts),
    )
    return result


def lifts_are_mc(CR: DeformationComplex, elements: Sequence[Vector]) -> bool:
    """x is MC in C_R exactly when ρ + x is a homomorphism"""
    return all(is_maurer_cartan(CR.shifted, x) == is_lift_homomorphism(CR, lift_of(CR, x)) for x in elements)


def truncation_independent(representation: Representation, ring: ArtinLocalRing, top_degree: Optional[int] = None) -> bool:
    """Class counts do not move when one more Hochschild degree is kept"""
    top = settings.hochschild_top_degree if top_degree is None else top_degree
    low = classify_deformations(representation, ring, top)
    high = classify_deformations(representation, ring, top + 1)
    return low.counts == high.counts
