"""
The nerve 𝒩ₙ(A) = MC(A ⊗ N*(Δⁿ)) and its homotopy groups

Simplices are enumerated with the layered MC solver, cut down by linear
face constraints whenever faces are prescribed. Homotopy groups are computed
twice: from cohomology (π₁ = (H⁻¹, ⊛), πₙ = H⁻ⁿ) and by brute force from
spherical simplices, witnesses and fillers. Basepoints other than 0 are
handled by twisting.
"""
from dataclasses import dataclass, field as dc_field
from itertools import product as cartesian
from typing import Any, Callable, Mapping, Optional, Sequence

from .ainfty import DGAlgebraPresentation, InftyMorphism, ShiftedAInftyAlgebra, compose
from .cochains import NormalizedCochains, degeneracy_map, face_map, structure_constants
from .config import settings
from .constructions import TensorAlgebra, tensor_dga_map, tensor_morphism, tensor_with_dga, twist_algebra, twist_morphism
from .exceptions import (
    DegreeError,
    FiniteFieldRequiredError,
    GroupAxiomError,
    HornFillerNotFound,
    IncompatibleHornError,
    InputError,
    InvariantViolation,
    KanViolation,
    NonSphericalError,
    NotAFibrationError,
    NotMaurerCartanError,
    NotStrictError,
    SearchCapExceeded,
)
from .linalg import FilteredLinearMap, Vector, cohomology_basis, is_fibration, vec_add, vec_sub, vector_key
from .logging_config import get_logger
from .maurer_cartan import (
    LinearConstraint,
    MaurerCartanSolver,
    curvature,
    gauge_orbits,
    pushforward,
    quasi_multiply,
    require_maurer_cartan,
)
from .metrics import record_horn_fill, record_structure_check

logger = get_logger(__name__)

# ============================================================
# Simplices
# ============================================================

@dataclass(frozen=True)
class NerveSimplex:
    """An MC element of A ⊗ N*(Δⁿ); equality and hashing go through the canonical key"""

    dimension: int
    key: tuple
    vector: Vector = dc_field(compare=False, hash=False, repr=False)

    @property
    def is_zero(self) -> bool:
        return not self.key


class Nerve:
    """
    Levels, faces and degeneracies of 𝒩•(A)

    Face and degeneracy maps are the tangents of the strict morphisms
    id_A ⊗ d_j and id_A ⊗ s_j; they are cached per level.
    """

    def __init__(self, A: ShiftedAInftyAlgebra, *, leaf_limit: Optional[int] = None):
        self.A = A
        self.field = A.field
        self.leaf_limit = leaf_limit
        self._faces: dict[tuple[int, int], FilteredLinearMap] = {}
        self._degeneracies: dict[tuple[int, int], FilteredLinearMap] = {}

    def cochains(self, n: int) -> NormalizedCochains:
        return structure_constants(n, self.field)

    def algebra(self, n: int) -> TensorAlgebra:
        return tensor_with_dga(self.A, self.cochains(n))

    def _require_level(self, n: int) -> None:
        if not 0 <= n <= settings.max_nerve_dimension:
            raise InputError(f"Nerve level {n} outside 0..{settings.max_nerve_dimension}")

    def face_map(self, n: int, j: int) -> FilteredLinearMap:
        """id ⊗ d_j : A⊗N*(Δⁿ) → A⊗N*(Δⁿ⁻¹)"""
        if (n, j) not in self._faces:
            self._faces[(n, j)] = tensor_dga_map(self.A, face_map(n, j, self.field), check=False).tangent
        return self._faces[(n, j)]

    def degeneracy_map(self, n: int, j: int) -> FilteredLinearMap:
        """id ⊗ s_j : A⊗N*(Δⁿ) → A⊗N*(Δⁿ⁺¹)"""
        if (n, j) not in self._degeneracies:
            self._degeneracies[(n, j)] = tensor_dga_map(self.A, degeneracy_map(n, j, self.field), check=False).tangent
        return self._degeneracies[(n, j)]

    def simplex(self, n: int, vector: Mapping[int, Any], *, check: bool = True) -> NerveSimplex:
        vector = {i: c for i, c in vector.items() if c}
        if check:
            require_maurer_cartan(self.algebra(n), vector)
        return NerveSimplex(n, vector_key(self.field, vector), vector)

    def zero(self, n: int) -> NerveSimplex:
        return NerveSimplex(n, (), {})

    def face(self, j: int, x: NerveSimplex) -> NerveSimplex:
        if not 0 <= j <= x.dimension or x.dimension == 0:
            raise InputError(f"Face d_{j} undefined on a {x.dimension}-simplex")
        return self.simplex(x.dimension - 1, self.face_map(x.dimension, j)(x.vector), check=False)

    def faces(self, x: NerveSimplex) -> list[NerveSimplex]:
        return [self.face(j, x) for j in range(x.dimension + 1)]

    def degeneracy(self, j: int, x: NerveSimplex) -> NerveSimplex:
        if not 0 <= j <= x.dimension:
            raise InputError(f"Degeneracy s_{j} undefined on a {x.dimension}-simplex")
        return self.simplex(x.dimension + 1, self.degeneracy_map(x.dimension, j)(x.vector), check=False)

    def constant(self, alpha: Mapping[int, Any], n: int) -> NerveSimplex:
        """α ⊗ 𝟏ₙ, the totally degenerate simplex on the vertex α"""
        B = self.cochains(n)
        return self.simplex(n, self.algebra(n).embed(alpha, B.unit), check=False)

    def vertex(self, alpha: Mapping[int, Any]) -> NerveSimplex:
        return self.simplex(0, {i: c for i, c in alpha.items()})

    def components(self, x: NerveSimplex) -> dict[tuple[int, ...], Vector]:
        """β = Σ β_σ ⊗ φ_σ as {σ: β_σ}, zero components omitted"""
        T = self.algebra(x.dimension)
        B = self.cochains(x.dimension)
        result = {}
        for j, label in enumerate(B.labels):
            component = T.coefficient_of(x.vector, j)
            if component:
                result[label] = component
        return result

    def top_component(self, x: NerveSimplex) -> Vector:
        return self.algebra(x.dimension).coefficient_of(x.vector, self.cochains(x.dimension).top)

    def is_spherical(self, x: NerveSimplex) -> bool:
        if x.dimension == 0:
            return x.is_zero
        return all(f.is_zero for f in self.faces(x))

    def face_constraints(self, n: int, faces: Mapping[int, NerveSimplex]) -> list[LinearConstraint]:
        constraints = []
        for j, y in sorted(faces.items()):
            if y.dimension != n - 1:
                raise InputError(f"Face {j} of an {n}-simplex must be an {n - 1}-simplex")
            constraints.append(LinearConstraint(self.face_map(n, j), dict(y.vector)))
        return constraints

    def solver(self, n: int, constraints: Sequence[LinearConstraint] = ()) -> MaurerCartanSolver:
        self._require_level(n)
        return MaurerCartanSolver(self.algebra(n), constraints, self.leaf_limit)

    def simplices(
        self,
        n: int,
        faces: Optional[Mapping[int, NerveSimplex]] = None,
        constraints: Sequence[LinearConstraint] = (),
    ) -> list[NerveSimplex]:
        """𝒩ₙ(A), or the simplices with the prescribed faces, sorted canonically"""
        prescribed = self.face_constraints(n, faces or {}) + list(constraints)
        found = self.solver(n, prescribed).solutions()
        return [self.simplex(n, v, check=False) for v in found]

    def find_simplex(
        self,
        n: int,
        faces: Optional[Mapping[int, NerveSimplex]] = None,
        constraints: Sequence[LinearConstraint] = (),
    ) -> Optional[NerveSimplex]:
        prescribed = self.face_constraints(n, faces or {}) + list(constraints)
        found = self.solver(n, prescribed).find_one()
        return None if found is None else self.simplex(n, found)

    def spherical_simplices(self, n: int) -> list[NerveSimplex]:
        return self.simplices(n, {j: self.zero(n - 1) for j in range(n + 1)})

    def composite_face(self, n: int, outer: int, inner: int) -> FilteredLinearMap:
        """d_outer ∘ d_inner on level n"""
        return self.face_map(n - 1, outer).compose(self.face_map(n, inner))

    def check_simplicial_identities(self, n: int) -> bool:
        """
        d_i d_j = d_{j-1} d_i (i < j), d_i s_j = s_{j-1} d_i (i < j),
        d_j s_j = d_{j+1} s_j = id, d_i s_j = s_j d_{i-1} (i > j+1),
        s_i s_j = s_{j+1} s_i (i <= j), on every simplex of level n
        """
        ok = True
        for x in self.simplices(n):
            if not self._identities_hold(x):
                logger.warning("simplicial_identity_failed", level=n)
                ok = False
                break
        record_structure_check("simplicial", ok)
        return ok

    def _identities_hold(self, x: NerveSimplex) -> bool:
        n = x.dimension
        d, s = self.face, self.degeneracy
        for j in range(n + 1):
            y = s(j, x)
            if curvature(self.algebra(n + 1), y.vector):
                return False
            if d(j, y) != x or d(j + 1, y) != x:
                return False
            for i in range(n + 2):
                if i < j and d(i, y) != s(j - 1, d(i, x)):
                    return False
                if i > j + 1 and d(i, y) != s(j, d(i - 1, x)):
                    return False
            for i in range(j + 1):
                if s(i, y) != s(j + 1, s(i, x)):
                    return False
        if n >= 1:
            faces = self.faces(x)
            for f in faces:
                if curvature(self.algebra(n - 1), f.vector):
                    return False
            for j in range(n + 1):
                for i in range(j):
                    if n >= 2 and d(i, faces[j]) != d(j - 1, faces[i]):
                        return False
        return True

# ============================================================
# Low-Dimensional Simplices
# ============================================================

def _require_vector_degree(A: ShiftedAInftyAlgebra, v: Mapping[int, Any], degree: int, name: str) -> None:
    actual = A.space.vector_degree(v)
    if actual not in (None, degree):
        raise DegreeError(f"{name} must have degree {degree}, got {actual}")


def two_simplex(
    nerve: Nerve,
    w0: Mapping[int, Any],
    w1: Mapping[int, Any],
    w2: Mapping[int, Any],
    u: Mapping[int, Any],
) -> Vector:
    """Σ wⱼ ⊗ φ_{d^j[1]} + u ⊗ φ_[2] in A ⊗ N*(Δ²)"""
    T = nerve.algebra(2)
    B = nerve.cochains(2)
    one = nerve.field.one
    result: Vector = {}
    for j, w in enumerate((w0, w1, w2)):
        result = vec_add(result, T.embed(w, {B.coface(j): one}))
    return vec_add(result, T.embed(u, {B.top: one}))


def mc2_check(
    A: ShiftedAInftyAlgebra,
    w0: Mapping[int, Any],
    w1: Mapping[int, Any],
    w2: Mapping[int, Any],
    u: Mapping[int, Any],
    *,
    nerve: Optional[Nerve] = None,
) -> bool:
    """
    True iff w₀, w₁, w₂ are cocycles and d u - w₀ + w₁ - w₂ - Q¹₂(w₂, w₀) = 0

    The answer is cross-checked against the curvature of the corresponding
    2-simplex with vanishing vertices.
    """
    for name, w in (("w0", w0), ("w1", w1), ("w2", w2)):
        _require_vector_degree(A, w, -1, name)
    _require_vector_degree(A, u, -2, "u")
    d = A.differential
    cocycles = not (d(w0) or d(w1) or d(w2))
    lhs = vec_sub(vec_add(vec_sub(d(u), w0), w1), w2)
    lhs = vec_sub(lhs, A.operation(2)(w2, w0))
    holds = cocycles and not lhs
    nerve = nerve or Nerve(A)
    element = two_simplex(nerve, w0, w1, w2, u)
    if holds == bool(curvature(nerve.algebra(2), element)):
        raise InvariantViolation("mc2", "Closed-form 2-simplex equation disagrees with the curvature")
    return holds


def chi_n(nerve: Nerve, a: Mapping[int, Any], n: int) -> NerveSimplex:
    """χₙ(a) = a ⊗ φ_[n]; refused unless a is a cocycle, since curv(a⊗φ_[n]) = da ⊗ φ_[n]"""
    _require_vector_degree(nerve.A, a, -n, "a")
    T = nerve.algebra(n)
    vector = T.embed(a, {nerve.cochains(n).top: nerve.field.one})
    value = curvature(T, vector)
    if value:
        raise NotMaurerCartanError(
            "χₙ of a non-cocycle is not Maurer-Cartan",
            {"curvature": T.space.format_vector(value)}
        )
    return nerve.simplex(n, vector, check=False)


def spherical_reduce(nerve: Nerve, x: NerveSimplex) -> Vector:
    """The cocycle a with x = a ⊗ φ_[n]; x must have all faces zero"""
    if x.dimension == 0:
        if not x.is_zero:
            raise NonSphericalError(0)
        return {}
    for j, f in enumerate(nerve.faces(x)):
        if not f.is_zero:
            raise NonSphericalError(j)
    top = nerve.cochains(x.dimension).top
    components = nerve.components(x)
    if any(label != nerve.cochains(x.dimension).labels[top] for label in components):
        raise InvariantViolation("spherical-form", "Spherical simplex has a component below the top cochain")
    a = nerve.top_component(x)
    if nerve.A.differential(a):
        raise InvariantViolation("spherical-form", "Top component of a spherical simplex is not a cocycle")
    return a

# ============================================================
# Horns
# ============================================================

def _check_horn(nerve: Nerve, horn: Mapping[int, NerveSimplex], n: int, k: int) -> None:
    if not 1 <= n <= settings.max_nerve_dimension or not 0 <= k <= n:
        raise InputError(f"Horn Λ^{n}_{k} outside the supported range")
    expected = set(range(n + 1)) - {k}
    if set(horn) != expected:
        raise InputError(f"Horn Λ^{n}_{k} needs faces {sorted(expected)}, got {sorted(horn)}")
    for j, y in horn.items():
        if y.dimension != n - 1:
            raise InputError(f"Horn face {j} has dimension {y.dimension}, expected {n - 1}")
        if curvature(nerve.algebra(n - 1), y.vector):
            raise NotMaurerCartanError(f"Horn face {j} is not a simplex of the nerve")
    if n < 2:
        return
    for j in sorted(horn):
        for i in sorted(horn):
            if i < j and nerve.face(i, horn[j]) != nerve.face(j - 1, horn[i]):
                raise IncompatibleHornError(i, j)


def fill_horn(
    nerve: Nerve,
    horn: Mapping[int, NerveSimplex],
    n: int,
    k: int,
) -> NerveSimplex:
    """
    A simplex whose faces other than the k-th are the given ones

    Λ²₁ with edges from 0 to 0 is filled in closed form, u = 0 and
    w₁ = w₀ + w₂ + Q¹₂(w₂, w₀); every other horn is filled by a face-
    constrained MC search. A missing filler is a Kan counterexample.
    """
    _check_horn(nerve, horn, n, k)
    if n == 2 and k == 1 and all(nerve.is_spherical(horn[j]) for j in (0, 2)):
        w0 = nerve.top_component(horn[0])
        w2 = nerve.top_component(horn[2])
        w1 = vec_add(vec_add(w0, w2), nerve.A.operation(2)(w2, w0))
        filler = nerve.simplex(2, two_simplex(nerve, w0, w1, w2, {}))
        method = "closed_form"
    else:
        filler = nerve.find_simplex(n, horn)
        method = "search"
        if filler is None:
            logger.error("horn_filler_missing", n=n, k=k)
            raise HornFillerNotFound(n, k)
    for j, y in horn.items():
        if nerve.face(j, filler) != y:
            raise KanViolation(f"Filler of Λ^{n}_{k} has the wrong face {j}")
    record_horn_fill(method)
    logger.debug("horn_filled", n=n, k=k, method=method)
    return filler


def horns(nerve: Nerve, n: int, k: int) -> list[dict[int, NerveSimplex]]:
    """Every compatible horn Λⁿₖ in the nerve, as the horns of enumerated n-simplices"""
    seen = set()
    result = []
    for x in nerve.simplices(n):
        horn = {j: nerve.face(j, x) for j in range(n + 1) if j != k}
        key = tuple(sorted((j, y.key) for j, y in horn.items()))
        if key not in seen:
            seen.add(key)
            result.append(horn)
    return result


def compatible_horns(nerve: Nerve, n: int, k: int) -> list[dict[int, NerveSimplex]]:
    """
    Every compatible family of faces for Λⁿₖ, built from lower simplices

    Unlike `horns`, this does not presuppose that a filler exists.
    """
    lower = nerve.simplices(n - 1)
    indices = [j for j in range(n + 1) if j != k]
    result = []
    for choice in cartesian(lower, repeat=len(indices)):
        horn = dict(zip(indices, choice))
        try:
            _check_horn(nerve, horn, n, k)
        except IncompatibleHornError:
            continue
        result.append(horn)
    return result


def lift_horn(
    phi: InftyMorphism,
    horn: Mapping[int, NerveSimplex],
    k: int,
    target: NerveSimplex,
    *,
    source_nerve: Optional[Nerve] = None,
    target_nerve: Optional[Nerve] = None,
) -> NerveSimplex:
    """
    Lift along 𝒩•(Φ) for a strict fibration Φ: a simplex x with the given
    horn faces and 𝒩(Φ)(x) = target
    """
    if not phi.is_strict:
        raise NotStrictError("Horn lifting is implemented for strict fibrations")
    if not is_fibration(phi.tangent):
        raise NotAFibrationError()
    n = target.dimension
    source_nerve = source_nerve or Nerve(phi.source)
    target_nerve = target_nerve or Nerve(phi.target)
    _check_horn(source_nerve, horn, n, k)
    push = NerveMorphism(phi, source_nerve, target_nerve)
    for j, y in horn.items():
        if target_nerve.face(j, target) != push(y):
            raise IncompatibleHornError(j, k)
    linear = tensor_morphism(phi, source_nerve.cochains(n), check=False).tangent
    constraint = LinearConstraint(linear, dict(target.vector))
    lifted = source_nerve.find_simplex(n, horn, [constraint])
    if lifted is None:
        raise HornFillerNotFound(n, k)
    record_horn_fill("lift")
    return lifted

# ============================================================
# Nerve Maps
# ============================================================

class NerveMorphism:
    """𝒩•(Φ): x ↦ (Φ ⊗ N*(Δⁿ))⁎ x"""

    def __init__(self, phi: InftyMorphism, source: Optional[Nerve] = None, target: Optional[Nerve] = None):
        self.phi = phi
        self.source = source or Nerve(phi.source)
        self.target = target or Nerve(phi.target)
        self._levels: dict[int, InftyMorphism] = {}

    def level(self, n: int) -> InftyMorphism:
        if n not in self._levels:
            self._levels[n] = tensor_morphism(self.phi, self.source.cochains(n), check=False)
        return self._levels[n]

    def __call__(self, x: NerveSimplex) -> NerveSimplex:
        image = pushforward(self.level(x.dimension), x.vector)
        return self.target.simplex(x.dimension, image, check=False)


def nerve_map(phi: InftyMorphism) -> NerveMorphism:
    return NerveMorphism(phi)


def check_nerve_map(phi: InftyMorphism, n: int) -> bool:
    """𝒩(Φ) commutes with faces and degeneracies on level n"""
    push = nerve_map(phi)
    for x in push.source.simplices(n):
        y = push(x)
        if n >= 1 and any(push.target.face(j, y) != push(push.source.face(j, x)) for j in range(n + 1)):
            return False
        if n < settings.max_nerve_dimension and any(
            push.target.degeneracy(j, y) != push(push.source.degeneracy(j, x)) for j in range(n + 1)
        ):
            return False
    return True


def check_functor_law(psi: InftyMorphism, phi: InftyMorphism, n: int) -> bool:
    """𝒩(Ψ∘Φ) = 𝒩(Ψ)∘𝒩(Φ) on level n"""
    first, second = nerve_map(phi), nerve_map(psi)
    composite = NerveMorphism(compose(psi, phi, check=False), first.source, second.target)
    ok = all(composite(x) == second(first(x)) for x in first.source.simplices(n))
    record_structure_check("nerve-functor", ok)
    return ok

# ============================================================
# Path Components
# ============================================================

class _UnionFind:
    def __init__(self, keys):
        self.parent = {k: k for k in keys}

    def find(self, k):
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def path_components(nerve: Nerve) -> list[list[NerveSimplex]]:
    """Vertices modulo the equivalence relation generated by 1-simplices"""
    vertices = nerve.simplices(0)
    classes = _UnionFind([v.key for v in vertices])
    for edge in nerve.simplices(1):
        classes.union(nerve.face(0, edge).key, nerve.face(1, edge).key)
    grouped: dict[tuple, list[NerveSimplex]] = {}
    for v in vertices:
        grouped.setdefault(classes.find(v.key), []).append(v)
    return sorted(grouped.values(), key=lambda members: members[0].key)


def pi0(A: ShiftedAInftyAlgebra, *, leaf_limit: Optional[int] = None) -> list[list[Vector]]:
    """π₀(𝒩•(A)) as sorted lists of MC elements, ordered by their first element"""
    if not A.field.is_finite:
        raise FiniteFieldRequiredError("π₀ enumeration")
    components = path_components(Nerve(A, leaf_limit=leaf_limit))
    return [[dict(v.vector) for v in members] for members in components]


def pi0_matches_gauge(C: DGAlgebraPresentation, *, leaf_limit: Optional[int] = None) -> bool:
    """Path components of 𝒩•(C) coincide with the gauge orbits of MC(C)"""
    simplicial = pi0(C.shifted, leaf_limit=leaf_limit)
    gauge = gauge_orbits(C, leaf_limit=leaf_limit)
    field = C.field
    left = sorted(tuple(vector_key(field, v) for v in c) for c in simplicial)
    right = sorted(tuple(vector_key(field, v) for v in c) for c in gauge)
    ok = left == right
    record_structure_check("gauge-pi0", ok)
    if not ok:
        logger.warning("gauge_pi0_mismatch", components=len(simplicial), orbits=len(gauge))
    return ok

# ============================================================
# Group Presentations
# ============================================================

@dataclass
class GroupPresentation:
    """
    A finite group by its Cayley table

    Elements are 0..order-1; representatives are nerve simplices standing
    for each element, and `classify` sends any admissible simplex to its element.
    """

    labels: list[str]
    table: list[list[int]]
    identity: int
    representatives: list[NerveSimplex] = dc_field(default_factory=list)
    classify: Optional[Callable[[NerveSimplex], int]] = dc_field(default=None, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.table)

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        for b in range(self.order):
            if self.table[a][b] == self.identity:
                return b
        raise GroupAxiomError("inverses", f"Element {self.labels[a]} has no inverse")

    def element_order(self, a: int) -> int:
        power, k = a, 1
        while power != self.identity:
            power = self.table[power][a]
            k += 1
            if k > self.order:
                raise GroupAxiomError("finite-order", f"Element {self.labels[a]} has no finite order")
        return k

    @property
    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in range(self.order) for b in range(self.order))

    @property
    def is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.order for a in range(self.order))

    def order_profile(self) -> list[int]:
        return sorted(self.element_order(a) for a in range(self.order))

    def validate(self) -> None:
        n = self.order
        elements = range(n)
        for a in elements:
            if self.table[self.identity][a] != a or self.table[a][self.identity] != a:
                raise GroupAxiomError("identity", f"{self.labels[self.identity]} is not a two-sided identity")
            if sorted(self.table[a]) != list(elements):
                raise GroupAxiomError("latin-square", f"Row of {self.labels[a]} is not a permutation")
        for a in elements:
            for b in elements:
                ab = self.table[a][b]
                for c in elements:
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise GroupAxiomError(
                            "associativity",
                            f"({self.labels[a]}·{self.labels[b]})·{self.labels[c]} ≠ "
                            f"{self.labels[a]}·({self.labels[b]}·{self.labels[c]})"
                        )

    def generators(self) -> list[int]:
        """Greedy generating set in element order"""
        generated = {self.identity}
        gens: list[int] = []
        for a in range(self.order):
            if a in generated:
                continue
            gens.append(a)
            frontier = list(generated)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = self.table[x][g]
                    if y not in generated:
                        generated.add(y)
                        frontier.append(y)
        return gens


def is_homomorphism(G: GroupPresentation, H: GroupPresentation, mapping: Sequence[int]) -> bool:
    return all(
        mapping[G.table[a][b]] == H.table[mapping[a]][mapping[b]]
        for a in range(G.order)
        for b in range(G.order)
    )


def is_isomorphism(G: GroupPresentation, H: GroupPresentation, mapping: Sequence[int]) -> bool:
    return len(set(mapping)) == G.order == H.order and is_homomorphism(G, H, mapping)


def find_isomorphism(G: GroupPresentation, H: GroupPresentation) -> Optional[list[int]]:
    """An explicit isomorphism G → H by extending generator images, or None"""
    if G.order != H.order or G.order_profile() != H.order_profile():
        return None
    gens = G.generators()
    candidates = [
        [h for h in range(H.order) if H.element_order(h) == G.element_order(g)]
        for g in gens
    ]
    for images in cartesian(*candidates):
        mapping = {G.identity: H.identity}
        frontier = [G.identity]
        consistent = True
        while frontier and consistent:
            x = frontier.pop()
            for g, image in zip(gens, images):
                y = G.table[x][g]
                value = H.table[mapping[x]][image]
                if y in mapping:
                    if mapping[y] != value:
                        consistent = False
                        break
                else:
                    mapping[y] = value
                    frontier.append(y)
        if not consistent or len(mapping) != G.order:
            continue
        result = [mapping[a] for a in range(G.order)]
        if is_isomorphism(G, H, result):
            return result
    return None

# ============================================================
# Homotopy Groups from Cohomology
# ============================================================

def _at_basepoint(A: ShiftedAInftyAlgebra, basepoint: Optional[Mapping[int, Any]]) -> ShiftedAInftyAlgebra:
    if not basepoint:
        return A
    return twist_algebra(A, basepoint)


def pi_n_theorem(
    A: ShiftedAInftyAlgebra,
    n: int,
    basepoint: Optional[Mapping[int, Any]] = None,
    *,
    leaf_limit: Optional[int] = None,
) -> GroupPresentation:
    """
    πₙ(𝒩•(A), α) from cohomology of A^α: (H⁻¹, ⊛) with āb̄ = [Q¹₂(a, b)] for
    n = 1, the additive group H⁻ⁿ for n >= 2; elements represented by χₙ
    """
    if n <= 0:
        raise InputError(f"πₙ from cohomology needs n >= 1, got {n}")
    if not A.field.is_finite:
        raise FiniteFieldRequiredError("homotopy group tables")
    A = _at_basepoint(A, basepoint)
    field = A.field
    H = cohomology_basis(A.complex, -n)
    size = field.characteristic ** H.dimension
    limit = settings.search_leaf_limit if leaf_limit is None else leaf_limit
    if size > limit:
        raise SearchCapExceeded(limit, 0, size)
    nerve = Nerve(A, leaf_limit=leaf_limit)
    coordinates = list(cartesian(field.elements(), repeat=H.dimension))
    position = {tuple(field.sort_key(c) for c in x): k for k, x in enumerate(coordinates)}

    def locate(z: Vector) -> int:
        return position[tuple(field.sort_key(c) for c in H.classify(z))]

    elements = [H.element(x) for x in coordinates]
    product = A.operation(2)
    table = []
    for a in elements:
        row = []
        for b in elements:
            if n == 1:
                row.append(locate(quasi_multiply(lambda u, v: product(u, v), a, b)))
            else:
                row.append(locate(vec_add(a, b)))
        table.append(row)

    def classify(x: NerveSimplex) -> int:
        return locate(spherical_reduce(nerve, x))

    labels = ["(" + ", ".join(field.format(c) for c in x) + ")" for x in coordinates]
    group = GroupPresentation(
        labels, table, locate({}), [chi_n(nerve, a, n) for a in elements], classify
    )
    group.validate()
    return group

# ============================================================
# Homotopy Groups by Enumeration
# ============================================================

def pi_n_oracle(
    A: ShiftedAInftyAlgebra,
    n: int,
    basepoint: Optional[Mapping[int, Any]] = None,
    *,
    leaf_limit: Optional[int] = None,
) -> GroupPresentation:
    """
    πₙ(𝒩•(A), α) straight from the simplicial definitions, for n = 1, 2

    β ∼ β′ iff some η has d₀η = β, d₁η = β′ and d_jη = 0 for j > 1; the
    product of [α] and [β] is [d₁ω] for ω with d₀ω = β, d₂ω = α and
    d_jω = 0 for j > 2. The relation is checked to be an equivalence and the
    product to be well defined.
    """
    if n not in (1, 2):
        raise InputError(f"The enumerative πₙ handles n = 1, 2, got {n}")
    if not A.field.is_finite:
        raise FiniteFieldRequiredError("homotopy group enumeration")
    A = _at_basepoint(A, basepoint)
    nerve = Nerve(A, leaf_limit=leaf_limit)
    zero_face = nerve.zero(n)
    spherical = nerve.spherical_simplices(n)
    keys = {x.key for x in spherical}

    def spherical_faces(*inner: int) -> list[LinearConstraint]:
        return [
            LinearConstraint(nerve.composite_face(n + 1, i, j))
            for j in inner
            for i in range(n + 1)
        ]

    witnesses = nerve.simplices(
        n + 1,
        {j: zero_face for j in range(2, n + 2)},
        spherical_faces(0, 1),
    )
    relation = {(nerve.face(0, eta).key, nerve.face(1, eta).key) for eta in witnesses}
    classes = _UnionFind(sorted(keys))
    for a, b in relation:
        classes.union(a, b)
    grouped: dict[tuple, list[NerveSimplex]] = {}
    for x in spherical:
        grouped.setdefault(classes.find(x.key), []).append(x)
    for members in grouped.values():
        for x in members:
            for y in members:
                if (x.key, y.key) not in relation:
                    raise KanViolation(
                        "Homotopy of spherical simplices is not an equivalence relation",
                        {"n": n}
                    )
    ordered = sorted(grouped.values(), key=lambda members: members[0].key)
    index = {x.key: k for k, members in enumerate(ordered) for x in members}

    products = nerve.simplices(
        n + 1,
        {j: zero_face for j in range(3, n + 2)},
        spherical_faces(0, 2),
    )
    size = len(ordered)
    table: list[list[Optional[int]]] = [[None] * size for _ in range(size)]
    for omega in products:
        alpha = index[nerve.face(2, omega).key]
        beta = index[nerve.face(0, omega).key]
        result = nerve.face(1, omega)
        if result.key not in keys:
            raise KanViolation("d₁ of a product witness is not spherical")
        value = index[result.key]
        if table[alpha][beta] is None:
            table[alpha][beta] = value
        elif table[alpha][beta] != value:
            raise KanViolation("Product of homotopy classes is not well defined", {"n": n})
    if any(v is None for row in table for v in row):
        raise KanViolation("Some pair of homotopy classes has no product witness", {"n": n})

    def classify(x: NerveSimplex) -> int:
        if x.key not in index:
            raise NonSphericalError(next(j for j, f in enumerate(nerve.faces(x)) if not f.is_zero))
        return index[x.key]

    labels = [f"[{k}]" for k in range(size)]
    group = GroupPresentation(
        labels, table, index[nerve.zero(n).key],
        [members[0] for members in ordered], classify
    )
    group.validate()
    logger.debug("pi_n_enumerated", n=n, spherical=len(spherical), order=group.order)
    return group


def match_pi_n(theorem: GroupPresentation, oracle: GroupPresentation) -> list[int]:
    """The χₙ-matching: each cohomology class goes to the class of its representative"""
    if oracle.classify is None:
        raise InputError("Oracle presentation cannot classify simplices")
    mapping = [oracle.classify(x) for x in theorem.representatives]
    if not is_isomorphism(theorem, oracle, mapping):
        raise InvariantViolation(
            "pi-n-matching",
            "χₙ does not induce an isomorphism between the cohomological and enumerative groups",
            {"theorem_order": theorem.order, "oracle_order": oracle.order}
        )
    return mapping

# ============================================================
# Basepoint Shift
# ============================================================

class BasepointShift:
    """Shift_α : 𝒩•(A^α) → 𝒩•(A), β ↦ α⊗𝟏ₙ + β"""

    def __init__(self, A: ShiftedAInftyAlgebra, alpha: Mapping[int, Any], *, leaf_limit: Optional[int] = None):
        require_maurer_cartan(A, alpha)
        self.alpha = dict(alpha)
        self.target = Nerve(A, leaf_limit=leaf_limit)
        self.source = Nerve(twist_algebra(A, alpha), leaf_limit=leaf_limit)

    def __call__(self, x: NerveSimplex) -> NerveSimplex:
        shifted = vec_add(self.target.constant(self.alpha, x.dimension).vector, x.vector)
        return self.target.simplex(x.dimension, shifted)

    def inverse(self, y: NerveSimplex) -> NerveSimplex:
        shifted = vec_sub(y.vector, self.target.constant(self.alpha, y.dimension).vector)
        return self.source.simplex(y.dimension, shifted)

    def check_level(self, n: int) -> bool:
        """Bijection on level n, commuting with faces and degeneracies"""
        sources = self.source.simplices(n)
        images = {self(x) for x in sources}
        if images != set(self.target.simplices(n)) or len(images) != len(sources):
            return False
        for x in sources:
            y = self(x)
            if n >= 1 and any(self(self.source.face(j, x)) != self.target.face(j, y) for j in range(n + 1)):
                return False
            if n < settings.max_nerve_dimension and any(
                self(self.source.degeneracy(j, x)) != self.target.degeneracy(j, y) for j in range(n + 1)
            ):
                return False
        return True


def shift_basepoint(A: ShiftedAInftyAlgebra, alpha: Mapping[int, Any]) -> BasepointShift:
    return BasepointShift(A, alpha)


def check_shift_naturality(phi: InftyMorphism, alpha: Mapping[int, Any], n: int) -> bool:
    """Shift_{Φ⁎α} ∘ 𝒩(Φ^α) = 𝒩(Φ) ∘ Shift_α on level n"""
    source_shift = BasepointShift(phi.source, alpha)
    target_shift = BasepointShift(phi.target, pushforward(phi, alpha))
    twisted = NerveMorphism(twist_morphism(phi, alpha, check=False), source_shift.source, target_shift.source)
    plain = NerveMorphism(phi, source_shift.target, target_shift.target)
    return all(
        target_shift(twisted(x)) == plain(source_shift(x))
        for x in source_shift.source.simplices(n)
    )

# ============================================================
# Comparison Along a Morphism
# ============================================================

@dataclass
class NerveComparison:
    """What 𝒩•(Φ) does on π₀ and on π₁ at every vertex"""

    components: tuple[int, int]
    pi0_bijective: bool
    pi1_isomorphic: dict[tuple, bool] = dc_field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.pi0_bijective and all(self.pi1_isomorphic.values())


def compare_nerves(
    phi: InftyMorphism,
    *,
    oracle: bool = False,
    leaf_limit: Optional[int] = None,
) -> NerveComparison:
    """
    Test whether 𝒩•(Φ) is a bijection on π₀ and an isomorphism on π₁ at
    every vertex; π₁ at α is computed on the twisted algebras through Φ^α
    """
    source = Nerve(phi.source, leaf_limit=leaf_limit)
    target = Nerve(phi.target, leaf_limit=leaf_limit)
    push = NerveMorphism(phi, source, target)
    source_components = path_components(source)
    target_components = path_components(target)
    target_index = {v.key: k for k, members in enumerate(target_components) for v in members}
    induced = [target_index[push(members[0]).key] for members in source_components]
    well_defined = all(
        target_index[push(v).key] == induced[k]
        for k, members in enumerate(source_components)
        for v in members
    )
    bijective = well_defined and sorted(induced) == list(range(len(target_components)))
    pi_n = pi_n_oracle if oracle else pi_n_theorem
    isomorphic: dict[tuple, bool] = {}
    for members in source_components:
        for vertex in members:
            alpha = dict(vertex.vector)
            twisted = twist_morphism(phi, alpha, check=False)
            G = pi_n(twisted.source, 1, leaf_limit=leaf_limit)
            H = pi_n(twisted.target, 1, leaf_limit=leaf_limit)
            local = NerveMorphism(twisted)
            mapping = [H.classify(local(x)) for x in G.representatives]
            isomorphic[vertex.key] = is_isomorphism(G, H, mapping)
    comparison = NerveComparison((len(source_components), len(target_components)), bijective, isomorphic)
    record_structure_check("goldman-millson", comparison.holds)
    if not comparison.holds:
        logger.warning("nerve_comparison_failed", components=comparison.components, pi0_bijective=bijective)
    return comparison
