"""
Curvature, Maurer-Cartan sets, quasi-invertible groups and the gauge action

MC sets are solved weight layer by weight layer: the weight-w part of
curv(a) is d₀(a_w) plus a polynomial in the lower layers, so each layer is
an affine-linear system whose solver is prepared once and reused for every
branch.
"""
from dataclasses import dataclass, field as dc_field
from itertools import product as cartesian
from typing import Any, Callable, Iterable, Iterator, Mapping, Optional, Sequence

import sympy

from .ainfty import DGAlgebraPresentation, InftyMorphism, ShiftedAInftyAlgebra
from .config import settings
from .exceptions import (
    DegreeError,
    FiniteFieldRequiredError,
    InfiniteSolutionSetError,
    InvariantViolation,
    NotMaurerCartanError,
    SearchCapExceeded,
)
from .linalg import FilteredLinearMap, LinearSolver, Vector, vec_add, vec_axpy, vec_scale, vec_sub, vector_key
from .logging_config import get_logger
from .metrics import record_mc_capped, record_mc_leaves
from .multilinear import project

logger = get_logger(__name__)

# ============================================================
# Curvature & Pushforward
# ============================================================

def _require_degree(A: ShiftedAInftyAlgebra, a: Mapping[int, Any], degree: int) -> None:
    actual = A.space.vector_degree(a)
    if actual not in (None, degree):
        raise DegreeError(f"Expected an element of degree {degree}, got degree {actual}")


def curvature(A: ShiftedAInftyAlgebra, a: Mapping[int, Any]) -> Vector:
    """curv(a) = Σₙ Q¹ₙ(a^{⊗n}), finite since ℱ_N = 0"""
    from .constructions import interleave

    _require_degree(A, a, 0)
    if not a:
        return {}
    return project(A.operations, interleave(A.space, a, []))


def is_maurer_cartan(A: ShiftedAInftyAlgebra, a: Mapping[int, Any]) -> bool:
    return not curvature(A, a)


def require_maurer_cartan(A: ShiftedAInftyAlgebra, a: Mapping[int, Any]) -> None:
    value = curvature(A, a)
    if value:
        raise NotMaurerCartanError(details={"curvature": A.space.format_vector(value)})


@dataclass(frozen=True)
class MCElement:
    """A Maurer-Cartan element together with its (zero) curvature certificate"""

    algebra: ShiftedAInftyAlgebra
    vector: tuple

    @property
    def coordinates(self) -> Vector:
        return dict(self.vector)

    def format(self) -> dict[str, str]:
        return self.algebra.space.format_vector(self.coordinates)


def certify(A: ShiftedAInftyAlgebra, a: Mapping[int, Any]) -> MCElement:
    require_maurer_cartan(A, a)
    return MCElement(A, tuple(sorted(a.items())))


def _push(phi: InftyMorphism, a: Mapping[int, Any]) -> Vector:
    from .constructions import interleave

    if not a:
        return {}
    return project(phi.components, interleave(phi.source.space, a, [], phi.target.nilpotency))


def pushforward(phi: InftyMorphism, a: Mapping[int, Any]) -> Vector:
    """Φ⁎(a) = Σₙ Φ¹ₙ(a^{⊗n}) for a ∈ MC(source); the result is asserted MC"""
    require_maurer_cartan(phi.source, a)
    image = _push(phi, a)
    value = curvature(phi.target, image)
    if value:
        raise InvariantViolation("pushforward", "Φ⁎ of an MC element is not MC")
    return image


def pushforward_curvature_defect(phi: InftyMorphism, a: Mapping[int, Any]) -> Vector:
    """
    curv′(Φ⁎a) - Σₙ Φ¹_{n+1}(a^{⊗n} ⋆_sh curv(a)), zero for every degree-0 a
    """
    from .constructions import interleave

    _require_degree(phi.source, a, 0)
    lhs = curvature(phi.target, _push(phi, a))
    curv = curvature(phi.source, a)
    rhs: Vector = {}
    if curv:
        rhs = project(phi.components, interleave(phi.source.space, a, [curv], phi.target.nilpotency))
    return vec_sub(lhs, rhs)

# ============================================================
# Layered Solver
# ============================================================

@dataclass
class LinearConstraint:
    """Degree-0 filtered linear condition L(a) = value on candidate MC elements"""

    linear: FilteredLinearMap
    value: Vector = dc_field(default_factory=dict)


@dataclass
class _Layer:
    weight: int
    unknowns: list[int]
    solver: LinearSolver
    kernel: list[dict[int, Any]]


class MaurerCartanSolver:
    """
    Prepared weight-layer solver for MC(A), optionally cut down by linear constraints

    Rows of layer w: degree-1 coordinates of weight w (curvature) and the
    weight-w coordinates of each constraint target.
    """

    def __init__(
        self,
        A: ShiftedAInftyAlgebra,
        constraints: Sequence[LinearConstraint] = (),
        leaf_limit: Optional[int] = None,
    ):
        self.A = A
        self.field = A.field
        self.constraints = list(constraints)
        self.leaf_limit = settings.search_leaf_limit if leaf_limit is None else leaf_limit
        space = A.space
        self._offsets = []
        offset = space.dimension
        for constraint in self.constraints:
            self._offsets.append(offset)
            offset += constraint.linear.target.dimension
        d = A.differential
        self.layers: list[_Layer] = []
        for w in range(1, space.nilpotency):
            unknowns = space.indices(degree=0, weight=w)
            rows = space.indices(degree=1, weight=w)
            for constraint, base in zip(self.constraints, self._offsets):
                target = constraint.linear.target
                rows += [base + j for j in target.indices(degree=0, weight=w)]
            row_set = set(rows)
            columns = []
            for i in unknowns:
                column = {j: c for j, c in d.image(i).items() if j in row_set}
                for constraint, base in zip(self.constraints, self._offsets):
                    for j, c in constraint.linear.image(i).items():
                        if base + j in row_set:
                            column[base + j] = c
                columns.append(column)
            solver = LinearSolver(self.field, columns, rows)
            self.layers.append(_Layer(w, unknowns, solver, solver.kernel()))

    @property
    def unknown_count(self) -> int:
        return sum(len(layer.unknowns) for layer in self.layers)

    @property
    def naive_space_size(self) -> Any:
        if self.field.is_finite:
            return self.field.characteristic ** self.unknown_count
        return "infinite"

    def _rhs(self, partial: Vector, layer: _Layer) -> Vector:
        space = self.A.space
        rhs: Vector = {}
        for j, c in curvature(self.A, partial).items():
            if space.weights[j] == layer.weight:
                rhs[j] = -c
        for constraint, base in zip(self.constraints, self._offsets):
            target = constraint.linear.target
            residual = vec_sub(constraint.value, constraint.linear(partial))
            for j, c in residual.items():
                if target.weights[j] == layer.weight and target.degrees[j] == 0:
                    rhs[base + j] = c
        return rhs

    def _branches(self, layer: _Layer, particular: dict[int, Any], particular_only: bool) -> Iterator[Vector]:
        base = {layer.unknowns[j]: c for j, c in particular.items()}
        if not layer.kernel or particular_only:
            yield base
            return
        if not self.field.is_finite:
            raise InfiniteSolutionSetError(layer.weight, len(layer.kernel))
        kernel = [{layer.unknowns[j]: c for j, c in k.items()} for k in layer.kernel]
        for coefficients in cartesian(self.field.elements(), repeat=len(kernel)):
            value = dict(base)
            for c, k in zip(coefficients, kernel):
                vec_axpy(value, c, k)
            yield value

    def _count(self) -> None:
        self.explored += 1
        if self.explored > self.leaf_limit:
            record_mc_capped()
            logger.warning(
                "mc_search_capped",
                limit=self.leaf_limit,
                explored=self.explored,
                space_size=str(self.naive_space_size),
            )
            raise SearchCapExceeded(self.leaf_limit, self.explored, self.naive_space_size)

    def _search(self, depth: int, partial: Vector, particular_only: bool) -> Iterator[Vector]:
        if depth == len(self.layers):
            if curvature(self.A, partial):
                raise InvariantViolation("mc-layers", "Layered solution with nonzero curvature")
            yield partial
            return
        layer = self.layers[depth]
        particular = layer.solver.solve(self._rhs(partial, layer))
        if particular is None:
            return
        for extension in self._branches(layer, particular, particular_only):
            self._count()
            yield from self._search(depth + 1, {**partial, **extension}, particular_only)

    def iter_solutions(self) -> Iterator[Vector]:
        """Depth-first over the layers; kernel coefficients vary fastest in the last layer"""
        self.explored = 0
        try:
            yield from self._search(0, {}, False)
        finally:
            record_mc_leaves(self.explored)

    def solutions(self) -> list[Vector]:
        """All solutions, sorted canonically"""
        found = list(self.iter_solutions())
        found.sort(key=lambda v: vector_key(self.field, v))
        logger.debug("mc_solved", solutions=len(found), explored=self.explored)
        return found

    def find_one(self) -> Optional[Vector]:
        """
        Some solution, or None when there is none

        Over a finite field this is the first solution in search order. Over
        QQ the kernel directions are set to zero, which still decides existence.
        """
        self.explored = 0
        particular_only = not self.field.is_finite
        try:
            return next(self._search(0, {}, particular_only), None)
        finally:
            record_mc_leaves(self.explored)


def enumerate_mc(
    A: ShiftedAInftyAlgebra,
    constraints: Sequence[LinearConstraint] = (),
    leaf_limit: Optional[int] = None,
) -> list[Vector]:
    """MC(A), optionally intersected with linear constraints, by the layered method"""
    return MaurerCartanSolver(A, constraints, leaf_limit).solutions()


def naive_enumerate_mc(A: ShiftedAInftyAlgebra, limit: int = 2 ** 16) -> list[Vector]:
    """Exhaustive scan of A⁰, the independent oracle for the layered solver"""
    if not A.field.is_finite:
        raise FiniteFieldRequiredError("naive MC enumeration")
    unknowns = A.space.indices(degree=0)
    size = A.field.characteristic ** len(unknowns)
    if size > limit:
        raise SearchCapExceeded(limit, 0, size)
    found = []
    for values in cartesian(A.field.elements(), repeat=len(unknowns)):
        a = {i: c for i, c in zip(unknowns, values) if c}
        if not curvature(A, a):
            found.append(a)
    found.sort(key=lambda v: vector_key(A.field, v))
    return found

# ============================================================
# Symbolic MC Sets (characteristic 0)
# ============================================================

@dataclass
class MCVariety:
    """
    MC(A) over QQ as a parametrized family

    Points are `point` evaluated at parameter values satisfying every
    polynomial in `constraints`.
    """

    parameters: tuple
    constraints: list
    point: dict[int, Any]

    def normalized(self) -> tuple:
        constraints = sorted({sympy.srepr(sympy.expand(c)) for c in self.constraints})
        point = tuple(sorted((i, sympy.srepr(sympy.expand(v))) for i, v in self.point.items() if sympy.expand(v) != 0))
        return tuple(str(p) for p in self.parameters), tuple(constraints), point

    @property
    def is_point(self) -> bool:
        return not self.parameters and not self.constraints

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MCVariety) and self.normalized() == other.normalized()


def symbolic_curvature(
    A: ShiftedAInftyAlgebra,
    point: Mapping[int, Any],
    operations: Optional[Mapping[int, Any]] = None,
    scale: Optional[Callable[[int], Any]] = None,
) -> dict[int, Any]:
    """Σₖ scale(k)·Q¹ₖ(x^{⊗k}) for a symbolic degree-0 point, as sympy expressions"""
    field = A.field
    operations = A.operations if operations is None else operations
    result: dict[int, Any] = {}
    for k, op in operations.items():
        factor = sympy.Integer(1) if scale is None else scale(k)
        for word, image in op.table.items():
            if any(i not in point for i in word):
                continue
            monomial = factor
            for i in word:
                monomial = monomial * point[i]
            for out, c in image.items():
                result[out] = result.get(out, sympy.Integer(0)) + field.to_sympy(c) * monomial
    return {i: sympy.expand(v) for i, v in result.items() if sympy.expand(v) != 0}


def solve_mc_symbolic(
    A: ShiftedAInftyAlgebra,
    curvature_map: Optional[Callable[[dict[int, Any]], dict[int, Any]]] = None,
) -> MCVariety:
    """
    Layered MC solve over QQ with free kernel directions as sympy parameters

    curvature_map defaults to the A∞ curvature; any polynomial curvature
    whose weight-w part is d₀(a_w) plus lower layers can be supplied.
    """
    if A.field.is_finite:
        from .exceptions import CharacteristicError

        raise CharacteristicError(A.field.characteristic)
    space = A.space
    curv = curvature_map or (lambda point: symbolic_curvature(A, point))
    d = A.differential
    point: dict[int, Any] = {}
    parameters: list = []
    constraints: list = []
    for w in range(1, space.nilpotency):
        unknowns = space.indices(degree=0, weight=w)
        rows = space.indices(degree=1, weight=w)
        row_set = set(rows)
        columns = [{j: c for j, c in d.image(i).items() if j in row_set} for i in unknowns]
        solver = LinearSolver(A.field, columns, rows)
        current = curv(point)
        rhs = [-current.get(r, sympy.Integer(0)) for r in rows]
        transform = solver.transform
        for r in range(solver.rank, len(rows)):
            value = sympy.expand(sum(A.field.to_sympy(e) * v for e, v in zip(transform[r], rhs) if e))
            if value != 0:
                constraints.append(value)
        values = {i: sympy.Integer(0) for i in unknowns}
        for r, column in enumerate(solver.pivot_columns):
            values[unknowns[column]] = sympy.expand(
                sum(A.field.to_sympy(e) * v for e, v in zip(transform[r], rhs) if e)
            )
        for vector in solver.kernel():
            free = next(j for j in vector if j in solver.free_columns and vector[j] == A.field.one)
            symbol = sympy.Symbol(f"t_{space.names[unknowns[free]]}")
            parameters.append(symbol)
            for j, c in vector.items():
                values[unknowns[j]] = values[unknowns[j]] + A.field.to_sympy(c) * symbol
        for i, v in values.items():
            v = sympy.expand(v)
            if v != 0:
                point[i] = v
    return MCVariety(tuple(parameters), constraints, point)

# ============================================================
# Quasi-Invertible Group
# ============================================================

Product = Callable[[Mapping[int, Any], Mapping[int, Any]], Vector]


def quasi_multiply(multiply: Product, a: Mapping[int, Any], b: Mapping[int, Any]) -> Vector:
    """a ⊛ b = a + b + ab"""
    return vec_add(vec_add(a, b), multiply(a, b))


def quasi_inverse(multiply: Product, a: Mapping[int, Any], bound: int = 64) -> Vector:
    """ã = Σ_{k>=1} (-1)^k a^k, with a ⊛ ã = ã ⊛ a = 0 asserted"""
    result: Vector = {}
    power: Vector = dict(a)
    sign = -1
    for _ in range(bound):
        if not power:
            break
        result = vec_add(result, vec_scale(sign, power))
        power = multiply(power, a)
        sign = -sign
    else:
        if power:
            raise InvariantViolation("pronilpotent", "Element powers do not vanish")
    if quasi_multiply(multiply, a, result) or quasi_multiply(multiply, result, a):
        raise InvariantViolation("quasi-inverse", "a ⊛ ã ≠ 0")
    return result

# ============================================================
# Gauge Action (dg algebras)
# ============================================================

def twisted_differential(C: DGAlgebraPresentation, x: Mapping[int, Any], g: Mapping[int, Any]) -> Vector:
    """d^x(g) = d_C(g) + μ(x, g) - μ(g, x)"""
    return vec_sub(vec_add(C.d(g), C.multiply(x, g)), C.multiply(g, x))


def _unshifted_degree(C: DGAlgebraPresentation, v: Mapping[int, Any]) -> Optional[int]:
    return C.space.vector_degree(v)


def gauge_action(
    C: DGAlgebraPresentation,
    g: Mapping[int, Any],
    x: Mapping[int, Any],
    *,
    check: bool = True,
) -> Vector:
    """g·x = x - d^x(g) - d^x(g)·g̃ on degree-1 MC elements of C"""
    if _unshifted_degree(C, g) not in (None, 0):
        raise DegreeError("Gauge parameters live in C⁰")
    if _unshifted_degree(C, x) not in (None, 1):
        raise DegreeError("MC elements of a dg algebra live in C¹")
    if check:
        require_maurer_cartan(C.shifted, x)
    if not g:
        return dict(x)
    dxg = twisted_differential(C, x, g)
    inverse = quasi_inverse(C.multiply, g)
    result = vec_sub(vec_sub(x, dxg), C.multiply(dxg, inverse))
    if check and curvature(C.shifted, result):
        raise InvariantViolation("gauge", "Gauge action left the MC set")
    return result


def gauge_generators(C: DGAlgebraPresentation) -> list[Vector]:
    """c·e_i for nonzero c and every degree-0 basis vector"""
    if not C.field.is_finite:
        raise FiniteFieldRequiredError("gauge orbit closure")
    return [
        {i: c}
        for i in C.space.indices(degree=0)
        for c in C.field.nonzero_elements()
    ]


def gauge_orbits(C: DGAlgebraPresentation, leaf_limit: Optional[int] = None) -> list[list[Vector]]:
    """Partition of MC(C) into gauge orbits, each sorted, orbits ordered by first element"""
    field = C.field
    elements = enumerate_mc(C.shifted, leaf_limit=leaf_limit)
    generators = gauge_generators(C)
    keyed = {vector_key(field, x): x for x in elements}
    seen: set = set()
    orbits: list[list[Vector]] = []
    for key in sorted(keyed):
        if key in seen:
            continue
        orbit = {key}
        queue = [keyed[key]]
        while queue:
            x = queue.pop()
            for g in generators:
                y = gauge_action(C, g, x, check=False)
                k = vector_key(field, y)
                if k not in keyed:
                    raise InvariantViolation("gauge", "Gauge action left the MC set")
                if k not in orbit:
                    orbit.add(k)
                    queue.append(y)
        seen |= orbit
        orbits.append([keyed[k] for k in sorted(orbit)])
    logger.debug("gauge_orbits_computed", mc_elements=len(elements), orbits=len(orbits))
    return orbits


def check_gauge_action(
    C: DGAlgebraPresentation,
    samples: Iterable[tuple[Mapping[int, Any], Mapping[int, Any], Mapping[int, Any]]],
) -> bool:
    """(g⊛h)·x = g·(h·x) on every sampled triple"""
    for g, h, x in samples:
        lhs = gauge_action(C, quasi_multiply(C.multiply, g, h), x)
        rhs = gauge_action(C, g, gauge_action(C, h, x))
        if lhs != rhs:
            return False
    return True
