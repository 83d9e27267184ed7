"""
Exact filtered graded linear algebra

Scalars live in sympy's exact domains (GF(p) with canonical representatives,
or QQ); elimination goes through DomainMatrix.rref. A filtration is encoded by
per-basis-vector weights 1..N-1, so ℱ_n is spanned by the basis vectors of
weight >= n and ℱ_N = 0.

Vectors are sparse dicts {basis index: coefficient} that never store zeros.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import re
from typing import Any, Iterable, Mapping, Optional, Sequence

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .exceptions import (
    DegreeError,
    FiltrationError,
    InputError,
    InvariantViolation,
    NotAChainMapError,
    NotAComplexError,
    NotAcyclicFibrationError,
    NotAFibrationError,
    TransferError,
)
from .logging_config import get_logger
from .metrics import record_linear_solve

logger = get_logger(__name__)

Vector = dict[int, Any]

_SCALAR_PATTERN = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")

# ============================================================
# Scalars
# ============================================================

class Field:
    """Exact ground field: GF(p) for a prime p, or QQ for characteristic 0"""

    def __init__(self, characteristic: int = 0):
        if characteristic < 0 or (characteristic and not isprime(characteristic)):
            raise InputError(f"Characteristic must be 0 or a prime, got {characteristic}")
        self.characteristic = characteristic
        self.domain = GF(characteristic, symmetric=False) if characteristic else QQ
        self.zero = self.domain.zero
        self.one = self.domain.one

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def __call__(self, value: Any):
        """Coerce an int, Fraction, scalar string or domain element"""
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return self.fraction(value.numerator, value.denominator)
        if isinstance(value, int):
            return self.domain(value)
        return self.domain.convert(value)

    def fraction(self, numerator: int, denominator: int):
        if denominator == 0 or (self.characteristic and denominator % self.characteristic == 0):
            raise InputError(f"Denominator {denominator} is not invertible in {self}")
        if self.characteristic:
            return self.domain(numerator) / self.domain(denominator)
        return self.domain(numerator, denominator)

    def parse(self, text: str):
        match = _SCALAR_PATTERN.match(text)
        if not match:
            raise InputError(f"Not an exact scalar: {text!r}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        return self.fraction(numerator, denominator)

    def format(self, value: Any) -> str:
        if self.characteristic:
            return str(int(value))
        numerator, denominator = int(value.numerator), int(value.denominator)
        return str(numerator) if denominator == 1 else f"{numerator}/{denominator}"

    def sort_key(self, value: Any):
        if self.characteristic:
            return int(value)
        return Fraction(int(value.numerator), int(value.denominator))

    def to_sympy(self, value: Any):
        return self.domain.to_sympy(value)

    def inverse(self, value: Any):
        return self.one / value

    def elements(self) -> list:
        """All field elements in canonical order (finite fields only)"""
        if not self.characteristic:
            raise InputError("QQ has infinitely many elements")
        return [self.domain(i) for i in range(self.characteristic)]

    def nonzero_elements(self) -> list:
        return self.elements()[1:]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("Field", self.characteristic))

    def __repr__(self) -> str:
        return f"GF({self.characteristic})" if self.characteristic else "QQ"

    def __reduce__(self):
        return (get_field, (self.characteristic,))


@lru_cache(maxsize=None)
def get_field(characteristic: int = 0) -> Field:
    return Field(characteristic)

# ============================================================
# Sparse Vectors
# ============================================================

def vec_axpy(target: Vector, scale: Any, source: Mapping[int, Any]) -> Vector:
    """target += scale * source, in place"""
    if not scale:
        return target
    for i, c in source.items():
        value = target.get(i)
        value = scale * c if value is None else value + scale * c
        if value:
            target[i] = value
        else:
            target.pop(i, None)
    return target


def vec_add(u: Mapping[int, Any], v: Mapping[int, Any]) -> Vector:
    result = dict(u)
    for i, c in v.items():
        value = result.get(i)
        value = c if value is None else value + c
        if value:
            result[i] = value
        else:
            result.pop(i, None)
    return result


def vec_sub(u: Mapping[int, Any], v: Mapping[int, Any]) -> Vector:
    return vec_add(u, vec_scale(-1, v))


def vec_scale(scale: Any, v: Mapping[int, Any]) -> Vector:
    if not scale:
        return {}
    result = {}
    for i, c in v.items():
        value = scale * c
        if value:
            result[i] = value
    return result


def vector_key(field: Field, v: Mapping[int, Any]) -> tuple:
    """Canonical hashable, sortable key of a sparse vector"""
    return tuple(sorted((i, field.sort_key(c)) for i, c in v.items()))

# ============================================================
# Filtered Graded Spaces
# ============================================================

@dataclass(frozen=True)
class BasisVector:
    name: str
    degree: int
    weight: int = 1


class FilteredGradedSpace:
    """
    Finite basis with integer degrees and filtration weights

    Invariants:
    - 1 <= weight <= N-1 for every basis vector (ℱ_N = 0)
    - basis names are unique
    """

    def __init__(self, field: Field, basis: Sequence[BasisVector], nilpotency: int):
        if nilpotency < 2:
            raise FiltrationError(
                f"Nilpotency length must be at least 2, got {nilpotency}",
                {"nilpotency": nilpotency}
            )
        self.field = field
        self.basis = tuple(basis)
        self.nilpotency = nilpotency
        self._index: dict[str, int] = {}
        for i, b in enumerate(self.basis):
            if b.name in self._index:
                raise InvariantViolation("unique-basis-names", f"Duplicate basis name {b.name!r}")
            if not 1 <= b.weight <= nilpotency - 1:
                raise FiltrationError(
                    f"Weight {b.weight} of {b.name!r} outside 1..{nilpotency - 1}",
                    {"basis": b.name, "weight": b.weight, "nilpotency": nilpotency}
                )
            self._index[b.name] = i
        self.degrees = tuple(b.degree for b in self.basis)
        self.weights = tuple(b.weight for b in self.basis)
        self.names = tuple(b.name for b in self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"Unknown basis vector {name!r}") from None

    def indices(
        self,
        degree: Optional[int] = None,
        min_weight: int = 1,
        weight: Optional[int] = None,
    ) -> list[int]:
        return [
            i for i, b in enumerate(self.basis)
            if (degree is None or b.degree == degree)
            and b.weight >= min_weight
            and (weight is None or b.weight == weight)
        ]

    @property
    def occupied_degrees(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.degrees)))

    def pivot_key(self, i: int) -> tuple:
        b = self.basis[i]
        return (b.weight, b.degree, b.name)

    def vector_degree(self, v: Mapping[int, Any]) -> Optional[int]:
        """Degree of a homogeneous vector, None for zero"""
        degrees = {self.degrees[i] for i in v}
        if len(degrees) > 1:
            raise DegreeError(
                "Vector is not homogeneous",
                {"degrees": sorted(degrees)}
            )
        return degrees.pop() if degrees else None

    def vector_weight(self, v: Mapping[int, Any]) -> int:
        """Largest n with v in ℱ_n"""
        return min((self.weights[i] for i in v), default=self.nilpotency)

    def format_vector(self, v: Mapping[int, Any]) -> dict[str, str]:
        return {self.names[i]: self.field.format(v[i]) for i in sorted(v)}

    def parse_vector(self, entries: Mapping[str, str]) -> Vector:
        result: Vector = {}
        for name, text in entries.items():
            value = self.field(text)
            if value:
                result[self.index(name)] = value
        return result

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FilteredGradedSpace)
            and other.field == self.field
            and other.nilpotency == self.nilpotency
            and other.basis == self.basis
        )

    def __hash__(self) -> int:
        return hash((self.field, self.nilpotency, self.basis))

    def __repr__(self) -> str:
        return f"FilteredGradedSpace(dim={self.dimension}, N={self.nilpotency}, {self.field})"

# ============================================================
# Filtered Linear Maps
# ============================================================

class FilteredLinearMap:
    """Homogeneous filtration-preserving linear map, stored as {source index: image}"""

    def __init__(
        self,
        source: FilteredGradedSpace,
        target: FilteredGradedSpace,
        table: Mapping[int, Mapping[int, Any]],
        degree: int = 0,
        *,
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.degree = degree
        self.table: dict[int, Vector] = {
            i: {j: c for j, c in image.items() if c}
            for i, image in table.items()
        }
        self.table = {i: image for i, image in self.table.items() if image}
        if check:
            self._validate()

    def _validate(self) -> None:
        for i, image in self.table.items():
            expected = self.source.degrees[i] + self.degree
            for j in image:
                if self.target.degrees[j] != expected:
                    raise DegreeError(
                        f"Image of {self.source.names[i]!r} has a component in degree "
                        f"{self.target.degrees[j]}, expected {expected}",
                        {"source": self.source.names[i], "target": self.target.names[j]}
                    )
                if self.target.weights[j] < self.source.weights[i]:
                    raise FiltrationError(
                        f"Image of {self.source.names[i]!r} (weight {self.source.weights[i]}) "
                        f"has component {self.target.names[j]!r} of weight {self.target.weights[j]}",
                        {"source": self.source.names[i], "target": self.target.names[j]}
                    )

    def image(self, i: int) -> Vector:
        return self.table.get(i, {})

    def apply(self, v: Mapping[int, Any]) -> Vector:
        result: Vector = {}
        for i, c in v.items():
            image = self.table.get(i)
            if image:
                vec_axpy(result, c, image)
        return result

    __call__ = apply

    def compose(self, other: "FilteredLinearMap") -> "FilteredLinearMap":
        """self ∘ other"""
        table = {i: self.apply(image) for i, image in other.table.items()}
        return FilteredLinearMap(other.source, self.target, table, self.degree + other.degree, check=False)

    def __add__(self, other: "FilteredLinearMap") -> "FilteredLinearMap":
        keys = set(self.table) | set(other.table)
        table = {i: vec_add(self.image(i), other.image(i)) for i in keys}
        return FilteredLinearMap(self.source, self.target, table, self.degree, check=False)

    def __neg__(self) -> "FilteredLinearMap":
        return self.scaled(self.target.field(-1))

    def __sub__(self, other: "FilteredLinearMap") -> "FilteredLinearMap":
        return self + (-other)

    def scaled(self, scale: Any) -> "FilteredLinearMap":
        table = {i: vec_scale(scale, image) for i, image in self.table.items()}
        return FilteredLinearMap(self.source, self.target, table, self.degree, check=False)

    @property
    def is_zero(self) -> bool:
        return not self.table

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FilteredLinearMap)
            and other.degree == self.degree
            and other.table == self.table
            and other.source == self.source
            and other.target == self.target
        )

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def identity(cls, space: FilteredGradedSpace) -> "FilteredLinearMap":
        return cls(space, space, {i: {i: space.field.one} for i in range(space.dimension)}, 0, check=False)

    @classmethod
    def zero(cls, source: FilteredGradedSpace, target: FilteredGradedSpace, degree: int = 0) -> "FilteredLinearMap":
        return cls(source, target, {}, degree, check=False)

# ============================================================
# Complexes & Chain Maps
# ============================================================

class FilteredComplex:
    """A filtered graded space with a degree +1 differential, d∘d = 0"""

    def __init__(self, space: FilteredGradedSpace, differential: FilteredLinearMap, *, check: bool = True):
        if differential.degree != 1 or differential.source != space or differential.target != space:
            raise DegreeError("Differential must be a degree +1 endomorphism of the carrier")
        self.space = space
        self.differential = differential
        if check and not differential.compose(differential).is_zero:
            raise NotAComplexError()

    @property
    def d(self) -> FilteredLinearMap:
        return self.differential

    @classmethod
    def with_zero_differential(cls, space: FilteredGradedSpace) -> "FilteredComplex":
        return cls(space, FilteredLinearMap.zero(space, space, 1), check=False)


class ChainMap:
    """Degree-0 filtered map commuting with the differentials"""

    def __init__(
        self,
        source: FilteredComplex,
        target: FilteredComplex,
        linear: FilteredLinearMap,
        *,
        check: bool = True,
    ):
        if linear.degree != 0:
            raise DegreeError("Chain maps have degree 0")
        self.source = source
        self.target = target
        self.linear = linear
        if check:
            lhs = target.d.compose(linear)
            rhs = linear.compose(source.d)
            if lhs.table != rhs.table:
                raise NotAChainMapError()

    def __call__(self, v: Mapping[int, Any]) -> Vector:
        return self.linear(v)

    def compose(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target, self.linear.compose(other.linear), check=False)

# ============================================================
# Elimination
# ============================================================

def row_reduce(field: Field, rows: list[list], ncols: int) -> tuple[list[list], tuple[int, ...]]:
    """Reduced row echelon form over the field, with pivot columns"""
    record_linear_solve()
    if not rows or ncols == 0:
        return [list(r) for r in rows], ()
    matrix = DomainMatrix(rows, (len(rows), ncols), field.domain)
    reduced, pivots = matrix.rref()
    return reduced.to_list(), tuple(pivots)


class LinearSolver:
    """
    Solves Σ x_j columns[j] = z exactly for many right-hand sides

    Rows are the ambient coordinates listed in `rows`. Pivots are taken
    left to right, so the column order decides every choice the solver makes.
    """

    def __init__(self, field: Field, columns: Sequence[Mapping[int, Any]], rows: Iterable[int]):
        self.field = field
        self.columns = [dict(c) for c in columns]
        self.rows = list(rows)
        self._row_pos = {r: p for p, r in enumerate(self.rows)}
        k, m = len(self.columns), len(self.rows)
        zero, one = field.zero, field.one
        matrix = [[zero] * (k + m) for _ in range(m)]
        for j, column in enumerate(self.columns):
            for r, c in column.items():
                pos = self._row_pos.get(r)
                if pos is None:
                    raise ValueError(f"Column {j} has an entry outside the row set")
                matrix[pos][j] = c
        for p in range(m):
            matrix[p][k + p] = one
        reduced, pivots = row_reduce(field, matrix, k + m)
        self._k = k
        self._reduced = reduced
        self.pivot_columns = tuple(p for p in pivots if p < k)
        self.rank = len(self.pivot_columns)
        self._transform = [row[k:] for row in reduced]

    def solve(self, z: Mapping[int, Any]) -> Optional[dict[int, Any]]:
        """Coefficients {column: x_j} with free columns set to zero, or None"""
        entries = []
        for r, c in z.items():
            pos = self._row_pos.get(r)
            if pos is None:
                if c:
                    return None
                continue
            entries.append((pos, c))
        zero = self.field.zero

        def transformed(row: int):
            total = zero
            coefficients = self._transform[row]
            for pos, c in entries:
                e = coefficients[pos]
                if e:
                    total = total + e * c
            return total

        for row in range(self.rank, len(self.rows)):
            if transformed(row):
                return None
        solution = {}
        for row, column in enumerate(self.pivot_columns):
            value = transformed(row)
            if value:
                solution[column] = value
        return solution

    @property
    def transform(self) -> list[list]:
        """E such that E·[columns] is in reduced echelon form; rows >= rank test consistency"""
        return self._transform

    @property
    def free_columns(self) -> list[int]:
        pivots = set(self.pivot_columns)
        return [j for j in range(self._k) if j not in pivots]

    def in_span(self, z: Mapping[int, Any]) -> bool:
        return self.solve(z) is not None

    def combine(self, coefficients: Mapping[int, Any]) -> Vector:
        result: Vector = {}
        for j, c in coefficients.items():
            vec_axpy(result, c, self.columns[j])
        return result

    def kernel(self) -> list[dict[int, Any]]:
        """Null space basis in column coordinates, one vector per free column"""
        pivots = set(self.pivot_columns)
        basis = []
        for free in range(self._k):
            if free in pivots:
                continue
            x = {free: self.field.one}
            for row, column in enumerate(self.pivot_columns):
                e = self._reduced[row][free]
                if e:
                    x[column] = -e
            basis.append(x)
        return basis


def filtered_kernel(f: FilteredLinearMap, degree: int) -> list[Vector]:
    """
    Basis of ker f in the given source degree, adapted to the filtration

    Columns are ordered by descending weight, so each kernel vector's lowest
    weight sits at its free column and ℱ_n ker f is spanned by the vectors of
    weight >= n.
    """
    source = f.source
    ordered = sorted(source.indices(degree=degree), key=lambda i: (-source.weights[i], source.degrees[i], source.names[i]))
    if not ordered:
        return []
    rows = f.target.indices(degree=degree + f.degree)
    solver = LinearSolver(source.field, [f.image(i) for i in ordered], rows)
    return [{ordered[j]: c for j, c in x.items()} for x in solver.kernel()]

# ============================================================
# Subspaces
# ============================================================

class Subspace:
    """
    Graded subspace with a filtered basis, in ambient coordinates

    Each basis vector gets the degree of its components and the weight of
    its lowest-weight component; callers supply filtration-adapted bases.
    """

    def __init__(
        self,
        ambient: FilteredGradedSpace,
        vectors: Sequence[Mapping[int, Any]],
        names: Optional[Sequence[str]] = None,
        prefix: str = "k",
    ):
        self.ambient = ambient
        self.vectors = [dict(v) for v in vectors]
        basis = []
        used: set[str] = set()
        for position, v in enumerate(self.vectors):
            degree = ambient.vector_degree(v)
            if degree is None:
                raise InvariantViolation("subspace-basis", "Zero vector in a subspace basis")
            if names is not None:
                name = names[position]
            elif len(v) == 1 and next(iter(v.values())) == ambient.field.one:
                name = ambient.names[next(iter(v))]
            else:
                name = f"{prefix}{position}"
            while name in used:
                name = name + "'"
            used.add(name)
            basis.append(BasisVector(name, degree, ambient.vector_weight(v)))
        self.space = FilteredGradedSpace(ambient.field, basis, ambient.nilpotency)
        self.inclusion = FilteredLinearMap(self.space, ambient, dict(enumerate(self.vectors)), 0)
        self._solvers: dict[int, tuple[list[int], LinearSolver]] = {}

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def _solver(self, degree: int) -> tuple[list[int], LinearSolver]:
        if degree not in self._solvers:
            members = self.space.indices(degree=degree)
            solver = LinearSolver(
                self.ambient.field,
                [self.vectors[i] for i in members],
                self.ambient.indices(degree=degree),
            )
            self._solvers[degree] = (members, solver)
        return self._solvers[degree]

    def coordinates(self, v: Mapping[int, Any]) -> Vector:
        """Coordinates of an ambient vector lying in the subspace"""
        if not v:
            return {}
        result: Vector = {}
        by_degree: dict[int, Vector] = {}
        for i, c in v.items():
            by_degree.setdefault(self.ambient.degrees[i], {})[i] = c
        for degree, part in by_degree.items():
            members, solver = self._solver(degree)
            x = solver.solve(part)
            if x is None:
                raise InvariantViolation(
                    "subspace-membership",
                    "Vector does not lie in the subspace",
                    {"vector": self.ambient.format_vector(v)}
                )
            for j, c in x.items():
                result[members[j]] = c
        return result

    def restrict(self, f: FilteredLinearMap) -> FilteredLinearMap:
        """An endomorphism of the ambient space that preserves the subspace, in subspace coordinates"""
        table = {i: self.coordinates(f(v)) for i, v in enumerate(self.vectors)}
        return FilteredLinearMap(self.space, self.space, table, f.degree)


def kernel_subspace(f: FilteredLinearMap, prefix: str = "k") -> Subspace:
    """ker f as a filtered subspace of the source"""
    vectors: list[Vector] = []
    for degree in f.source.occupied_degrees:
        vectors.extend(filtered_kernel(f, degree))
    return Subspace(f.source, vectors, prefix=prefix)

# ============================================================
# Cohomology
# ============================================================

@dataclass
class CohomologyBasis:
    """Basis of H^degree(ℱ_level C) as cocycle representatives"""

    complex: FilteredComplex
    degree: int
    level: int
    representatives: list[Vector]
    _projector: LinearSolver

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def classify(self, z: Mapping[int, Any]) -> tuple:
        """Coordinates of the class of a cocycle in ℱ_level"""
        space = self.complex.space
        if self.complex.d(z):
            raise InvariantViolation("cocycle", "Vector is not a cocycle", {"vector": space.format_vector(z)})
        if space.vector_weight(z) < self.level:
            raise FiltrationError(f"Vector does not lie in ℱ_{self.level}")
        x = self._projector.solve(z)
        if x is None:
            raise InvariantViolation("cohomology", "Cocycle outside the span of representatives and coboundaries")
        zero = space.field.zero
        return tuple(x.get(j, zero) for j in range(self.dimension))

    def element(self, coordinates: Sequence[Any]) -> Vector:
        result: Vector = {}
        for c, rep in zip(coordinates, self.representatives):
            vec_axpy(result, c, rep)
        return result


def cohomology_basis(C: FilteredComplex, degree: int, level: int = 1) -> CohomologyBasis:
    """
    H^degree(ℱ_level C) by exact elimination

    Representatives are cocycles sifted against coboundaries in kernel order;
    their independence modulo coboundaries is re-checked by rank.
    """
    space, d = C.space, C.d
    if not 1 <= level <= space.nilpotency:
        raise InputError(f"Filtration level {level} outside 1..{space.nilpotency}")
    field = space.field
    current = [i for i in space.indices(degree=degree) if space.weights[i] >= level]
    current.sort(key=lambda i: (-space.weights[i], space.names[i]))
    rows = space.indices(degree=degree)
    if current:
        solver = LinearSolver(field, [d.image(i) for i in current], space.indices(degree=degree + 1))
        cocycles = [{current[j]: c for j, c in x.items()} for x in solver.kernel()]
    else:
        cocycles = []
    boundaries = [
        d.image(i) for i in space.indices(degree=degree - 1)
        if space.weights[i] >= level and d.image(i)
    ]
    sift = LinearSolver(field, boundaries + cocycles, rows)
    offset = len(boundaries)
    representatives = [cocycles[j - offset] for j in sift.pivot_columns if j >= offset]
    boundary_rank = sum(1 for j in sift.pivot_columns if j < offset)
    projector = LinearSolver(field, representatives + boundaries, rows)
    if projector.rank != len(representatives) + boundary_rank:
        raise InvariantViolation("cohomology", "Representatives are dependent modulo coboundaries")
    return CohomologyBasis(C, degree, level, representatives, projector)


def _levels(*spaces: FilteredGradedSpace) -> range:
    return range(1, max(s.nilpotency for s in spaces))


def is_weak_equivalence(f: ChainMap) -> bool:
    """True iff every ℱ_n f is a quasi-isomorphism"""
    source, target = f.source, f.target
    field = source.space.field
    degrees = sorted(set(source.space.occupied_degrees) | set(target.space.occupied_degrees))
    for level in _levels(source.space, target.space):
        for degree in degrees:
            hs = cohomology_basis(source, degree, level)
            ht = cohomology_basis(target, degree, level)
            if hs.dimension != ht.dimension:
                return False
            if not hs.dimension:
                continue
            images = []
            for rep in hs.representatives:
                coordinates = ht.classify(f.linear(rep))
                images.append({j: c for j, c in enumerate(coordinates) if c})
            if LinearSolver(field, images, range(ht.dimension)).rank != ht.dimension:
                return False
    return True


def is_fibration(f: "ChainMap | FilteredLinearMap") -> bool:
    """True iff every ℱ_n f is surjective in every degree"""
    linear = f.linear if isinstance(f, ChainMap) else f
    source, target = linear.source, linear.target
    for level in _levels(source, target):
        for degree in target.occupied_degrees:
            needed = [i for i in target.indices(degree=degree) if target.weights[i] >= level]
            if not needed:
                continue
            columns = [
                linear.image(i) for i in source.indices(degree=degree - linear.degree)
                if source.weights[i] >= level
            ]
            if LinearSolver(target.field, columns, target.indices(degree=degree)).rank != len(needed):
                return False
    return True

# ============================================================
# Sections & Contractions
# ============================================================

def filtered_section(f: FilteredLinearMap, order: str = "ascending") -> FilteredLinearMap:
    """
    Filtration-preserving linear σ with f∘σ = id

    Preimages of a weight-w target vector are sought among source vectors of
    weight >= w, pivoting in (weight, degree, name) order, or its reverse.
    """
    source, target = f.source, f.target
    if order not in ("ascending", "descending"):
        raise InputError(f"Unknown pivot order {order!r}")
    solvers: dict[tuple[int, int], tuple[list[int], LinearSolver]] = {}
    table: dict[int, Vector] = {}
    for j in range(target.dimension):
        key = (target.degrees[j], target.weights[j])
        if key not in solvers:
            candidates = [
                i for i in source.indices(degree=key[0] - f.degree)
                if source.weights[i] >= key[1]
            ]
            candidates.sort(key=source.pivot_key, reverse=(order == "descending"))
            solvers[key] = (
                candidates,
                LinearSolver(source.field, [f.image(i) for i in candidates], target.indices(degree=key[0])),
            )
        candidates, solver = solvers[key]
        x = solver.solve({j: target.field.one})
        if x is None:
            raise NotAFibrationError(f"{target.names[j]!r} has no preimage of the same filtration level")
        table[j] = {candidates[c]: value for c, value in x.items()}
    return FilteredLinearMap(target, source, table, -f.degree)


def acyclic_homotopy(C: FilteredComplex) -> FilteredLinearMap:
    """
    Filtration-preserving h of degree -1 with dh + hd = id on a filtered-acyclic complex

    A complement of the cocycles is chosen greedily from the top weight down,
    so it is filtered; h inverts d from that complement onto the cocycles.
    """
    space, d = C.space, C.d
    field = space.field
    top = space.nilpotency - 1
    cocycles: dict[int, list[Vector]] = {}
    complements: dict[int, list[Vector]] = {}
    decompositions: dict[int, LinearSolver] = {}
    for degree in space.occupied_degrees:
        zs = filtered_kernel(d, degree)
        columns: list[Vector] = []
        tags: list[str] = []
        for w in range(top, 0, -1):
            for z in zs:
                if space.vector_weight(z) == w:
                    columns.append(z)
                    tags.append("z")
            for i in sorted(space.indices(degree=degree, weight=w), key=lambda i: space.names[i]):
                columns.append({i: field.one})
                tags.append("c")
        greedy = LinearSolver(field, columns, space.indices(degree=degree))
        ordered_z = [columns[j] for j in greedy.pivot_columns if tags[j] == "z"]
        chosen_c = [columns[j] for j in greedy.pivot_columns if tags[j] == "c"]
        cocycles[degree] = ordered_z
        complements[degree] = chosen_c
        decompositions[degree] = LinearSolver(field, ordered_z + chosen_c, space.indices(degree=degree))

    homotopy_of_cocycle: dict[int, list[Vector]] = {}
    for degree, zs in cocycles.items():
        below = complements.get(degree - 1, [])
        solver = LinearSolver(field, [d(c) for c in below], space.indices(degree=degree))
        images = []
        for z in zs:
            x = solver.solve(z)
            if x is None:
                raise InvariantViolation("filtered-acyclic", f"Complex has cohomology in degree {degree}")
            images.append(solver_combine(below, x))
        homotopy_of_cocycle[degree] = images

    table: dict[int, Vector] = {}
    for i in range(space.dimension):
        degree = space.degrees[i]
        x = decompositions[degree].solve({i: field.one})
        image: Vector = {}
        for j, c in (x or {}).items():
            if j < len(cocycles[degree]):
                vec_axpy(image, c, homotopy_of_cocycle[degree][j])
        table[i] = image
    h = FilteredLinearMap(space, space, table, -1)
    _assert_homotopy(d, h, FilteredLinearMap.identity(space), "filtered-acyclic")
    return h


def solver_combine(vectors: Sequence[Mapping[int, Any]], coefficients: Mapping[int, Any]) -> Vector:
    result: Vector = {}
    for j, c in coefficients.items():
        vec_axpy(result, c, vectors[j])
    return result


def _assert_homotopy(d: FilteredLinearMap, h: FilteredLinearMap, expected: FilteredLinearMap, invariant: str) -> None:
    lhs = d.compose(h) + h.compose(d)
    if lhs.table != expected.table:
        raise InvariantViolation(invariant, "Homotopy identity dh + hd fails")


@dataclass
class AcyclicFibrationContraction:
    """Section τ and homotopy h of an acyclic fibration f, with id - τf = dh + hd"""

    section: ChainMap
    homotopy: FilteredLinearMap
    kernel: Subspace


def contract_acyclic_fibration(f: ChainMap, order: str = "ascending") -> AcyclicFibrationContraction:
    """
    Chain section τ and homotopy h for an acyclic fibration

    τ = σ - h_K(dσ - σd′) corrects a filtered linear section σ by a contracting
    homotopy h_K of the kernel; h = h_K∘(id - τf).
    """
    if not (is_fibration(f) and is_weak_equivalence(f)):
        raise NotAcyclicFibrationError()
    source, target = f.source, f.target
    field = source.space.field
    sigma = filtered_section(f.linear, order)
    kernel = kernel_subspace(f.linear)
    kernel_complex = FilteredComplex(kernel.space, kernel.restrict(source.d))
    h_kernel = acyclic_homotopy(kernel_complex)

    def contract(v: Vector) -> Vector:
        return kernel.inclusion(h_kernel(kernel.coordinates(v)))

    tau_table: dict[int, Vector] = {}
    for j in range(target.space.dimension):
        s = sigma.image(j)
        defect = vec_sub(source.d(s), sigma(target.d.image(j)))
        tau_table[j] = vec_sub(s, contract(defect))
    tau = ChainMap(target, source, FilteredLinearMap(target.space, source.space, tau_table))

    h_table: dict[int, Vector] = {}
    for i in range(source.space.dimension):
        projected = vec_sub({i: field.one}, tau(f.linear.image(i)))
        h_table[i] = contract(projected)
    h = FilteredLinearMap(source.space, source.space, h_table, -1)

    identity_target = FilteredLinearMap.identity(target.space)
    if f.linear.compose(tau.linear).table != identity_target.table:
        raise InvariantViolation("section", "f∘τ ≠ id")
    expected = FilteredLinearMap.identity(source.space) - tau.linear.compose(f.linear)
    _assert_homotopy(source.d, h, expected, "contraction")
    if not f.linear.compose(h).is_zero:
        raise InvariantViolation("contraction", "Homotopy leaves ker f")
    logger.debug("acyclic_fibration_contracted", kernel_dimension=kernel.dimension)
    return AcyclicFibrationContraction(tau, h, kernel)


@dataclass
class CohomologyContraction:
    """
    Contraction data (ι, π, h) onto cohomology with zero differential

    πι = id, id - ιπ = dh + hd, and the side conditions h² = 0, hι = 0, πh = 0.
    """

    space: FilteredGradedSpace
    inclusion: FilteredLinearMap
    projection: FilteredLinearMap
    homotopy: FilteredLinearMap


def cohomology_contraction(C: FilteredComplex) -> CohomologyContraction:
    """Contraction onto cohomology for a weight-homogeneous differential, layer by layer"""
    space, d = C.space, C.d
    field = space.field
    for i, image in d.table.items():
        if any(space.weights[j] != space.weights[i] for j in image):
            raise TransferError(
                f"Differential raises the weight of {space.names[i]!r}; "
                "no filtered contraction onto cohomology is computed for such complexes"
            )
    layers = sorted({(space.degrees[i], space.weights[i]) for i in range(space.dimension)})
    complements: dict[tuple[int, int], list[Vector]] = {}
    cocycles: dict[tuple[int, int], list[Vector]] = {}
    for degree, weight in layers:
        members = sorted(space.indices(degree=degree, weight=weight), key=lambda i: space.names[i])
        solver = LinearSolver(field, [d.image(i) for i in members], space.indices(degree=degree + 1, weight=weight))
        zs = [{members[j]: c for j, c in x.items()} for x in solver.kernel()]
        columns = zs + [{i: field.one} for i in members]
        greedy = LinearSolver(field, columns, members)
        cocycles[(degree, weight)] = zs
        complements[(degree, weight)] = [columns[j] for j in greedy.pivot_columns if j >= len(zs)]

    representatives: list[tuple[int, int, Vector]] = []
    decompositions: dict[tuple[int, int], tuple[LinearSolver, int, list[Vector]]] = {}
    for degree, weight in layers:
        members = space.indices(degree=degree, weight=weight)
        below = complements.get((degree - 1, weight), [])
        boundaries = [d(c) for c in below]
        zs = cocycles[(degree, weight)]
        sift = LinearSolver(field, boundaries + zs, members)
        reps = [zs[j - len(boundaries)] for j in sift.pivot_columns if j >= len(boundaries)]
        for rep in reps:
            representatives.append((degree, weight, rep))
        basis = reps + boundaries + complements[(degree, weight)]
        decomposition = LinearSolver(field, basis, members)
        if decomposition.rank != len(members):
            raise InvariantViolation("cohomology-decomposition", f"Layer ({degree}, {weight}) does not split")
        decompositions[(degree, weight)] = (decomposition, len(reps), below)

    basis_vectors = []
    used: set[str] = set()
    for position, (degree, weight, rep) in enumerate(representatives):
        if len(rep) == 1 and next(iter(rep.values())) == field.one:
            name = space.names[next(iter(rep))]
        else:
            name = f"h{position}"
        while name in used:
            name = name + "'"
        used.add(name)
        basis_vectors.append(BasisVector(name, degree, weight))
    cohomology = FilteredGradedSpace(field, basis_vectors, space.nilpotency)
    rep_index = {}
    for position, (degree, weight, _) in enumerate(representatives):
        rep_index.setdefault((degree, weight), []).append(position)

    inclusion = FilteredLinearMap(cohomology, space, {k: rep for k, (_, _, rep) in enumerate(representatives)})
    projection_table: dict[int, Vector] = {}
    homotopy_table: dict[int, Vector] = {}
    for i in range(space.dimension):
        layer = (space.degrees[i], space.weights[i])
        decomposition, rep_count, below = decompositions[layer]
        x = decomposition.solve({i: field.one}) or {}
        positions = rep_index.get(layer, [])
        projection_table[i] = {positions[j]: c for j, c in x.items() if j < rep_count}
        image: Vector = {}
        for j, c in x.items():
            if rep_count <= j < rep_count + len(below):
                vec_axpy(image, c, below[j - rep_count])
        homotopy_table[i] = image
    projection = FilteredLinearMap(space, cohomology, projection_table)
    homotopy = FilteredLinearMap(space, space, homotopy_table, -1)

    if projection.compose(inclusion).table != FilteredLinearMap.identity(cohomology).table:
        raise InvariantViolation("contraction", "π∘ι ≠ id")
    expected = FilteredLinearMap.identity(space) - inclusion.compose(projection)
    _assert_homotopy(d, homotopy, expected, "contraction")
    if not (homotopy.compose(homotopy).is_zero and homotopy.compose(inclusion).is_zero
            and projection.compose(homotopy).is_zero):
        raise InvariantViolation("side-conditions", "h² = 0, hι = 0, πh = 0 do not all hold")
    return CohomologyContraction(cohomology, inclusion, projection, homotopy)
