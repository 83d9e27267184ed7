"""
Finite unital dg algebras and the normalized cochains N*(Δⁿ)

Everything here carries the discrete filtration: these algebras are the
coefficient side of A ⊗ B, where the filtration comes from A alone.
"""
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Optional, Sequence

from .config import settings
from .exceptions import DGAlgebraError, DegreeError, InputError, NotAChainMapError
from .linalg import Field, Vector, vec_add, vec_axpy, vec_scale
from .logging_config import get_logger

logger = get_logger(__name__)

SimplexLabel = tuple[int, ...]

# ============================================================
# Finite DG Algebras
# ============================================================

class FiniteDGAlgebra:
    """
    Finite-dimensional graded algebra with differential and optional unit

    Laws checked at construction: degree homogeneity, d² = 0,
    associativity, Leibniz d(xy) = dx·y + (-1)^|x| x·dy, two-sided unit.
    """

    def __init__(
        self,
        field: Field,
        names: Sequence[str],
        degrees: Sequence[int],
        differential: Mapping[int, Mapping[int, object]],
        product: Mapping[tuple[int, int], Mapping[int, object]],
        unit: Optional[Mapping[int, object]] = None,
        *,
        check: bool = True,
    ):
        if len(names) != len(degrees):
            raise InputError("Basis names and degrees differ in length")
        self.field = field
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise InputError("Duplicate basis names in dg algebra")
        self.differential: dict[int, Vector] = {
            i: {j: c for j, c in v.items() if c} for i, v in differential.items()
        }
        self.differential = {i: v for i, v in self.differential.items() if v}
        self.product: dict[tuple[int, int], Vector] = {
            key: {j: c for j, c in v.items() if c} for key, v in product.items()
        }
        self.product = {key: v for key, v in self.product.items() if v}
        self.unit: Optional[Vector] = None if unit is None else {i: c for i, c in unit.items() if c}
        if check:
            self.validate()

    @property
    def dimension(self) -> int:
        return len(self.names)

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"Unknown basis element {name!r}") from None

    def indices(self, degree: Optional[int] = None) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if degree is None or d == degree]

    def d(self, v: Mapping[int, object]) -> Vector:
        result: Vector = {}
        for i, c in v.items():
            image = self.differential.get(i)
            if image:
                vec_axpy(result, c, image)
        return result

    def multiply(self, u: Mapping[int, object], v: Mapping[int, object]) -> Vector:
        result: Vector = {}
        for i, a in u.items():
            for j, b in v.items():
                image = self.product.get((i, j))
                if image:
                    vec_axpy(result, a * b, image)
        return result

    def basis_product(self, i: int, j: int) -> Vector:
        return self.product.get((i, j), {})

    def vector_degree(self, v: Mapping[int, object]) -> Optional[int]:
        degrees = {self.degrees[i] for i in v}
        if len(degrees) > 1:
            raise DegreeError("Inhomogeneous element of a dg algebra")
        return degrees.pop() if degrees else None

    def validate(self) -> None:
        one = self.field.one
        for i, image in self.differential.items():
            if any(self.degrees[j] != self.degrees[i] + 1 for j in image):
                raise DegreeError(f"Differential of {self.names[i]!r} is not of degree +1")
        for (i, j), image in self.product.items():
            if any(self.degrees[k] != self.degrees[i] + self.degrees[j] for k in image):
                raise DegreeError(f"Product {self.names[i]!r}·{self.names[j]!r} is not additive in degree")

        for i in range(self.dimension):
            if self.d(self.d({i: one})):
                raise DGAlgebraError("d-squared-zero", f"d² ≠ 0 on {self.names[i]!r}")

        triples = set()
        for (i, j) in self.product:
            for k in range(self.dimension):
                triples.add((i, j, k))
                triples.add((k, i, j))
        for i, j, k in sorted(triples):
            lhs = self.multiply(self.basis_product(i, j), {k: one})
            rhs = self.multiply({i: one}, self.basis_product(j, k))
            if lhs != rhs:
                raise DGAlgebraError(
                    "associativity",
                    f"Associativity fails on ({self.names[i]}, {self.names[j]}, {self.names[k]})",
                    {"triple": [self.names[i], self.names[j], self.names[k]]}
                )

        minus = self.field(-1)
        for i in range(self.dimension):
            di = self.differential.get(i, {})
            sign = minus if self.degrees[i] % 2 else one
            for j in range(self.dimension):
                dj = self.differential.get(j, {})
                if not (di or dj or (i, j) in self.product):
                    continue
                lhs = self.d(self.basis_product(i, j))
                rhs = vec_add(
                    self.multiply(di, {j: one}),
                    vec_scale(sign, self.multiply({i: one}, dj)),
                )
                if lhs != rhs:
                    raise DGAlgebraError(
                        "leibniz",
                        f"Leibniz rule fails on ({self.names[i]}, {self.names[j]})",
                        {"pair": [self.names[i], self.names[j]]}
                    )

        if self.unit is not None:
            if any(self.degrees[i] != 0 for i in self.unit):
                raise DGAlgebraError("unit", "Unit is not of degree 0")
            if self.d(self.unit):
                raise DGAlgebraError("unit", "Unit is not a cocycle")
            for i in range(self.dimension):
                if self.multiply(self.unit, {i: one}) != {i: one} or self.multiply({i: one}, self.unit) != {i: one}:
                    raise DGAlgebraError("unit", f"Unit law fails on {self.names[i]!r}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dimension}, {self.field})"


def ground_algebra(field: Field) -> "NormalizedCochains":
    """𝔽 as the dg algebra N*(Δ⁰)"""
    return structure_constants(0, field)

# ============================================================
# Normalized Cochains N*(Δⁿ)
# ============================================================

def simplex_name(label: SimplexLabel) -> str:
    return "phi" + "".join(str(i) for i in label)


class NormalizedCochains(FiniteDGAlgebra):
    """N*(Δⁿ): basis φ_σ for strictly increasing σ ⊆ [0, n], φ_σ in degree len(σ) - 1"""

    def __init__(self, n: int, field: Field, labels, differential, product, unit):
        self.n = n
        self.labels: tuple[SimplexLabel, ...] = tuple(labels)
        self._label_index = {label: i for i, label in enumerate(self.labels)}
        super().__init__(
            field,
            [simplex_name(label) for label in self.labels],
            [len(label) - 1 for label in self.labels],
            differential,
            product,
            unit,
        )

    def label_index(self, label: SimplexLabel) -> int:
        try:
            return self._label_index[tuple(label)]
        except KeyError:
            raise InputError(f"{tuple(label)} is not a non-degenerate simplex of Δ^{self.n}") from None

    def vertex(self, i: int) -> int:
        return self.label_index((i,))

    @property
    def top(self) -> int:
        """Index of φ_[n]"""
        return self.label_index(tuple(range(self.n + 1)))

    def coface(self, j: int) -> int:
        """Index of φ_{d^j[n-1]}, the codimension-one face opposite vertex j"""
        return self.label_index(tuple(i for i in range(self.n + 1) if i != j))


def simplex_labels(n: int) -> list[SimplexLabel]:
    """ℬ_n sorted by (dimension, lexicographic)"""
    labels: list[SimplexLabel] = []
    for k in range(n + 1):
        labels.extend(combinations(range(n + 1), k + 1))
    return labels


@lru_cache(maxsize=None)
def structure_constants(n: int, field: Field) -> NormalizedCochains:
    """
    Tables of δ, ⌣ and 𝟏_n on N*(Δⁿ)

    δφ_σ = Σ (-1)^i φ_τ over τ with σ = d_i τ; the cup product is
    Alexander-Whitney, φ_σ ⌣ φ_ρ = φ_{σ ∪ ρ} when σ ends where ρ starts.
    In odd degree δ agrees with (-1)^{k+1+i}; in even degree that sign is
    not a derivation of ⌣ once n >= 2 and the characteristic is odd.
    """
    if n < 0:
        raise InputError(f"Simplex dimension must be non-negative, got {n}")
    if n > settings.max_cochain_dimension:
        raise InputError(
            f"N*(Δ^{n}) exceeds the configured cap {settings.max_cochain_dimension}"
        )
    labels = simplex_labels(n)
    index = {label: i for i, label in enumerate(labels)}
    one = field.one
    minus = field(-1)

    differential: dict[int, Vector] = {}
    for label in labels:
        image: Vector = {}
        for v in range(n + 1):
            if v in label:
                continue
            tau = tuple(sorted(label + (v,)))
            position = tau.index(v)
            image[index[tau]] = minus if position % 2 else one
        differential[index[label]] = image

    product: dict[tuple[int, int], Vector] = {}
    for left in labels:
        for right in labels:
            if left[-1] == right[0]:
                product[(index[left], index[right])] = {index[left + right[1:]]: one}

    unit = {index[(i,)]: one for i in range(n + 1)}
    cochains = NormalizedCochains(n, field, labels, differential, product, unit)
    top = cochains.top
    # On Δ⁰ the top cochain is the unit
    if n >= 1 and (cochains.differential.get(top) or (top, top) in cochains.product):
        raise DGAlgebraError("top-cochain", "δφ_[n] or φ_[n]⌣φ_[n] is nonzero")
    logger.debug("cochains_built", n=n, dimension=cochains.dimension, field=repr(field))
    return cochains

# ============================================================
# DG Algebra Maps
# ============================================================

class DGAlgebraMap:
    """Degree-0 multiplicative chain map between finite dg algebras, unital when both sides are"""

    def __init__(
        self,
        source: FiniteDGAlgebra,
        target: FiniteDGAlgebra,
        table: Mapping[int, Mapping[int, object]],
        *,
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.table: dict[int, Vector] = {
            i: {j: c for j, c in v.items() if c} for i, v in table.items()
        }
        self.table = {i: v for i, v in self.table.items() if v}
        if check:
            self.validate()

    def image(self, i: int) -> Vector:
        return self.table.get(i, {})

    def apply(self, v: Mapping[int, object]) -> Vector:
        result: Vector = {}
        for i, c in v.items():
            image = self.table.get(i)
            if image:
                vec_axpy(result, c, image)
        return result

    __call__ = apply

    def compose(self, other: "DGAlgebraMap") -> "DGAlgebraMap":
        """self ∘ other"""
        return DGAlgebraMap(
            other.source, self.target,
            {i: self.apply(v) for i, v in other.table.items()},
            check=False,
        )

    def validate(self) -> None:
        source, target = self.source, self.target
        one = source.field.one
        for i, image in self.table.items():
            if any(target.degrees[j] != source.degrees[i] for j in image):
                raise DegreeError(f"Image of {source.names[i]!r} changes degree")
        for i in range(source.dimension):
            if target.d(self.image(i)) != self.apply(source.d({i: one})):
                raise NotAChainMapError(f"Map does not commute with d on {source.names[i]!r}")
        for i in range(source.dimension):
            for j in range(source.dimension):
                lhs = self.apply(source.basis_product(i, j))
                rhs = target.multiply(self.image(i), self.image(j))
                if lhs != rhs:
                    raise DGAlgebraError(
                        "multiplicativity",
                        f"Map is not multiplicative on ({source.names[i]}, {source.names[j]})"
                    )
        if source.unit is not None and target.unit is not None:
            if self.apply(source.unit) != target.unit:
                raise DGAlgebraError("unit", "Map is not unital")

    @classmethod
    def identity(cls, algebra: FiniteDGAlgebra) -> "DGAlgebraMap":
        return cls(algebra, algebra, {i: {i: algebra.field.one} for i in range(algebra.dimension)}, check=False)


def face_map(n: int, j: int, field: Field) -> DGAlgebraMap:
    """d_j : N*(Δⁿ) → N*(Δⁿ⁻¹), dual to the coface skipping vertex j"""
    if n < 1 or not 0 <= j <= n:
        raise InputError(f"Face d_{j} undefined on N*(Δ^{n})")
    source = structure_constants(n, field)
    target = structure_constants(n - 1, field)
    table: dict[int, Vector] = {}
    for i, label in enumerate(source.labels):
        if j in label:
            continue
        tau = tuple(v if v < j else v - 1 for v in label)
        table[i] = {target.label_index(tau): field.one}
    return DGAlgebraMap(source, target, table)


def degeneracy_map(n: int, j: int, field: Field) -> DGAlgebraMap:
    """
    s_j : N*(Δⁿ) → N*(Δⁿ⁺¹), dual to the codegeneracy collapsing j and j+1

    s_j φ_σ is the sum of φ_τ over non-degenerate τ with s^j τ = σ.
    """
    if n < 0 or not 0 <= j <= n:
        raise InputError(f"Degeneracy s_{j} undefined on N*(Δ^{n})")
    source = structure_constants(n, field)
    target = structure_constants(n + 1, field)
    table: dict[int, Vector] = {}
    for t, tau in enumerate(target.labels):
        image = tuple(v if v <= j else v - 1 for v in tau)
        if len(set(image)) != len(image):
            continue
        s = source.label_index(image)
        table.setdefault(s, {})[t] = field.one
    return DGAlgebraMap(source, target, table)


def interval_evaluations(field: Field) -> tuple[DGAlgebraMap, DGAlgebraMap]:
    """ev_0, ev_1 : N*(Δ¹) → 𝔽 = N*(Δ⁰), evaluation at the two endpoints"""
    return face_map(1, 1, field), face_map(1, 0, field)


def interval_unit(field: Field) -> DGAlgebraMap:
    """𝟏 : 𝔽 → N*(Δ¹), the constant map"""
    return degeneracy_map(0, 0, field)

# ============================================================
# Tensor Products
# ============================================================

def tensor_name(left: str, right: str) -> str:
    return f"{left}*{right}"


def tensor_dg_algebras(left: FiniteDGAlgebra, right: FiniteDGAlgebra) -> FiniteDGAlgebra:
    """
    B ⊗ C with d(b⊗c) = db⊗c + (-1)^|b| b⊗dc and
    (b⊗c)(b′⊗c′) = (-1)^{|c||b′|} bb′⊗cc′
    """
    if left.field != right.field:
        raise InputError("Tensor factors live over different fields")
    field = left.field
    one, minus = field.one, field(-1)
    m = right.dimension

    def pair(i: int, j: int) -> int:
        return i * m + j

    names, degrees = [], []
    for i in range(left.dimension):
        for j in range(m):
            names.append(tensor_name(left.names[i], right.names[j]))
            degrees.append(left.degrees[i] + right.degrees[j])

    differential: dict[int, Vector] = {}
    for i in range(left.dimension):
        sign = minus if left.degrees[i] % 2 else one
        for j in range(m):
            image: Vector = {}
            for k, c in left.differential.get(i, {}).items():
                vec_axpy(image, c, {pair(k, j): one})
            for k, c in right.differential.get(j, {}).items():
                vec_axpy(image, sign * c, {pair(i, k): one})
            differential[pair(i, j)] = image

    product: dict[tuple[int, int], Vector] = {}
    for (i, i2), left_image in left.product.items():
        for (j, j2), right_image in right.product.items():
            sign = minus if (right.degrees[j] * left.degrees[i2]) % 2 else one
            image: Vector = {}
            for k, a in left_image.items():
                for l, b in right_image.items():
                    vec_axpy(image, sign * a * b, {pair(k, l): one})
            product[(pair(i, j), pair(i2, j2))] = image

    unit = None
    if left.unit is not None and right.unit is not None:
        unit = {}
        for i, a in left.unit.items():
            for j, b in right.unit.items():
                vec_axpy(unit, a * b, {pair(i, j): one})
    return FiniteDGAlgebra(field, names, degrees, differential, product, unit)
