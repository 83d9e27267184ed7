"""
Verification suites

Each suite turns a seed into an ordered list of cases; a case is one
instance plus named checks. Checks return a bool (or a bool and details);
InvariantViolation counts as a failure, any other EngineError as an error.
Failing checks carry the instance document so `verify --reproducer` can
re-run the suite's checks on it alone.

Cases are rebuilt from (suite, seed, index) inside workers, so the process
pool never pickles algebras; the report is assembled in case order.
"""
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import partial
from itertools import product as cartesian
from typing import Any, Callable, Optional, Union

from pydantic import BaseModel
from structlog.contextvars import bound_contextvars

from .ainfty import DGAlgebraPresentation, InftyMorphism, ShiftedAInftyAlgebra, check_morphism, check_stasheff, compose
from .cochains import DGAlgebraMap, degeneracy_map, face_map, structure_constants
from .commutator import check_mc_naturality, commutator, mc_equality_check
from .config import settings
from .constructions import ProductAlgebra, check_tensor_functoriality, reparenthesization_agrees
from .defrep import ArtinLocalRing, classify_deformations, cyclic_group, lifts_are_mc, trivial_representation
from .documents import (
    Document,
    algebra_from_document,
    algebra_to_document,
    dga_from_document,
    dga_to_document,
    morphism_from_document,
    morphism_to_document,
)
from .exceptions import EngineError, InputError, InvariantViolation
from .generators import (
    Instance,
    acyclic_abelian,
    disguise,
    exterior_algebra,
    product_projection,
    random_ainfty,
    random_cone_morphism,
    random_dga,
    rational_instance,
    tensor_ideal,
    truncated_polynomial,
    z4_regression,
)
from .homotopy_ops import (
    StrictPullback,
    compare_splittings,
    decompose_acyclic_fibration,
    factorize,
    is_acyclic_fibration,
    is_weak_equivalence_morphism,
    right_inverse_acyclic_fibration,
)
from .linalg import Field, Vector, cohomology_basis, get_field
from .logging_config import get_logger
from .maurer_cartan import (
    check_gauge_action,
    curvature,
    enumerate_mc,
    pushforward_curvature_defect,
    quasi_inverse,
)
from .metrics import record_suite_check, record_suite_duration
from .models import CheckVerdict, InstanceDescriptor, Verdict, VerificationReport
from .nerve import (
    Nerve,
    NerveMorphism,
    compare_nerves,
    compatible_horns,
    fill_horn,
    horns,
    lift_horn,
    match_pi_n,
    mc2_check,
    pi0_matches_gauge,
    pi_n_oracle,
    pi_n_theorem,
)
from .transfer import TransferResult, transfer

logger = get_logger(__name__)

CheckResult = Union[bool, tuple[bool, dict[str, Any]]]


@dataclass
class Case:
    """One instance and the checks run on it"""

    descriptor: InstanceDescriptor
    checks: list[tuple[str, Callable[[], CheckResult]]]
    document: Optional[BaseModel] = None


@dataclass
class Suite:
    name: str
    default_count: Callable[[], int]
    case: Callable[[int, int], Case]
    from_document: Optional[Callable[[Document], Case]] = None
    document_kinds: list[str] = dc_field(default_factory=list)


def _instance_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _from_file(name: str, generator: str) -> InstanceDescriptor:
    return InstanceDescriptor(name=name, generator=generator)

# ============================================================
# Cochain Algebras
# ============================================================

_COCHAIN_CHARACTERISTICS = (2, 3, 0)
_COCHAIN_TOP = 4

# (n, kind, inputs, expected output) with names of N*(Δⁿ)
_COCHAIN_CONSTANTS: dict[int, list[tuple[str, tuple[str, ...], dict[str, int]]]] = {
    1: [
        ("d", ("phi0",), {"phi01": -1}),
        ("d", ("phi1",), {"phi01": 1}),
        ("d", ("phi01",), {}),
        ("cup", ("phi0", "phi01"), {"phi01": 1}),
        ("cup", ("phi01", "phi1"), {"phi01": 1}),
        ("cup", ("phi1", "phi01"), {}),
        ("cup", ("phi01", "phi0"), {}),
        ("cup", ("phi01", "phi01"), {}),
    ],
    2: [
        ("d", ("phi01",), {"phi012": 1}),
        ("d", ("phi02",), {"phi012": -1}),
        ("d", ("phi12",), {"phi012": 1}),
        ("cup", ("phi01", "phi12"), {"phi012": 1}),
        ("cup", ("phi12", "phi01"), {}),
        ("cup", ("phi02", "phi12"), {}),
        ("cup", ("phi0", "phi012"), {"phi012": 1}),
        ("cup", ("phi012", "phi2"), {"phi012": 1}),
    ],
}


def _cochain_laws(n: int, field: Field) -> bool:
    structure_constants(n, field).validate()
    return True


def _top_cochain(n: int, field: Field) -> CheckResult:
    B = structure_constants(n, field)
    top = {B.top: field.one}
    if n == 0:
        # φ_[0] is the unit of the ground field
        return B.multiply(top, top) == top
    return not B.d(top) and not B.multiply(top, top)


def _same(left: DGAlgebraMap, right: DGAlgebraMap) -> bool:
    return left.table == right.table


def _cosimplicial_identities(n: int, field: Field) -> CheckResult:
    """The simplicial identities for the face and degeneracy maps out of N*(Δⁿ)"""
    identity = DGAlgebraMap.identity(structure_constants(n, field))
    for j in range(n + 1):
        for i in range(j):
            if n >= 2 and not _same(
                face_map(n - 1, i, field).compose(face_map(n, j, field)),
                face_map(n - 1, j - 1, field).compose(face_map(n, i, field)),
            ):
                return False, {"identity": "d_i d_j", "i": i, "j": j}
    for j in range(n + 1):
        s = degeneracy_map(n, j, field)
        for i in range(n + 2):
            composite = face_map(n + 1, i, field).compose(s)
            if i in (j, j + 1):
                expected = identity
            elif i < j:
                expected = degeneracy_map(n - 1, j - 1, field).compose(face_map(n, i, field))
            else:
                expected = degeneracy_map(n - 1, j, field).compose(face_map(n, i - 1, field))
            if not _same(composite, expected):
                return False, {"identity": "d_i s_j", "i": i, "j": j}
        for i in range(j + 1):
            if not _same(
                degeneracy_map(n + 1, i, field).compose(s),
                degeneracy_map(n + 1, j + 1, field).compose(degeneracy_map(n, i, field)),
            ):
                return False, {"identity": "s_i s_j", "i": i, "j": j}
    return True


def _cochain_constants(n: int, field: Field) -> CheckResult:
    B = structure_constants(n, field)
    for kind, inputs, expected in _COCHAIN_CONSTANTS[n]:
        vectors = [{B.index(name): field.one} for name in inputs]
        actual = B.d(vectors[0]) if kind == "d" else B.multiply(*vectors)
        wanted = {B.index(name): field(c) for name, c in expected.items()}
        if actual != wanted:
            return False, {"entry": [kind, *inputs]}
    return True


def _cochain_case(seed: int, index: int) -> Case:
    n, position = divmod(index, len(_COCHAIN_CHARACTERISTICS))
    field = get_field(_COCHAIN_CHARACTERISTICS[position])
    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("dga-laws", lambda: _cochain_laws(n, field)),
        ("top-cochain", lambda: _top_cochain(n, field)),
    ]
    if n < _COCHAIN_TOP:
        checks.append(("simplicial-identities", lambda: _cosimplicial_identities(n, field)))
    if n in _COCHAIN_CONSTANTS:
        checks.append(("structure-constants", lambda: _cochain_constants(n, field)))
    descriptor = InstanceDescriptor(
        name=f"N*(Δ^{n}) over {field}",
        generator="cochains",
        parameters={"n": n, "characteristic": field.characteristic},
    )
    return Case(descriptor, checks)

# ============================================================
# Stasheff & Morphisms
# ============================================================

def _random_degree_zero(rng: random.Random, A: ShiftedAInftyAlgebra) -> Vector:
    field = A.field
    result: Vector = {}
    for i in A.space.indices(degree=0):
        if field.is_finite:
            c = rng.choice(field.elements())
        else:
            c = field(rng.randint(-3, 3))
        if c:
            result[i] = c
    return result


def _stasheff_checks(A: ShiftedAInftyAlgebra, seed: int) -> list[tuple[str, Callable[[], CheckResult]]]:
    rng = random.Random(f"stasheff-checks:{seed}")
    _, F = disguise(rng, A)
    samples = [_random_degree_zero(rng, A) for _ in range(4)]
    f = face_map(2, 1, A.field)
    g = face_map(1, 0, A.field)

    def transport() -> CheckResult:
        return check_stasheff(F.target) and check_morphism(F)

    def curvature_identity() -> CheckResult:
        for a in samples:
            defect = pushforward_curvature_defect(F, a)
            if defect:
                return False, {"element": A.space.format_vector(a)}
        return True

    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("stasheff", lambda: check_stasheff(A)),
        ("transport", transport),
        ("curvature-pushforward", curvature_identity),
        ("tensor-functoriality", lambda: check_tensor_functoriality(A, f, g)),
    ]
    if A.dimension <= 3:
        B = structure_constants(1, A.field)
        checks.append(("reparenthesization", lambda: reparenthesization_agrees(A, B, B)))
    return checks


def _stasheff_case(seed: int, index: int) -> Case:
    instance = random_ainfty(_instance_seed(seed, index), max_dimension=4)
    A = instance.value
    return Case(instance.descriptor, _stasheff_checks(A, _instance_seed(seed, index)), algebra_to_document(A))


def _stasheff_document(document: Document) -> Case:
    A = algebra_from_document(document)
    return Case(_from_file(A.label or "document", "file"), _stasheff_checks(A, 0), document)

# ============================================================
# Homotopy Groups
# ============================================================

def _pi_agrees(A: ShiftedAInftyAlgebra, n: int, basepoint: Optional[Vector] = None) -> CheckResult:
    theorem = pi_n_theorem(A, n, basepoint)
    oracle = pi_n_oracle(A, n, basepoint)
    mapping = match_pi_n(theorem, oracle)
    return True, {"order": theorem.order, "mapping": mapping}


def _z4_group(A: ShiftedAInftyAlgebra) -> CheckResult:
    G = pi_n_theorem(A, 1)
    return G.order == 4 and G.is_cyclic, {"order_profile": G.order_profile()}


def _pi_checks(A: ShiftedAInftyAlgebra) -> list[tuple[str, Callable[[], CheckResult]]]:
    checks: list[tuple[str, Callable[[], CheckResult]]] = [("pi1", lambda: _pi_agrees(A, 1))]
    vertices = [v for v in enumerate_mc(A) if v][:2]
    if vertices:
        checks.append(("pi1-basepoints", lambda: all(_pi_agrees(A, 1, v) for v in vertices)))
    if A.is_abelian:
        checks.append(("pi1-abelian", lambda: pi_n_theorem(A, 1).is_abelian))
    if cohomology_basis(A.complex, -2).dimension:
        checks.append(("pi2", lambda: _pi_agrees(A, 2)))
        checks.append(("pi2-abelian", lambda: pi_n_oracle(A, 2).is_abelian))
    return checks


_PI2_FAMILIES = 5


def _pi2_instance(seed: int, index: int) -> Instance:
    """Tiny algebras with H⁻² ≠ 0"""
    field = get_field(2 if index % 2 else 3)
    if index % 3 == 0:
        C = tensor_ideal(exterior_algebra(field, -1), 2)
        family = "exterior"
    else:
        C = truncated_polynomial(field, 2 + index % 2, -1)
        family = "polynomial"
    descriptor = InstanceDescriptor(
        name=f"pi2-{family}-{index}",
        generator=f"pi2/{family}",
        seed=seed,
        parameters={"characteristic": field.characteristic, "label": C.label},
    )
    return Instance(descriptor, C.shifted)


def _pi_case(seed: int, index: int) -> Case:
    if index == 0:
        A = z4_regression().shifted
        descriptor = InstanceDescriptor(name="z4-regression", generator="regression", parameters={"label": A.label})
        checks = _pi_checks(A)
        checks.append(("z4-cyclic", lambda: _z4_group(A)))
        return Case(descriptor, checks, algebra_to_document(A))
    if index <= _PI2_FAMILIES:
        instance = _pi2_instance(seed, index)
    else:
        instance = random_ainfty(_instance_seed(seed, index), max_dimension=3)
    A = instance.value
    return Case(instance.descriptor, _pi_checks(A), algebra_to_document(A))


def _pi_document(document: Document) -> Case:
    A = algebra_from_document(document)
    return Case(_from_file(A.label or "document", "file"), _pi_checks(A), document)

# ============================================================
# Kan Property
# ============================================================

_HORN_ENUMERATION_LIMIT = 400


def _fill_all(nerve: Nerve, n: int) -> CheckResult:
    filled = 0
    for k in range(n + 1):
        lower = len(nerve.simplices(n - 1))
        if lower ** n <= _HORN_ENUMERATION_LIMIT:
            candidates = compatible_horns(nerve, n, k)
        else:
            candidates = horns(nerve, n, k)
        for horn in candidates:
            fill_horn(nerve, horn, n, k)
            filled += 1
    return True, {"filled": filled}


def _closed_form_fillers(nerve: Nerve) -> CheckResult:
    spherical = nerve.spherical_simplices(1)[:4]
    for x0, x2 in cartesian(spherical, repeat=2):
        filler = fill_horn(nerve, {0: x0, 2: x2}, 2, 1)
        w0, w2 = nerve.top_component(x0), nerve.top_component(x2)
        w1 = nerve.top_component(nerve.face(1, filler))
        if not mc2_check(nerve.A, w0, w1, w2, nerve.top_component(filler), nerve=nerve):
            return False, {"w0": nerve.A.space.format_vector(w0), "w2": nerve.A.space.format_vector(w2)}
    return True


def _lifts(A: ShiftedAInftyAlgebra) -> CheckResult:
    K = acyclic_abelian(A.field, -1, 1, A.nilpotency)
    phi = ProductAlgebra(A, K).projection(0)
    source, target = Nerve(phi.source), Nerve(phi.target)
    push = NerveMorphism(phi, source, target)
    for x in source.simplices(1)[:6]:
        for k in (0, 1):
            horn = {j: source.face(j, x) for j in (0, 1) if j != k}
            lifted = lift_horn(phi, horn, k, push(x), source_nerve=source, target_nerve=target)
            if push(lifted) != push(x):
                return False
    return True


def _kan_checks(A: ShiftedAInftyAlgebra) -> list[tuple[str, Callable[[], CheckResult]]]:
    nerve = Nerve(A)
    return [
        ("simplicial-identities", lambda: nerve.check_simplicial_identities(0) and nerve.check_simplicial_identities(1)),
        ("horns-1", lambda: _fill_all(nerve, 1)),
        ("horns-2", lambda: _fill_all(nerve, 2)),
        ("closed-form-filler", lambda: _closed_form_fillers(nerve)),
        ("fibration-lifts", lambda: _lifts(A)),
    ]


def _kan_case(seed: int, index: int) -> Case:
    instance = random_ainfty(_instance_seed(seed, index), get_field(2), max_dimension=2)
    A = instance.value
    return Case(instance.descriptor, _kan_checks(A), algebra_to_document(A))


def _kan_document(document: Document) -> Case:
    A = algebra_from_document(document)
    return Case(_from_file(A.label or "document", "file"), _kan_checks(A), document)

# ============================================================
# Gauge Action
# ============================================================

def _gauge_samples(C: DGAlgebraPresentation) -> list[tuple[Vector, Vector, Vector]]:
    field = C.field
    elements = enumerate_mc(C.shifted)[:3]
    parameters = [{}] + [{i: field.one} for i in C.space.indices(degree=0)][:3]
    return [(g, h, x) for x in elements for g in parameters for h in parameters]


def _quasi_inverses(C: DGAlgebraPresentation) -> bool:
    for i in C.space.indices(degree=0):
        quasi_inverse(C.multiply, {i: C.field.one})
    return True


def _gauge_checks(C: DGAlgebraPresentation) -> list[tuple[str, Callable[[], CheckResult]]]:
    return [
        ("quasi-inverse", lambda: _quasi_inverses(C)),
        ("gauge-action", lambda: check_gauge_action(C, _gauge_samples(C))),
        ("gauge-pi0", lambda: pi0_matches_gauge(C)),
    ]


def _gauge_case(seed: int, index: int) -> Case:
    instance = random_dga(_instance_seed(seed, index), get_field(2), max_dimension=4)
    C = instance.value
    return Case(instance.descriptor, _gauge_checks(C), dga_to_document(C))


def _gauge_document(document: Document) -> Case:
    C = dga_from_document(document)
    return Case(_from_file(C.label or "document", "file"), _gauge_checks(C), document)

# ============================================================
# Commutator (characteristic 0)
# ============================================================

def _small_mc_points(A: ShiftedAInftyAlgebra, limit: int = 3) -> list[Vector]:
    """MC elements among small integer combinations of degree-0 basis vectors"""
    field = A.field
    unknowns = A.space.indices(degree=0)[:limit]
    found = []
    for values in cartesian((0, 1, -1, 2), repeat=len(unknowns)):
        a = {i: field(c) for i, c in zip(unknowns, values) if c}
        if not curvature(A, a):
            found.append(a)
    return found


def _mc_naturality(A: ShiftedAInftyAlgebra) -> CheckResult:
    P = ProductAlgebra(A, A)
    points = _small_mc_points(A)[:4]
    for a, b in cartesian(points, repeat=2):
        for side in (0, 1):
            if not check_mc_naturality(P.projection(side), P.join(a, b)):
                return False
    return True, {"points": len(points)}


def _mcnat_checks(A: ShiftedAInftyAlgebra, seed: int) -> list[tuple[str, Callable[[], CheckResult]]]:
    return [
        ("commutator-jacobi", lambda: commutator(A, check=True) is not None),
        ("mc-equality", lambda: mc_equality_check(A, seed=seed)),
        ("mc-naturality", lambda: _mc_naturality(A)),
    ]


def _mcnat_case(seed: int, index: int) -> Case:
    instance = rational_instance(_instance_seed(seed, index))
    A = instance.value
    return Case(instance.descriptor, _mcnat_checks(A, seed), algebra_to_document(A))


def _mcnat_document(document: Document) -> Case:
    A = algebra_from_document(document)
    return Case(_from_file(A.label or "document", "file"), _mcnat_checks(A, 0), document)

# ============================================================
# Transfer & Deformations
# ============================================================

def _transfer_checks(A: ShiftedAInftyAlgebra) -> list[tuple[str, Callable[[], CheckResult]]]:
    built: dict[str, TransferResult] = {}

    def transferred() -> TransferResult:
        if "value" not in built:
            built["value"] = transfer(A)
        return built["value"]

    def run() -> CheckResult:
        return True, {"cohomology_dimension": transferred().algebra.dimension}

    return [
        ("transfer", run),
        ("transferred-stasheff", lambda: check_stasheff(transferred().algebra)),
        ("transfer-morphism", lambda: check_morphism(transferred().morphism)),
        ("transfer-weak-equivalence", lambda: transferred().is_weak_equivalence),
    ]


def _cup_square(order: int) -> CheckResult:
    """x⌣x ≠ 0 on the transferred H¹(Z/2; 𝔽₂)⊗t"""
    field = get_field(2)
    result = classify_deformations(trivial_representation(cyclic_group(2), field), ArtinLocalRing(field, order))
    H = result.transfer.algebra
    candidates = H.space.indices(degree=0, weight=1)
    product = H.operation(2)
    squares = [product({i: field.one}, {i: field.one}) for i in candidates]
    return any(squares), {"candidates": len(candidates)}


def _classification(order: int, expected: Optional[int]) -> CheckResult:
    field = get_field(2)
    rho = trivial_representation(cyclic_group(2), field)
    result = classify_deformations(rho, ArtinLocalRing(field, order))
    counts = list(result.counts)
    ok = result.agrees and (expected is None or counts[0] == expected)
    return ok, {"counts": counts}


def _lift_correspondence(order: int) -> CheckResult:
    field = get_field(2)
    result = classify_deformations(trivial_representation(cyclic_group(2), field), ArtinLocalRing(field, order))
    CR = result.complex
    elements = [v for members in result.nerve_classes for v in members]
    return lifts_are_mc(CR, elements)


def _transfer_instance(seed: int, index: int) -> Instance:
    rng = random.Random(f"transfer:{seed}:{index}")
    field = get_field(rng.choice([2, 3, 0]))
    if index % 2:
        C = tensor_ideal(structure_constants(1, field), rng.choice([2, 3]))
        A = C.shifted
        family = "cochains"
    else:
        base = truncated_polynomial(field, rng.choice([2, 3]), rng.choice([0, 1, -1])).shifted
        K = acyclic_abelian(field, rng.choice([-1, 0]), rng.randint(1, base.nilpotency - 1), base.nilpotency)
        A = ProductAlgebra(base, K)
        family = "product"
    descriptor = InstanceDescriptor(
        name=f"transfer-{family}-{index}",
        generator=f"transfer/{family}",
        seed=seed,
        parameters={"characteristic": field.characteristic},
    )
    return Instance(descriptor, A)


def _transfer_case(seed: int, index: int) -> Case:
    if index < 2:
        order = 2 + index
        descriptor = InstanceDescriptor(
            name=f"Z/2 trivial over F2[t]/(t^{order})",
            generator="deformations",
            parameters={"group": "Z/2", "ring": f"t^{order}"},
        )
        checks: list[tuple[str, Callable[[], CheckResult]]] = [
            ("classification", lambda: _classification(order, 2 if order == 2 else None)),
            ("lift-correspondence", lambda: _lift_correspondence(order)),
        ]
        if order == 3:
            checks.append(("cup-square", lambda: _cup_square(order)))
        return Case(descriptor, checks)
    instance = _transfer_instance(seed, index)
    A = instance.value
    return Case(instance.descriptor, _transfer_checks(A), algebra_to_document(A))


def _transfer_document(document: Document) -> Case:
    A = algebra_from_document(document)
    return Case(_from_file(A.label or "document", "file"), _transfer_checks(A), document)

# ============================================================
# Goldman-Millson
# ============================================================

def _gm_checks(phi: InftyMorphism) -> list[tuple[str, Callable[[], CheckResult]]]:
    def comparison() -> CheckResult:
        result = compare_nerves(phi)
        return result.holds, {"components": list(result.components), "pi0_bijective": result.pi0_bijective}

    return [
        ("weak-equivalence", lambda: is_weak_equivalence_morphism(phi)),
        ("nerve-homotopy-equivalence", comparison),
    ]


def _gm_morphism(seed: int, index: int) -> tuple[InstanceDescriptor, InftyMorphism]:
    instance_seed = _instance_seed(seed, index)
    rng = random.Random(f"gm:{instance_seed}")
    field = get_field(2)
    way = ("projection", "right-inverse", "transfer")[index % 3]
    if way == "transfer":
        if rng.random() < 0.5:
            A = tensor_ideal(structure_constants(1, field), 2).shifted
        else:
            base = truncated_polynomial(field, 3, rng.choice([0, 1])).shifted
            A = ProductAlgebra(base, acyclic_abelian(field, -1, rng.randint(1, 2), 3))
        phi = transfer(A).morphism
        parameters: dict[str, Any] = {"source_dimension": A.dimension}
    else:
        instance = random_ainfty(instance_seed, field, max_dimension=2)
        phi = product_projection(instance_seed, instance.value)
        if way == "right-inverse":
            phi = right_inverse_acyclic_fibration(phi)
        parameters = {"base": instance.descriptor.generator}
    descriptor = InstanceDescriptor(
        name=f"gm-{way}-{index}",
        generator=f"gm/{way}",
        seed=instance_seed,
        parameters=parameters,
    )
    return descriptor, phi


def _gm_case(seed: int, index: int) -> Case:
    descriptor, phi = _gm_morphism(seed, index)
    return Case(descriptor, _gm_checks(phi), morphism_to_document(phi))


def _gm_document(document: Document) -> Case:
    phi = morphism_from_document(document)
    return Case(_from_file("morphism", "file"), _gm_checks(phi), document)

# ============================================================
# Homotopy Operations
# ============================================================

def _homotopy_checks(phi: InftyMorphism, seed: int) -> list[tuple[str, Callable[[], CheckResult]]]:
    target = phi.target
    K = acyclic_abelian(target.field, 0, 1, target.nilpotency)
    strict = ProductAlgebra(target, K).projection(0)
    built: dict[str, StrictPullback] = {}

    def pullback() -> StrictPullback:
        if "value" not in built:
            built["value"] = StrictPullback(strict, phi)
        return built["value"]

    def mediating() -> CheckResult:
        pb = pullback()
        M0 = random_cone_morphism(seed, pb.algebra)
        M = pb.mediating(compose(pb.first, M0), compose(pb.second, M0))
        return M.same_as(M0) and pb.mediating_is_unique()

    def factorization() -> CheckResult:
        result = factorize(phi)
        weak = is_weak_equivalence_morphism(phi)
        return result.fibration_is_acyclic == weak, {"weak_equivalence": weak}

    checks: list[tuple[str, Callable[[], CheckResult]]] = []
    if is_acyclic_fibration(phi):
        checks += [
            ("decomposition", lambda: decompose_acyclic_fibration(phi) is not None),
            ("right-inverse", lambda: right_inverse_acyclic_fibration(phi) is not None),
        ]
    checks += [
        ("pullback-conjugation", lambda: pullback().check_conjugation()),
        ("pullback-stasheff", lambda: check_stasheff(pullback().conjugated) and check_stasheff(pullback().algebra)),
        ("pullback-mediating", mediating),
        ("pullback-splitting", lambda: compare_splittings(strict, phi)),
        ("factorization", factorization),
    ]
    return checks


def _homotopy_case(seed: int, index: int) -> Case:
    instance_seed = _instance_seed(seed, index)
    instance = random_ainfty(instance_seed, max_dimension=3)
    phi = product_projection(instance_seed, instance.value)
    descriptor = InstanceDescriptor(
        name=f"homotopy-ops-{index}",
        generator="homotopy-ops/projection",
        seed=instance_seed,
        parameters={"base": instance.descriptor.generator, **instance.descriptor.parameters},
    )
    return Case(descriptor, _homotopy_checks(phi, instance_seed), morphism_to_document(phi))


def _homotopy_document(document: Document) -> Case:
    phi = morphism_from_document(document)
    return Case(_from_file("morphism", "file"), _homotopy_checks(phi, 0), document)

# ============================================================
# Registry
# ============================================================

SUITES: dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite("cochains", lambda: (_COCHAIN_TOP + 1) * len(_COCHAIN_CHARACTERISTICS), _cochain_case),
        Suite("stasheff", lambda: settings.suite_random_instances, _stasheff_case, _stasheff_document, ["ainfty", "dga"]),
        Suite("gm", lambda: 12, _gm_case, _gm_document, ["morphism"]),
        Suite(
            "pi",
            lambda: 1 + _PI2_FAMILIES + settings.suite_random_instances,
            _pi_case, _pi_document, ["ainfty", "dga"],
        ),
        Suite("kan", lambda: 10, _kan_case, _kan_document, ["ainfty", "dga"]),
        Suite("gauge", lambda: max(20, settings.suite_random_instances), _gauge_case, _gauge_document, ["dga"]),
        Suite("mcnat", lambda: 10, _mcnat_case, _mcnat_document, ["ainfty", "dga"]),
        Suite("transfer", lambda: 8, _transfer_case, _transfer_document, ["ainfty", "dga"]),
        Suite("homotopy-ops", lambda: 10, _homotopy_case, _homotopy_document, ["morphism"]),
    )
}


def get_suite(name: str) -> Suite:
    suite = SUITES.get(name)
    if suite is None:
        raise InputError(f"Unknown suite {name!r}", details={"suites": sorted(SUITES)})
    return suite

# ============================================================
# Running
# ============================================================

def _run_check(suite: str, case: Case, name: str, check: Callable[[], CheckResult]) -> CheckVerdict:
    details: dict[str, Any] = {}
    try:
        outcome = check()
        if isinstance(outcome, tuple):
            passed, details = outcome
        else:
            passed = bool(outcome)
        verdict = Verdict.PASS if passed else Verdict.FAIL
    except InvariantViolation as e:
        verdict, details = Verdict.FAIL, e.to_dict()
    except EngineError as e:
        verdict, details = Verdict.ERROR, e.to_dict()
    record_suite_check(suite, verdict == Verdict.PASS)
    reproducer = None
    if verdict != Verdict.PASS:
        logger.warning("suite_check_failed", check=name, instance=case.descriptor.name, verdict=verdict.value)
        if case.document is not None:
            reproducer = case.document.model_dump(mode="json")
    return CheckVerdict(
        check=name,
        instance=case.descriptor.name,
        verdict=verdict,
        details=details,
        reproducer=reproducer,
    )


def _run_case(case: Case, suite: str) -> tuple[InstanceDescriptor, list[CheckVerdict]]:
    return case.descriptor, [_run_check(suite, case, name, check) for name, check in case.checks]


def _reraise(error: EngineError) -> CheckResult:
    raise error


def _run_indexed_case(name: str, seed: int, index: int) -> tuple[dict, list[dict]]:
    """Process-pool entry point: rebuilds the case and returns plain data"""
    suite = get_suite(name)
    try:
        case = suite.case(seed, index)
    except EngineError as e:
        logger.error("suite_instance_failed", index=index, error=e.message)
        descriptor = InstanceDescriptor(name=f"{name}-{index}", generator=name, seed=seed)
        case = Case(descriptor, [("instance", partial(_reraise, e))])
    descriptor, verdicts = _run_case(case, name)
    return descriptor.model_dump(mode="json"), [v.model_dump(mode="json") for v in verdicts]


def run_suite(
    name: str,
    seed: int = 0,
    instances: Optional[int] = None,
    *,
    workers: Optional[int] = None,
) -> VerificationReport:
    """Run a suite; deterministic given the seed apart from duration_seconds"""
    suite = get_suite(name)
    count = suite.default_count() if instances is None else instances
    workers = settings.suite_workers if workers is None else workers
    started = time.perf_counter()
    with bound_contextvars(suite=name, seed=seed):
        logger.info("suite_started", cases=count, workers=workers)
        if workers > 1 and count > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_indexed_case, [name] * count, [seed] * count, range(count)))
        else:
            results = [_run_indexed_case(name, seed, index) for index in range(count)]
        report = VerificationReport(
            suite=name,
            seed=seed,
            app_version=settings.app_version,
            instances=[InstanceDescriptor.model_validate(d) for d, _ in results],
            checks=[CheckVerdict.model_validate(v) for _, verdicts in results for v in verdicts],
        )
        report.duration_seconds = round(time.perf_counter() - started, 3)
        record_suite_duration(name, report.duration_seconds)
        logger.info("suite_finished", passed=report.passed, **report.summary())
    return report


def run_reproducer(name: str, document: Document) -> VerificationReport:
    """Re-run one suite's checks on a single instance document"""
    suite = get_suite(name)
    if suite.from_document is None:
        raise InputError(f"Suite {name!r} has no document form")
    kind = getattr(document, "kind", None)
    kind = getattr(kind, "value", kind)
    if kind not in suite.document_kinds:
        raise InputError(f"Suite {name!r} expects a {' or '.join(suite.document_kinds)} document, got {kind!r}")
    started = time.perf_counter()
    with bound_contextvars(suite=name, seed="reproducer"):
        case = suite.from_document(document)
        descriptor, verdicts = _run_case(case, name)
    return VerificationReport(
        suite=name,
        seed=0,
        app_version=settings.app_version,
        instances=[descriptor],
        checks=verdicts,
        duration_seconds=round(time.perf_counter() - started, 3),
    )
