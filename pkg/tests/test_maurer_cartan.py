"""
Tests for Maurer-Cartan sets, pushforwards and the gauge action

Tests cover:
- Curvature and the layered MC solver against exhaustive search
- Symbolic MC varieties over QQ
- Curvature identity for pushforwards along ∞-morphisms
- Quasi-inverses and gauge orbits of dg algebras
- Search caps and field restrictions
"""
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from src.exceptions import (
    CharacteristicError,
    DegreeError,
    FiniteFieldRequiredError,
    InfiniteSolutionSetError,
    NotMaurerCartanError,
    SearchCapExceeded,
)
from src.generators import (
    disguise,
    exterior_algebra,
    random_ainfty,
    tensor_ideal,
    truncated_polynomial,
    upper_triangular,
)
from src.linalg import get_field, vector_key
from src.maurer_cartan import (
    certify,
    check_gauge_action,
    curvature,
    enumerate_mc,
    gauge_action,
    gauge_orbits,
    is_maurer_cartan,
    naive_enumerate_mc,
    pushforward,
    pushforward_curvature_defect,
    quasi_inverse,
    quasi_multiply,
    solve_mc_symbolic,
    twisted_differential,
)


def _staircase(field):
    """Shifted E01, E12 in degree 0; curv(aE01 + bE12) = ab·E02"""
    return upper_triangular(field, 3, [0, 1, 2]).shifted


def _gauge_example(field):
    """E01 in C⁰ acts on C¹ = ⟨E02, E12⟩ by shearing E12 toward E02"""
    return upper_triangular(field, 3, [0, 0, 1])


# ============================================================
# Test Data Strategies
# ============================================================

@st.composite
def degree_zero_element(draw, A):
    """Arbitrary (not necessarily MC) degree-0 vector of A"""
    elements = A.field.elements()
    vector = {}
    for i in A.space.indices(degree=0):
        c = draw(st.sampled_from(elements))
        if c:
            vector[i] = c
    return vector


# ============================================================
# Test: MC Sets
# ============================================================

class TestMaurerCartanSets:

    @pytest.mark.unit
    def test_staircase_mc_set(self, f3):
        A = _staircase(f3)
        e01, e12 = A.space.index("E01"), A.space.index("E12")
        solutions = enumerate_mc(A)
        assert len(solutions) == 5
        assert all(not (e01 in x and e12 in x) for x in solutions)
        assert not is_maurer_cartan(A, {e01: f3.one, e12: f3.one})

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_layered_solver_matches_exhaustive_search(self, seed):
        A = random_ainfty(seed, get_field(2), max_dimension=4).value
        layered = [vector_key(A.field, x) for x in enumerate_mc(A)]
        naive = [vector_key(A.field, x) for x in naive_enumerate_mc(A)]
        assert layered == naive

    @pytest.mark.unit
    def test_curvature_requires_degree_zero(self, f3):
        A = _staircase(f3)
        with pytest.raises(DegreeError):
            curvature(A, {A.space.index("E02"): f3.one})

    @pytest.mark.unit
    def test_certify_rejects_curved_elements(self, f3):
        A = _staircase(f3)
        with pytest.raises(NotMaurerCartanError):
            certify(A, {A.space.index("E01"): f3.one, A.space.index("E12"): f3.one})
        assert certify(A, {A.space.index("E01"): f3(2)}).format() == {"E01": "2"}

    @pytest.mark.unit
    def test_leaf_cap(self, f3):
        with pytest.raises(SearchCapExceeded):
            enumerate_mc(_staircase(f3), leaf_limit=2)

    @pytest.mark.unit
    def test_exhaustive_search_needs_finite_field(self, qq):
        with pytest.raises(FiniteFieldRequiredError):
            naive_enumerate_mc(_staircase(qq))

    @pytest.mark.unit
    def test_positive_dimensional_set_over_rationals(self, qq):
        with pytest.raises(InfiniteSolutionSetError):
            enumerate_mc(_staircase(qq))


# ============================================================
# Test: Symbolic MC Varieties
# ============================================================

class TestSymbolic:

    @pytest.mark.unit
    def test_staircase_variety(self, qq):
        variety = solve_mc_symbolic(_staircase(qq))
        a, b = variety.parameters
        assert {str(a), str(b)} == {"t_E01", "t_E12"}
        assert len(variety.constraints) == 1
        (constraint,) = variety.constraints
        assert sympy.expand(constraint + a * b) == 0 or sympy.expand(constraint - a * b) == 0
        assert not variety.is_point

    @pytest.mark.unit
    def test_rigid_algebra_has_a_single_point(self, qq):
        """tℚ[t]/(t³) in degree 0 shifts to degree -1: only the zero element"""
        variety = solve_mc_symbolic(truncated_polynomial(qq, 3, 0).shifted)
        assert variety.is_point
        assert variety.point == {}

    @pytest.mark.unit
    def test_symbolic_solve_rejects_finite_fields(self, f2):
        with pytest.raises(CharacteristicError):
            solve_mc_symbolic(_staircase(f2))


# ============================================================
# Test: Pushforward
# ============================================================

class TestPushforward:

    @pytest.mark.property
    @given(data=st.data(), seed=st.integers(0, 1000))
    def test_curvature_identity_for_any_degree_zero_element(self, data, seed):
        A = _staircase(get_field(3))
        _, F = disguise(random.Random(seed), A, density=0.7)
        a = data.draw(degree_zero_element(A))
        assert pushforward_curvature_defect(F, a) == {}

    @pytest.mark.unit
    def test_pushforward_lands_in_mc(self, f3):
        A = _staircase(f3)
        _, F = disguise(random.Random(5), A, density=0.9)
        for x in enumerate_mc(A):
            assert is_maurer_cartan(F.target, pushforward(F, x))


# ============================================================
# Test: Quasi-Inverses and Gauge Action
# ============================================================

class TestGauge:

    @pytest.mark.unit
    def test_quasi_inverse_of_generator(self, f3):
        C = truncated_polynomial(f3, 4, 0)
        t, t2, t3 = (C.space.index(n) for n in ("t", "t2", "t3"))
        inverse = quasi_inverse(C.multiply, {t: f3.one})
        assert inverse == {t: f3(-1), t2: f3.one, t3: f3(-1)}
        assert quasi_multiply(C.multiply, {t: f3.one}, inverse) == {}

    @pytest.mark.unit
    def test_twisted_differential_is_commutator(self, f3):
        C = _gauge_example(f3)
        e01, e02, e12 = (C.space.index(n) for n in ("E01", "E02", "E12"))
        assert twisted_differential(C, {e12: f3.one}, {e01: f3.one}) == {e02: f3(-1)}

    @pytest.mark.unit
    def test_gauge_shear(self, f3):
        C = _gauge_example(f3)
        e01, e02, e12 = (C.space.index(n) for n in ("E01", "E02", "E12"))
        assert gauge_action(C, {e01: f3.one}, {e12: f3.one}) == {e12: f3.one, e02: f3.one}

    @pytest.mark.unit
    def test_gauge_orbits(self, f3):
        orbits = gauge_orbits(_gauge_example(f3))
        assert sum(len(orbit) for orbit in orbits) == 9
        assert sorted(len(orbit) for orbit in orbits) == [1, 1, 1, 3, 3]

    @pytest.mark.unit
    def test_commutative_coefficients_act_trivially(self, f2):
        C = tensor_ideal(exterior_algebra(f2, 1), 3)
        orbits = gauge_orbits(C)
        assert len(orbits) == 4
        assert all(len(orbit) == 1 for orbit in orbits)

    @pytest.mark.unit
    def test_action_is_a_group_action(self, f3):
        C = _gauge_example(f3)
        e01, e02, e12 = (C.space.index(n) for n in ("E01", "E02", "E12"))
        samples = [
            ({e01: f3.one}, {e01: f3(2)}, {e12: f3.one}),
            ({e01: f3(2)}, {e01: f3(2)}, {e12: f3(2), e02: f3.one}),
            ({}, {e01: f3.one}, {e02: f3.one}),
        ]
        assert check_gauge_action(C, samples)

    @pytest.mark.unit
    def test_gauge_degrees_checked(self, f3):
        C = _gauge_example(f3)
        e02, e12 = C.space.index("E02"), C.space.index("E12")
        with pytest.raises(DegreeError):
            gauge_action(C, {e02: f3.one}, {e12: f3.one})
