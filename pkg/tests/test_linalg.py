"""
Unit and property tests for exact linear algebra

Tests cover:
- Scalar parsing and formatting over GF(p) and QQ
- Filtration invariants on spaces and maps
- Elimination, kernels and cohomology
- Weak equivalence and fibration tests
"""
import pytest
from hypothesis import given, strategies as st

from src.exceptions import (
    DegreeError,
    FiltrationError,
    InputError,
    NotAComplexError,
    NotAcyclicFibrationError,
)
from src.linalg import (
    BasisVector,
    ChainMap,
    FilteredComplex,
    FilteredGradedSpace,
    FilteredLinearMap,
    LinearSolver,
    cohomology_basis,
    contract_acyclic_fibration,
    filtered_section,
    get_field,
    is_fibration,
    is_weak_equivalence,
    vec_add,
    vec_scale,
    vec_sub,
)


# ============================================================
# Test Data Strategies
# ============================================================

@st.composite
def field_strategy(draw):
    return get_field(draw(st.sampled_from([2, 3, 5, 0])))


@st.composite
def vector_strategy(draw, field, size=4):
    """Sparse vector with small coefficients on indices 0..size-1"""
    entries = draw(st.dictionaries(st.integers(0, size - 1), st.integers(-3, 3), max_size=size))
    return {i: field(c) for i, c in entries.items() if field(c)}


def _two_term(field, weight_x=1, weight_y=1, nilpotency=3):
    """x ↦ y, |x| = 0"""
    space = FilteredGradedSpace(
        field, [BasisVector("x", 0, weight_x), BasisVector("y", 1, weight_y)], nilpotency
    )
    d = FilteredLinearMap(space, space, {0: {1: field.one}}, 1)
    return FilteredComplex(space, d)


# ============================================================
# Test: Scalars
# ============================================================

class TestField:
    """Exact scalars"""

    @pytest.mark.unit
    def test_rational_round_trip(self, qq):
        assert qq.format(qq.parse("-3/6")) == "-1/2"
        assert qq.format(qq("4")) == "4"

    @pytest.mark.unit
    def test_finite_field_canonical_representatives(self, f3):
        assert f3.format(f3.parse("-1")) == "2"
        assert f3.format(f3.parse("1/2")) == "2"
        assert [f3.format(c) for c in f3.elements()] == ["0", "1", "2"]

    @pytest.mark.unit
    def test_non_invertible_denominator_rejected(self, f3):
        with pytest.raises(InputError):
            f3.parse("1/3")

    @pytest.mark.unit
    def test_non_prime_characteristic_rejected(self):
        with pytest.raises(InputError):
            get_field(4)

    @pytest.mark.unit
    def test_malformed_scalar_rejected(self, qq):
        with pytest.raises(InputError):
            qq.parse("0.5")

    @pytest.mark.unit
    def test_rationals_are_not_enumerable(self, qq):
        with pytest.raises(InputError):
            qq.elements()

    @pytest.mark.unit
    def test_fields_are_cached(self):
        assert get_field(7) is get_field(7)


# ============================================================
# Test: Sparse Vectors
# ============================================================

class TestVectors:

    @pytest.mark.property
    @given(data=st.data(), field=field_strategy())
    def test_add_then_subtract(self, data, field):
        u = data.draw(vector_strategy(field))
        v = data.draw(vector_strategy(field))
        assert vec_sub(vec_add(u, v), v) == u

    @pytest.mark.property
    @given(data=st.data(), field=field_strategy())
    def test_no_stored_zeros(self, data, field):
        u = data.draw(vector_strategy(field))
        assert vec_sub(u, u) == {}
        assert not vec_scale(field.zero, u)


# ============================================================
# Test: Filtered Spaces and Maps
# ============================================================

class TestFiltration:

    @pytest.mark.unit
    def test_weight_outside_range_rejected(self, f2):
        with pytest.raises(FiltrationError):
            FilteredGradedSpace(f2, [BasisVector("x", 0, 3)], 3)

    @pytest.mark.unit
    def test_nilpotency_below_two_rejected(self, f2):
        with pytest.raises(FiltrationError):
            FilteredGradedSpace(f2, [], 1)

    @pytest.mark.unit
    def test_weight_lowering_map_rejected(self, f2):
        space = FilteredGradedSpace(f2, [BasisVector("x", 0, 2), BasisVector("y", 0, 1)], 3)
        with pytest.raises(FiltrationError):
            FilteredLinearMap(space, space, {0: {1: f2.one}})

    @pytest.mark.unit
    def test_degree_mismatch_rejected(self, f2):
        space = FilteredGradedSpace(f2, [BasisVector("x", 0, 1), BasisVector("y", 0, 1)], 2)
        with pytest.raises(DegreeError):
            FilteredLinearMap(space, space, {0: {1: f2.one}}, 1)

    @pytest.mark.unit
    def test_indices_by_degree_and_weight(self, f2):
        space = FilteredGradedSpace(
            f2, [BasisVector("a", 0, 1), BasisVector("b", 0, 2), BasisVector("c", 1, 2)], 3
        )
        assert space.indices(degree=0) == [0, 1]
        assert space.indices(degree=0, weight=2) == [1]
        assert space.indices(weight=2) == [1, 2]

    @pytest.mark.unit
    def test_differential_must_square_to_zero(self, f2):
        space = FilteredGradedSpace(
            f2, [BasisVector("x", 0, 1), BasisVector("y", 1, 1), BasisVector("z", 2, 1)], 2
        )
        d = FilteredLinearMap(space, space, {0: {1: f2.one}, 1: {2: f2.one}}, 1)
        with pytest.raises(NotAComplexError):
            FilteredComplex(space, d)


# ============================================================
# Test: Elimination and Cohomology
# ============================================================

class TestElimination:

    @pytest.mark.unit
    def test_solver_kernel_and_rank(self, qq):
        columns = [{0: qq(1), 1: qq(2)}, {0: qq(2), 1: qq(4)}, {1: qq(1)}]
        solver = LinearSolver(qq, columns, [0, 1])
        assert solver.rank == 2
        kernel = solver.kernel()
        assert len(kernel) == 1
        (x,) = kernel
        assert not solver.combine(x)

    @pytest.mark.unit
    def test_solve_reports_inconsistency(self, f2):
        solver = LinearSolver(f2, [{0: f2.one}], [0, 1])
        assert solver.solve({1: f2.one}) is None
        assert solver.in_span({0: f2.one})
        assert not solver.in_span({1: f2.one})
        assert solver.solve({0: f2.one}) == {0: f2.one}

    @pytest.mark.unit
    def test_acyclic_complex_has_no_cohomology(self, f3):
        C = _two_term(f3)
        assert cohomology_basis(C, 0).dimension == 0
        assert cohomology_basis(C, 1).dimension == 0

    @pytest.mark.unit
    def test_zero_differential_cohomology_is_everything(self, f2):
        space = FilteredGradedSpace(f2, [BasisVector("a", -1, 1), BasisVector("b", -1, 2)], 3)
        C = FilteredComplex.with_zero_differential(space)
        H = cohomology_basis(C, -1)
        assert H.dimension == 2
        assert cohomology_basis(C, -1, level=2).dimension == 1

    @pytest.mark.unit
    def test_classify_rejects_non_cocycles(self, f2):
        from src.exceptions import InvariantViolation

        C = _two_term(f2)
        with pytest.raises(InvariantViolation):
            cohomology_basis(C, 0).classify({0: f2.one})


# ============================================================
# Test: Weak Equivalences and Fibrations
# ============================================================

class TestHomotopyInvariants:

    @pytest.mark.unit
    def test_map_to_zero_from_acyclic_is_weak_equivalence(self, f2):
        C = _two_term(f2)
        zero_space = FilteredGradedSpace(f2, [], 3)
        Z = FilteredComplex.with_zero_differential(zero_space)
        f = ChainMap(C, Z, FilteredLinearMap.zero(C.space, zero_space))
        assert is_weak_equivalence(f)
        assert is_fibration(f)

    @pytest.mark.unit
    def test_weight_mismatch_breaks_filtered_quasi_isomorphism(self, f2):
        """x ↦ y with x in ℱ₁ only: acyclic overall but ℱ₂ sees y alone"""
        C = _two_term(f2, weight_x=1, weight_y=2)
        zero_space = FilteredGradedSpace(f2, [], 3)
        Z = FilteredComplex.with_zero_differential(zero_space)
        f = ChainMap(C, Z, FilteredLinearMap.zero(C.space, zero_space))
        assert not is_weak_equivalence(f)

    @pytest.mark.unit
    def test_contraction_of_acyclic_fibration(self, f3):
        C = _two_term(f3)
        zero_space = FilteredGradedSpace(f3, [], 3)
        Z = FilteredComplex.with_zero_differential(zero_space)
        contraction = contract_acyclic_fibration(ChainMap(C, Z, FilteredLinearMap.zero(C.space, zero_space)))
        assert contraction.kernel.dimension == 2
        assert contraction.homotopy.image(1) == {0: f3.one}
        assert not contraction.homotopy.image(0)

    @pytest.mark.unit
    def test_contraction_needs_acyclic_fibration(self, f2):
        C = _two_term(f2, weight_x=1, weight_y=2)
        zero_space = FilteredGradedSpace(f2, [], 3)
        Z = FilteredComplex.with_zero_differential(zero_space)
        with pytest.raises(NotAcyclicFibrationError):
            contract_acyclic_fibration(ChainMap(C, Z, FilteredLinearMap.zero(C.space, zero_space)))

    @pytest.mark.unit
    def test_section_is_right_inverse(self, f3):
        source = FilteredGradedSpace(
            f3, [BasisVector("a", 0, 1), BasisVector("b", 0, 1), BasisVector("c", 0, 2)], 3
        )
        target = FilteredGradedSpace(f3, [BasisVector("u", 0, 1), BasisVector("v", 0, 2)], 3)
        f = FilteredLinearMap(source, target, {0: {0: f3.one}, 1: {0: f3.one}, 2: {1: f3(2)}})
        assert is_fibration(f)
        for order in ("ascending", "descending"):
            sigma = filtered_section(f, order)
            assert f.compose(sigma).table == FilteredLinearMap.identity(target).table
