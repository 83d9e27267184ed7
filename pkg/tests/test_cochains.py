"""
Tests for normalized cochains on standard simplices

Tests cover:
- Structure constants of N*(Δ¹) and N*(Δ²)
- DG algebra laws on every N*(Δⁿ) up to the cap
- Cosimplicial identities for face and degeneracy maps
- Tensor products of dg algebras
- Rejection of law-breaking tables
"""
import pytest
from hypothesis import given, strategies as st

from src.cochains import (
    DGAlgebraMap,
    FiniteDGAlgebra,
    degeneracy_map,
    ground_algebra,
    face_map,
    interval_evaluations,
    interval_unit,
    structure_constants,
    tensor_dg_algebras,
)
from src.exceptions import DGAlgebraError, DegreeError, InputError
from src.linalg import get_field


def _phi(cochains, label):
    return cochains.label_index(tuple(label))


# ============================================================
# Test: Structure Constants
# ============================================================

class TestStructureConstants:
    """Coboundary signs and Alexander-Whitney products"""

    @pytest.mark.unit
    def test_interval_coboundary(self, f3):
        N1 = structure_constants(1, f3)
        e01 = _phi(N1, (0, 1))
        assert N1.d({N1.vertex(0): f3.one}) == {e01: f3(-1)}
        assert N1.d({N1.vertex(1): f3.one}) == {e01: f3.one}
        assert N1.d({e01: f3.one}) == {}

    @pytest.mark.unit
    def test_interval_cup_products(self, f3):
        N1 = structure_constants(1, f3)
        e01 = _phi(N1, (0, 1))
        assert N1.multiply({N1.vertex(0): f3.one}, {e01: f3.one}) == {e01: f3.one}
        assert N1.multiply({e01: f3.one}, {N1.vertex(1): f3.one}) == {e01: f3.one}
        assert N1.multiply({e01: f3.one}, {N1.vertex(0): f3.one}) == {}

    @pytest.mark.unit
    def test_triangle_coboundary_and_cup(self, qq):
        N2 = structure_constants(2, qq)
        top = N2.top
        assert N2.d({_phi(N2, (0, 1)): qq.one}) == {top: qq.one}
        assert N2.d({_phi(N2, (0, 2)): qq.one}) == {top: qq(-1)}
        assert N2.d({_phi(N2, (1, 2)): qq.one}) == {top: qq.one}
        assert N2.multiply({_phi(N2, (0, 1)): qq.one}, {_phi(N2, (1, 2)): qq.one}) == {top: qq.one}

    @pytest.mark.unit
    def test_triangle_edge_products(self, f3):
        """Only φ₀₁ ⌣ φ₁₂ survives among products of edges"""
        N2 = structure_constants(2, f3)
        edges = [(0, 1), (0, 2), (1, 2)]
        for left in edges:
            for right in edges:
                product = N2.basis_product(_phi(N2, left), _phi(N2, right))
                expected = {N2.top: f3.one} if (left, right) == ((0, 1), (1, 2)) else {}
                assert product == expected

    @pytest.mark.unit
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_coboundary_of_faces_of_the_top_simplex(self, qq, n):
        """δφ_{d^j[n]} = (-1)^j φ_[n+1]"""
        cochains = structure_constants(n + 1, qq)
        for j in range(n + 2):
            assert cochains.d({cochains.coface(j): qq.one}) == {cochains.top: qq((-1) ** j)}

    @pytest.mark.unit
    def test_alternative_even_degree_sign_breaks_leibniz(self, f3):
        """Flipping δ on even-degree cochains of Δ² keeps δ² = 0 but not Leibniz"""
        N2 = structure_constants(2, f3)
        flipped = {
            i: {j: -c for j, c in image.items()} if N2.degrees[i] % 2 == 0 else image
            for i, image in N2.differential.items()
        }
        with pytest.raises(DGAlgebraError) as exc_info:
            FiniteDGAlgebra(f3, N2.names, N2.degrees, flipped, N2.product, N2.unit)
        assert exc_info.value.details["invariant"] == "leibniz"

    @pytest.mark.unit
    def test_point_is_the_ground_field(self, f3):
        N0 = structure_constants(0, f3)
        assert N0.dimension == 1
        assert N0.top == N0.vertex(0)
        assert N0.unit == {0: f3.one}
        assert N0.basis_product(0, 0) == {0: f3.one}
        assert not N0.differential
        assert ground_algebra(f3) is N0

    @pytest.mark.unit
    def test_names_and_degrees(self, f2):
        N2 = structure_constants(2, f2)
        assert N2.names[:3] == ("phi0", "phi1", "phi2")
        assert N2.names[N2.top] == "phi012"
        assert N2.degrees[N2.top] == 2
        assert N2.coface(1) == _phi(N2, (0, 2))

    @pytest.mark.unit
    def test_unit_is_sum_of_vertices(self, f2):
        N3 = structure_constants(3, f2)
        assert N3.unit == {N3.vertex(i): f2.one for i in range(4)}

    @pytest.mark.property
    @given(n=st.integers(1, 4), p=st.sampled_from([2, 3, 0]))
    def test_laws_hold_and_top_cochain_is_dead(self, n, p):
        field = get_field(p)
        cochains = structure_constants(n, field)
        cochains.validate()
        assert cochains.dimension == 2 ** (n + 1) - 1
        assert not cochains.d({cochains.top: field.one})
        assert not cochains.basis_product(cochains.top, cochains.top)

    @pytest.mark.unit
    def test_dimension_cap(self, f2):
        with pytest.raises(InputError):
            structure_constants(7, f2)

    @pytest.mark.unit
    def test_unknown_simplex(self, f2):
        with pytest.raises(InputError):
            structure_constants(1, f2).label_index((1, 0))


# ============================================================
# Test: Cosimplicial Structure
# ============================================================

class TestFaceDegeneracy:

    @pytest.mark.property
    @given(data=st.data(), n=st.integers(2, 4))
    def test_faces_commute(self, data, n):
        field = get_field(2)
        j = data.draw(st.integers(1, n))
        i = data.draw(st.integers(0, j - 1))
        lhs = face_map(n - 1, i, field).compose(face_map(n, j, field))
        rhs = face_map(n - 1, j - 1, field).compose(face_map(n, i, field))
        assert lhs.table == rhs.table

    @pytest.mark.property
    @given(data=st.data(), n=st.integers(0, 3), p=st.sampled_from([2, 3]))
    def test_face_after_degeneracy_is_identity(self, data, n, p):
        field = get_field(p)
        j = data.draw(st.integers(0, n))
        identity = DGAlgebraMap.identity(structure_constants(n, field)).table
        for face in (j, j + 1):
            assert face_map(n + 1, face, field).compose(degeneracy_map(n, j, field)).table == identity

    @pytest.mark.unit
    def test_interval_evaluations_pick_endpoints(self, f3):
        ev0, ev1 = interval_evaluations(f3)
        N1 = structure_constants(1, f3)
        point = structure_constants(0, f3).vertex(0)
        assert ev0.image(N1.vertex(0)) == {point: f3.one}
        assert ev0.image(N1.vertex(1)) == {}
        assert ev1.image(N1.vertex(1)) == {point: f3.one}
        assert ev0.compose(interval_unit(f3)).table == DGAlgebraMap.identity(ev0.target).table

    @pytest.mark.unit
    def test_face_out_of_range(self, f2):
        with pytest.raises(InputError):
            face_map(2, 3, f2)
        with pytest.raises(InputError):
            degeneracy_map(1, 2, f2)


# ============================================================
# Test: Tensor Products and Law Checks
# ============================================================

class TestTensor:

    @pytest.mark.unit
    def test_tensor_of_intervals(self, f3):
        N1 = structure_constants(1, f3)
        square = tensor_dg_algebras(N1, N1)
        assert square.dimension == 9
        assert square.is_unital
        assert square.index("phi01*phi01") in square.indices(2)

    @pytest.mark.unit
    def test_leibniz_violation(self, f2):
        with pytest.raises(DGAlgebraError) as exc_info:
            FiniteDGAlgebra(f2, ["a", "b"], [0, 1], {0: {1: f2.one}}, {(0, 0): {0: f2.one}})
        assert exc_info.value.invariant == "leibniz"

    @pytest.mark.unit
    def test_associativity_violation(self, f2):
        product = {(0, 0): {1: f2.one}, (1, 0): {1: f2.one}}
        with pytest.raises(DGAlgebraError) as exc_info:
            FiniteDGAlgebra(f2, ["a", "b"], [0, 0], {}, product)
        assert exc_info.value.invariant == "associativity"

    @pytest.mark.unit
    def test_product_degree_checked(self, f2):
        with pytest.raises(DegreeError):
            FiniteDGAlgebra(f2, ["a", "b"], [1, 1], {}, {(0, 0): {1: f2.one}})
