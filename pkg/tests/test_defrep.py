"""
Tests for deformations of finite group representations

Tests cover:
- Group and representation axioms
- Artin local rings 𝔽[t]/(tᴺ)
- Hochschild cochains as a dg algebra
- MC elements of C_R against homomorphism lifts
- Lift classification by gauge orbits, nerve and transfer
"""
from itertools import product as cartesian

import pytest
from sympy.polys.matrices import DomainMatrix

from src.ainfty import check_stasheff
from src.defrep import (
    ArtinLocalRing,
    FiniteGroup,
    Representation,
    classify_deformations,
    cyclic_group,
    deform_complex,
    deformation_algebra,
    direct_product,
    hochschild_complex,
    is_lift_homomorphism,
    lift_of,
    lifts_are_mc,
    regular_representation,
    same_matrix,
    symmetric_group,
    trivial_group,
    trivial_representation,
    truncation_independent,
)
from src.exceptions import GroupAxiomError, InputError, SizeCapExceeded
from src.linalg import get_field


def _degree_zero_elements(A):
    indices = A.space.indices(degree=0)
    elements = []
    for coefficients in cartesian(A.field.elements(), repeat=len(indices)):
        elements.append({i: c for i, c in zip(indices, coefficients) if c})
    return elements


# ============================================================
# Test: Groups and Representations
# ============================================================

class TestGroups:

    @pytest.mark.unit
    def test_small_groups(self):
        assert cyclic_group(3).multiply(2, 2) == 1
        assert cyclic_group(3).inverse(1) == 2
        S3 = symmetric_group(3)
        assert S3.order == 6
        assert S3.elements[S3.identity] == "123"
        assert direct_product(cyclic_group(2), cyclic_group(2)).order == 4

    @pytest.mark.unit
    def test_broken_table_rejected(self):
        with pytest.raises(GroupAxiomError):
            FiniteGroup(["e", "a"], [[0, 1], [1, 1]])

    @pytest.mark.unit
    def test_unknown_element(self):
        with pytest.raises(InputError):
            cyclic_group(2).index("h")

    @pytest.mark.unit
    def test_regular_representation(self, f2):
        rho = regular_representation(cyclic_group(2), f2)
        assert rho.dimension == 2

    @pytest.mark.unit
    @pytest.mark.parametrize("p", [2, 3, 0])
    def test_trivial_representation_is_valid(self, p):
        field = get_field(p)
        rho = trivial_representation(cyclic_group(3), field, dimension=2)
        rho.validate()
        assert rho.entries[0] == [[field.one, field.zero], [field.zero, field.one]]

    @pytest.mark.unit
    def test_matrices_compare_across_storage_formats(self, qq):
        dense = DomainMatrix([[qq.one, qq.zero], [qq.zero, qq.one]], (2, 2), qq.domain)
        assert same_matrix(dense, DomainMatrix.eye(2, qq.domain))
        assert not same_matrix(dense, DomainMatrix.zeros((2, 2), qq.domain))

    @pytest.mark.unit
    def test_symmetric_group_sign_representation(self, f3):
        S3 = symmetric_group(3)
        parity = [sum(1 for a in range(3) for b in range(a + 1, 3) if name[a] > name[b]) % 2 for name in S3.elements]
        rho = Representation(S3, f3, [[[f3(-1) if odd else f3.one]] for odd in parity])
        assert rho.dimension == 1

    @pytest.mark.unit
    def test_non_homomorphism_rejected(self, f3):
        with pytest.raises(GroupAxiomError) as exc_info:
            Representation(cyclic_group(2), f3, [[[1]], [[0]]])
        assert exc_info.value.invariant == "representation-homomorphism"

    @pytest.mark.unit
    def test_matrix_count_checked(self, f2):
        with pytest.raises(InputError):
            Representation(cyclic_group(3), f2, [[[1]]])


# ============================================================
# Test: Local Rings
# ============================================================

class TestArtinLocalRing:

    @pytest.mark.unit
    def test_parse(self, f2):
        R = ArtinLocalRing.parse(f2, "t^3")
        assert R.order == 3
        assert R.names == ["t", "t^2"]
        assert R.power(1, 1) == 2
        assert R.power(1, 2) is None

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["x^2", "t^", "t2"])
    def test_malformed_ring(self, f2, text):
        with pytest.raises(InputError):
            ArtinLocalRing.parse(f2, text)

    @pytest.mark.unit
    def test_order_at_least_two(self, f2):
        with pytest.raises(InputError):
            ArtinLocalRing(f2, 1)


# ============================================================
# Test: Hochschild Complexes
# ============================================================

class TestHochschild:

    @pytest.mark.unit
    def test_dimensions(self, f2):
        C = hochschild_complex(trivial_representation(cyclic_group(2), f2), top_degree=2)
        assert C.dimension == 1 + 2 + 4 + 8
        C.validate()

    @pytest.mark.unit
    def test_size_cap(self, f2):
        with pytest.raises(SizeCapExceeded):
            hochschild_complex(trivial_representation(cyclic_group(4), f2), top_degree=6)

    @pytest.mark.unit
    def test_deformation_complex_is_shifted_ainfty(self, f2):
        C = hochschild_complex(trivial_representation(cyclic_group(2), f2), top_degree=2)
        CR = deform_complex(C, ArtinLocalRing(f2, 3))
        assert CR.space.dimension == 2 * C.dimension
        assert check_stasheff(CR.shifted)
        assert deformation_algebra(C, ArtinLocalRing(f2, 3)).same_structure(CR.shifted)


# ============================================================
# Test: Lifts
# ============================================================

class TestLifts:

    @pytest.mark.unit
    def test_mc_elements_are_homomorphism_lifts(self, f2):
        C = hochschild_complex(trivial_representation(cyclic_group(2), f2), top_degree=2)
        CR = deform_complex(C, ArtinLocalRing(f2, 2))
        assert lifts_are_mc(CR, _degree_zero_elements(CR.shifted))

    @pytest.mark.unit
    def test_identity_must_lift_to_identity(self, f2):
        """ρ(e) = 1 + t is not a lift: (1 + t)² = 1 over 𝔽₂"""
        C = hochschild_complex(trivial_representation(cyclic_group(2), f2), top_degree=2)
        CR = deform_complex(C, ArtinLocalRing(f2, 2))
        x = {CR.pair(C.cell((0,)), 1): f2.one}
        assert not is_lift_homomorphism(CR, lift_of(CR, x))


# ============================================================
# Test: Classification
# ============================================================

class TestClassification:

    @pytest.mark.integration
    def test_z2_over_dual_numbers(self, f2):
        result = classify_deformations(
            trivial_representation(cyclic_group(2), f2), ArtinLocalRing(f2, 2), top_degree=2
        )
        assert result.counts == (2, 2, 2)
        assert result.agrees

    @pytest.mark.unit
    def test_trivial_group_has_one_class(self, f2):
        result = classify_deformations(
            trivial_representation(trivial_group(), f2), ArtinLocalRing(f2, 2), top_degree=2
        )
        assert result.counts == (1, 1, 1)
        assert result.agrees

    @pytest.mark.unit
    def test_fields_must_match(self, f2, f3):
        with pytest.raises(InputError):
            classify_deformations(trivial_representation(cyclic_group(2), f2), ArtinLocalRing(f3, 2))

    @pytest.mark.slow
    def test_z2_over_t_cubed(self, f2):
        result = classify_deformations(
            trivial_representation(cyclic_group(2), f2), ArtinLocalRing(f2, 3), top_degree=2
        )
        assert result.agrees

    @pytest.mark.slow
    def test_truncation_does_not_change_counts(self, f2):
        assert truncation_independent(
            trivial_representation(cyclic_group(2), f2), ArtinLocalRing(f2, 2), top_degree=2
        )
