"""
Tests for homotopy transfer onto cohomology

Tests cover:
- Transfer along a zero differential is the identity structure
- Acyclic summands disappear and products survive
- The transfer morphism is a weak equivalence
- π₁ is unchanged by transfer
- Refusal when d raises weight
"""
import pytest

from src.ainfty import check_morphism, check_stasheff
from src.cochains import structure_constants
from src.constructions import ProductAlgebra
from src.exceptions import TransferError
from src.generators import tensor_ideal, upper_triangular
from src.nerve import pi_n_theorem
from src.transfer import transfer, transfer_product


# ============================================================
# Test: Transfer
# ============================================================

class TestTransfer:

    @pytest.mark.unit
    def test_minimal_algebra_is_fixed(self, z4_algebra):
        result = transfer(z4_algebra)
        assert result.algebra.dimension == z4_algebra.dimension
        assert result.is_weak_equivalence
        assert 2 in result.algebra.operations

    @pytest.mark.unit
    def test_acyclic_factor_is_dropped(self, z4_algebra, acyclic_f2):
        result = transfer(ProductAlgebra(z4_algebra, acyclic_f2))
        assert result.algebra.dimension == 2
        assert check_stasheff(result.algebra)
        assert check_morphism(result.morphism)
        x = {0: z4_algebra.field.one}
        assert transfer_product(result, x, x)

    @pytest.mark.unit
    def test_cochain_coefficients_collapse(self, f2):
        """t·𝔽₂[t]/(t³) ⊗ N*(Δ¹) has the homotopy type of t·𝔽₂[t]/(t³)"""
        A = tensor_ideal(structure_constants(1, f2), 3).shifted
        result = transfer(A)
        assert A.dimension == 6
        assert result.algebra.dimension == 2
        assert pi_n_theorem(result.algebra, 1).order == pi_n_theorem(A, 1).order == 4

    @pytest.mark.unit
    def test_weight_raising_differential_refused(self, f3):
        A = upper_triangular(f3, 3, [0, 0, 1], (1, 2)).shifted
        with pytest.raises(TransferError):
            transfer(A)
