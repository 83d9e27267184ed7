"""
Tests for seeded instance generators

Tests cover:
- Named families: truncated polynomials, triangular matrices, B ⊗ 𝔪
- Determinism of seeded families
- Disguises produce non-strict ∞-isomorphisms
- Morphism families used by the homotopy checks
"""
import random

import pytest
from hypothesis import given, strategies as st

from src.ainfty import check_morphism, check_stasheff
from src.constructions import ProductAlgebra
from src.exceptions import InputError
from src.generators import (
    acyclic_abelian,
    disguise,
    exterior_algebra,
    product_projection,
    random_ainfty,
    random_cone_morphism,
    random_dga,
    rational_instance,
    sample_sparse_ainfty,
    tensor_ideal,
    truncated_polynomial,
    upper_triangular,
)
from src.homotopy_ops import is_weak_equivalence_morphism
from src.linalg import get_field


# ============================================================
# Test: Named Families
# ============================================================

class TestFamilies:

    @pytest.mark.unit
    def test_truncated_polynomial(self, f3):
        C = truncated_polynomial(f3, 4, 1)
        assert C.space.names == ("t", "t2", "t3")
        assert C.space.degrees == (1, 2, 3)
        assert C.space.weights == (1, 2, 3)

    @pytest.mark.unit
    def test_upper_triangular_layout(self, f2):
        C = upper_triangular(f2, 3, [0, 1, 1])
        assert C.space.names == ("E01", "E02", "E12")
        assert C.space.degrees == (1, 1, 0)
        assert C.space.weights == (1, 2, 1)

    @pytest.mark.unit
    def test_differential_entry_must_have_degree_one(self, f2):
        with pytest.raises(InputError):
            upper_triangular(f2, 3, [0, 0, 0], (0, 1))

    @pytest.mark.unit
    def test_tensor_ideal_orders_by_power(self, f2):
        C = tensor_ideal(exterior_algebra(f2, 1), 3)
        assert C.space.names == ("1*t", "e*t", "1*t2", "e*t2")
        assert C.space.weights == (1, 1, 2, 2)

    @pytest.mark.unit
    def test_acyclic_abelian(self, qq):
        K = acyclic_abelian(qq, -1, 2, 3)
        assert K.space.names == ("kx", "ky")
        assert K.differential.image(0) == {1: qq.one}
        assert K.is_abelian


# ============================================================
# Test: Seeded Families
# ============================================================

class TestSeededFamilies:

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_same_seed_same_instance(self, seed):
        first, second = random_ainfty(seed), random_ainfty(seed)
        assert first.descriptor == second.descriptor
        assert first.value.same_structure(second.value)

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_random_dga_descriptor(self, seed):
        instance = random_dga(seed, get_field(2))
        assert instance.descriptor.seed == seed
        assert instance.descriptor.parameters["characteristic"] == 2
        assert check_stasheff(instance.value.shifted)

    @pytest.mark.unit
    def test_sparse_samples_satisfy_stasheff(self, f2):
        for seed in range(5):
            assert check_stasheff(sample_sparse_ainfty(seed, f2))

    @pytest.mark.unit
    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_rational_instances(self, seed):
        instance = rational_instance(seed)
        assert instance.value.field.characteristic == 0
        assert instance.descriptor.parameters["disguised"] == bool(seed % 2)


# ============================================================
# Test: Disguises and Morphisms
# ============================================================

class TestMorphismFamilies:

    @pytest.mark.unit
    def test_dense_disguise_is_not_strict(self, z4_algebra, acyclic_f2):
        transported, F = disguise(random.Random(2), ProductAlgebra(z4_algebra, acyclic_f2), density=1.0)
        assert not F.is_strict
        assert F.target is transported
        assert check_morphism(F)

    @pytest.mark.unit
    def test_zero_density_is_identity(self, heisenberg_algebra):
        transported, F = disguise(random.Random(0), heisenberg_algebra, density=0.0)
        assert F.is_strict
        assert transported.same_structure(heisenberg_algebra)

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_cone_morphisms_are_weak_equivalences(self, seed, heisenberg_algebra):
        phi = random_cone_morphism(seed, heisenberg_algebra)
        assert phi.target is heisenberg_algebra
        assert is_weak_equivalence_morphism(phi)

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_product_projection_lands_in_a(self, seed, z4_algebra):
        phi = product_projection(seed, z4_algebra)
        assert phi.target is z4_algebra
        assert phi.source.dimension == z4_algebra.dimension + 2
