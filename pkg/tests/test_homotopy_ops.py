"""
Tests for fibrations, pullbacks and factorizations of ∞-morphisms

Tests cover:
- Decomposing acyclic fibrations and their right inverses
- Pullbacks of strict fibrations and their universal property
- Independence of the chosen filtered section
- Path objects and the factorization Θ = P_Θ ∘ Ψ
"""
import random

import pytest
from hypothesis import given, strategies as st

from src.ainfty import InftyMorphism, check_stasheff, compose, identity_morphism
from src.constructions import ProductAlgebra
from src.exceptions import NotAcyclicFibrationError, NotStrictError
from src.generators import acyclic_abelian, disguise, product_projection, random_cone_morphism, strict_projection
from src.homotopy_ops import (
    StrictPullback,
    compare_splittings,
    decompose_acyclic_fibration,
    factorize,
    is_acyclic_fibration,
    is_weak_equivalence_morphism,
    path_object,
    pullback_strict_fibration,
    right_inverse_acyclic_fibration,
)


def _strict_fibration(A):
    """pr₁ : A × K ↠ A with K acyclic in degrees 0 and 1"""
    K = acyclic_abelian(A.field, 0, 1, A.nilpotency)
    return ProductAlgebra(A, K).projection(0)


# ============================================================
# Test: Acyclic Fibrations
# ============================================================

class TestAcyclicFibrations:

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_decomposition(self, seed, heisenberg_algebra):
        phi = product_projection(seed, heisenberg_algebra)
        assert is_acyclic_fibration(phi)
        decomposition = decompose_acyclic_fibration(phi)
        assert decomposition.kernel_algebra.dimension == 2
        assert compose(decomposition.product.projection(0), decomposition.isomorphism).same_as(phi)

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000), order=st.sampled_from(["ascending", "descending"]))
    def test_right_inverse(self, seed, order, z4_algebra):
        phi = product_projection(seed, z4_algebra)
        chi = right_inverse_acyclic_fibration(phi, order)
        assert compose(phi, chi).same_as(identity_morphism(z4_algebra))
        assert is_weak_equivalence_morphism(chi)

    @pytest.mark.unit
    def test_non_acyclic_fibration_refused(self, z4_algebra):
        phi = strict_projection(z4_algebra, z4_algebra)
        assert not is_acyclic_fibration(phi)
        with pytest.raises(NotAcyclicFibrationError):
            decompose_acyclic_fibration(phi)


# ============================================================
# Test: Pullbacks
# ============================================================

class TestPullbacks:

    @pytest.mark.unit
    def test_pullback_of_strict_fibration(self, heisenberg_algebra):
        phi = _strict_fibration(heisenberg_algebra)
        theta = random_cone_morphism(3, heisenberg_algebra)
        pullback = StrictPullback(phi, theta)
        assert pullback.check_conjugation()
        assert check_stasheff(pullback.algebra)
        assert pullback.algebra.dimension == theta.source.dimension + 2
        assert compose(phi, pullback.second).same_as(compose(theta, pullback.first))

    @pytest.mark.unit
    def test_mediating_morphism_of_the_pullback_cone_is_identity(self, heisenberg_algebra):
        pullback = StrictPullback(_strict_fibration(heisenberg_algebra), random_cone_morphism(7, heisenberg_algebra))
        M = pullback.mediating(pullback.first, pullback.second)
        assert M.same_as(identity_morphism(pullback.algebra))
        assert pullback.mediating_is_unique()

    @pytest.mark.unit
    def test_descending_sections_give_a_pullback(self, heisenberg_algebra):
        phi = _strict_fibration(heisenberg_algebra)
        theta = random_cone_morphism(3, heisenberg_algebra)
        pullback = pullback_strict_fibration(phi, theta, order="descending")
        assert pullback.check_conjugation()
        assert compose(phi, pullback.second).same_as(compose(theta, pullback.first))

    @pytest.mark.unit
    def test_section_choice_does_not_matter(self, heisenberg_algebra):
        phi = _strict_fibration(heisenberg_algebra)
        assert compare_splittings(phi, random_cone_morphism(11, heisenberg_algebra))

    @pytest.mark.unit
    def test_non_strict_fibration_refused(self, z4_algebra, acyclic_f2):
        _, F = disguise(random.Random(2), ProductAlgebra(z4_algebra, acyclic_f2), density=1.0)
        assert not F.is_strict
        with pytest.raises(NotStrictError):
            StrictPullback(F, identity_morphism(F.target))


# ============================================================
# Test: Path Objects and Factorization
# ============================================================

class TestFactorization:

    @pytest.mark.unit
    def test_path_object(self, heisenberg_algebra):
        path = path_object(heisenberg_algebra)
        assert path.path.dimension == 3 * heisenberg_algebra.dimension
        assert is_weak_equivalence_morphism(path.unit)

    @pytest.mark.unit
    def test_factorize_zero_map(self, z4_algebra, heisenberg_algebra):
        theta = InftyMorphism(z4_algebra, heisenberg_algebra, {})
        factorization = factorize(theta)
        assert compose(factorization.fibration, factorization.weak_equivalence).same_as(theta)
        assert is_weak_equivalence_morphism(factorization.weak_equivalence)
        assert not factorization.fibration_is_acyclic

    @pytest.mark.unit
    def test_factorize_weak_equivalence(self, heisenberg_algebra):
        theta = random_cone_morphism(5, heisenberg_algebra)
        factorization = factorize(theta, "descending")
        assert factorization.fibration_is_acyclic
