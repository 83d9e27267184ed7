"""
Tests for shifted A∞-algebras, ∞-morphisms and their constructions

Tests cover:
- Stasheff and filtration checks at construction
- Shifting a dg algebra (sign of Q¹₂)
- Coderivation extension Qᵏₙ and coalgebra components Φᵏₙ
- Morphism identity, composition, inversion and transport
- Products, projections, inclusions and product morphisms
- Twisting by Maurer-Cartan elements
- Tensoring with N*(Δⁿ) and functoriality in the coefficients
"""
import random

import pytest
from hypothesis import given, strategies as st

from src.ainfty import (
    DGAlgebraPresentation,
    ShiftedAInftyAlgebra,
    abelian_algebra,
    check_morphism,
    check_stasheff,
    compose,
    extend_coderivation,
    from_dga,
    identity_morphism,
    invert_morphism,
    lift_dga_morphism,
    strict_morphism,
    zero_algebra,
)
from src.cochains import face_map, structure_constants
from src.constructions import (
    ProductAlgebra,
    check_tensor_functoriality,
    product_morphism,
    reparenthesization_agrees,
    tensor_with_dga,
    twist_algebra,
)
from src.exceptions import (
    ArityError,
    DGAlgebraError,
    DegreeError,
    FiltrationError,
    MorphismError,
    NotMaurerCartanError,
    StasheffError,
)
from src.generators import (
    acyclic_abelian,
    disguise,
    random_ainfty,
    truncated_polynomial,
    upper_triangular,
)
from src.linalg import BasisVector, FilteredGradedSpace, FilteredLinearMap, get_field
from src.multilinear import admissible_words, coalgebra_component


def _staircase(field):
    """E01, E12 in shifted degree 0 with E01·E12 = E02"""
    return upper_triangular(field, 3, [0, 1, 2]).shifted


# ============================================================
# Test: Construction Checks
# ============================================================

class TestAlgebraChecks:

    @pytest.mark.unit
    def test_differential_squaring_to_non_zero_rejected(self, f2):
        space = FilteredGradedSpace(
            f2, [BasisVector("x", -1, 1), BasisVector("y", 0, 1), BasisVector("z", 1, 1)], 2
        )
        with pytest.raises(StasheffError) as exc_info:
            ShiftedAInftyAlgebra(space, {1: {(0,): {1: f2.one}, (1,): {2: f2.one}}}, check=True)
        assert exc_info.value.details["arity"] == 1
        assert exc_info.value.details["word"] == ["x"]

    @pytest.mark.unit
    def test_operation_beyond_nilpotency_rejected(self, f2):
        space = FilteredGradedSpace(f2, [BasisVector("x", -1, 1)], 2)
        with pytest.raises(FiltrationError):
            ShiftedAInftyAlgebra(space, {2: {(0, 0): {0: f2.one}}})

    @pytest.mark.unit
    def test_product_must_raise_weight(self, f2):
        space = FilteredGradedSpace(f2, [BasisVector("a", 0, 1), BasisVector("b", 0, 1)], 3)
        with pytest.raises(FiltrationError):
            DGAlgebraPresentation(space, {}, {(0, 0): {1: f2.one}})

    @pytest.mark.unit
    def test_shift_sign_on_odd_inputs(self, f3):
        """|s⁻¹t| = -1 flips the sign of Q¹₂(t, t)"""
        A = truncated_polynomial(f3, 3, 0).shifted
        assert A.space.degrees == (-1, -1)
        assert A.operation(2).evaluate((0, 0)) == {1: f3(-1)}

    @pytest.mark.unit
    def test_shift_keeps_sign_on_even_inputs(self, polynomial_degree_one):
        A = polynomial_degree_one.shifted
        assert from_dga(polynomial_degree_one).same_structure(A)
        f3 = A.field
        assert A.space.degrees == (0, 1)
        assert A.operation(2).evaluate((0, 0)) == {1: f3.one}

    @pytest.mark.unit
    def test_abelian_and_zero_algebras(self, f2, acyclic_f2):
        assert zero_algebra(f2, 3).dimension == 0
        assert acyclic_f2.is_abelian
        assert abelian_algebra(acyclic_f2.complex).same_structure(acyclic_f2)

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_generated_algebras_satisfy_stasheff(self, seed):
        A = random_ainfty(seed, max_dimension=3).value
        assert check_stasheff(A)


# ============================================================
# Test: Coderivation Extension
# ============================================================

class TestCoderivationExtension:

    @pytest.mark.unit
    def test_arity_one_is_the_operation(self, f3):
        A = acyclic_abelian(f3, -1, 1, 3)
        assert extend_coderivation(A, 1, 1) == {(0,): {(1,): f3.one}}

    @pytest.mark.unit
    def test_koszul_sign_past_odd_input(self, f3):
        """Q²₂(kx⊗kx) = ky⊗kx - kx⊗ky since |kx| = -1"""
        A = acyclic_abelian(f3, -1, 1, 3)
        Q22 = extend_coderivation(A, 2, 2)
        assert Q22[(0, 0)] == {(1, 0): f3.one, (0, 1): f3(-1)}
        assert Q22[(1, 0)] == {(1, 1): f3.one}
        assert (1, 1) not in Q22

    @pytest.mark.unit
    def test_output_longer_than_input_rejected(self, f3):
        with pytest.raises(ArityError):
            extend_coderivation(acyclic_abelian(f3, -1, 1, 3), 3, 2)


# ============================================================
# Test: Morphisms
# ============================================================

class TestMorphisms:

    @pytest.mark.unit
    def test_forgetting_the_differential_is_not_a_morphism(self, acyclic_f2):
        flat = ShiftedAInftyAlgebra(acyclic_f2.space, {})
        with pytest.raises(MorphismError):
            strict_morphism(acyclic_f2, flat, FilteredLinearMap.identity(acyclic_f2.space), check=True)

    @pytest.mark.unit
    def test_identity_is_neutral(self, heisenberg_algebra):
        identity = identity_morphism(heisenberg_algebra)
        assert check_morphism(identity)
        assert compose(identity, identity).same_as(identity)
        assert identity.is_strict

    @pytest.mark.property
    @given(seed=st.integers(0, 10_000))
    def test_transport_gives_invertible_morphism(self, seed):
        A = upper_triangular(get_field(3), 3, [0, 0, 1], (1, 2)).shifted
        transported, F = disguise(random.Random(seed), A, density=0.7)
        assert check_stasheff(transported)
        assert check_morphism(F)
        inverse = invert_morphism(F)
        assert compose(inverse, F).same_as(identity_morphism(A))
        assert compose(F, inverse).same_as(identity_morphism(transported))

    @pytest.mark.unit
    def test_identity_extends_to_identity_on_words(self, heisenberg_algebra):
        space = heisenberg_algebra.space
        table = coalgebra_component(identity_morphism(heisenberg_algebra).components, space, 2, 2)
        assert table == {w: {w: space.field.one} for w in admissible_words(space, 2)}

    @pytest.mark.unit
    def test_dg_algebra_map_lifts_to_strict_morphism(self, f2):
        C = truncated_polynomial(f2, 3, 0)
        phi = lift_dga_morphism(C, C, {0: {0: f2.one}, 1: {1: f2.one}})
        assert phi.is_strict
        assert phi.same_as(identity_morphism(C.shifted))

    @pytest.mark.unit
    def test_non_multiplicative_map_rejected(self, f2):
        C = truncated_polynomial(f2, 3, 0)
        with pytest.raises(DGAlgebraError):
            lift_dga_morphism(C, C, {0: {0: f2.one}})

    @pytest.mark.unit
    def test_composition_is_associative(self, heisenberg_algebra):
        rng = random.Random(11)
        B, F = disguise(rng, heisenberg_algebra, density=0.8)
        C, G = disguise(rng, B, density=0.8)
        D, H = disguise(rng, C, density=0.8)
        assert compose(H, compose(G, F)).same_as(compose(compose(H, G), F))


# ============================================================
# Test: Products
# ============================================================

class TestProducts:

    @pytest.mark.unit
    def test_projection_and_inclusion(self, z4_algebra, acyclic_f2):
        P = ProductAlgebra(z4_algebra, acyclic_f2)
        assert P.space.names == ("t", "t2", "kx", "ky")
        for side in (0, 1):
            assert check_morphism(P.projection(side))
            assert check_morphism(P.inclusion(side))
        assert compose(P.projection(0), P.inclusion(0)).same_as(identity_morphism(z4_algebra))

    @pytest.mark.unit
    def test_clashing_names_are_prefixed(self, z4_algebra):
        P = ProductAlgebra(z4_algebra, z4_algebra)
        assert P.space.names == ("1:t", "1:t2", "2:t", "2:t2")

    @pytest.mark.unit
    def test_split_and_join(self, z4_algebra, acyclic_f2, f2):
        P = ProductAlgebra(z4_algebra, acyclic_f2)
        v = {0: f2.one, 3: f2.one}
        left, right = P.split(v)
        assert left == {0: f2.one}
        assert right == {1: f2.one}
        assert P.join(left, right) == v

    @pytest.mark.unit
    def test_product_of_identities(self, z4_algebra, acyclic_f2):
        P = ProductAlgebra(z4_algebra, acyclic_f2)
        both = product_morphism(identity_morphism(z4_algebra), identity_morphism(acyclic_f2))
        assert both.same_as(identity_morphism(P))

    @pytest.mark.unit
    def test_product_morphism_commutes_with_projection(self, heisenberg_algebra, acyclic_f2):
        B, F = disguise(random.Random(5), heisenberg_algebra, density=0.8)
        source = ProductAlgebra(heisenberg_algebra, acyclic_f2)
        target = ProductAlgebra(B, acyclic_f2)
        both = product_morphism(F, identity_morphism(acyclic_f2), source, target, check=True)
        assert compose(target.projection(0), both).same_as(compose(F, source.projection(0)))


# ============================================================
# Test: Twisting
# ============================================================

class TestTwisting:

    @pytest.mark.unit
    def test_twisted_differential(self, f3):
        A = _staircase(f3)
        e01, e02, e12 = (A.space.names.index(n) for n in ("E01", "E02", "E12"))
        twisted = twist_algebra(A, {e01: f3.one})
        assert check_stasheff(twisted)
        assert twisted.differential.image(e12) == {e02: f3.one}
        assert not A.differential.image(e12)

    @pytest.mark.unit
    def test_twist_by_zero_is_identity(self, f3):
        A = _staircase(f3)
        assert twist_algebra(A, {}) is A

    @pytest.mark.unit
    def test_non_maurer_cartan_twist_rejected(self, f3):
        A = _staircase(f3)
        e01, e12 = A.space.names.index("E01"), A.space.names.index("E12")
        with pytest.raises(NotMaurerCartanError):
            twist_algebra(A, {e01: f3.one, e12: f3.one})

    @pytest.mark.unit
    def test_twisting_element_must_have_degree_zero(self, f3):
        A = _staircase(f3)
        with pytest.raises(DegreeError):
            twist_algebra(A, {A.space.names.index("E02"): f3.one})


# ============================================================
# Test: Tensoring with Cochains
# ============================================================

class TestTensorWithCochains:

    @pytest.mark.unit
    def test_tensor_with_interval(self, heisenberg_algebra, f2):
        T = tensor_with_dga(heisenberg_algebra, structure_constants(1, f2))
        assert T.dimension == 9
        assert check_stasheff(T)

    @pytest.mark.unit
    def test_coefficient_functoriality(self, z4_algebra, f2):
        assert check_tensor_functoriality(z4_algebra, face_map(2, 1, f2), face_map(1, 0, f2))

    @pytest.mark.unit
    def test_reparenthesization(self, z4_algebra, f2):
        N1 = structure_constants(1, f2)
        assert reparenthesization_agrees(z4_algebra, N1, N1)
