"""
Tests for the combinatorial helpers

Tests cover:
- Koszul signs of reorderings
- Unshuffle enumeration
- Weight-bounded word enumeration
"""
from math import comb

import pytest
from hypothesis import given, strategies as st

from src.utils import all_permutations, bounded_words, koszul_sign, unshuffles


class TestKoszulSign:

    @pytest.mark.unit
    def test_swapping_odd_letters(self):
        assert koszul_sign([1, 1], (1, 0)) == -1
        assert koszul_sign([1, 0], (1, 0)) == 1
        assert koszul_sign([-1, 1, 3], (2, 1, 0)) == -1

    @pytest.mark.property
    @given(degrees=st.lists(st.integers(-3, 3), min_size=1, max_size=5))
    def test_identity_order_has_no_sign(self, degrees):
        assert koszul_sign(degrees, tuple(range(len(degrees)))) == 1

    @pytest.mark.unit
    def test_permutations_are_cached(self):
        assert all_permutations(3) is all_permutations(3)
        assert len(all_permutations(4)) == 24


class TestUnshuffles:

    @pytest.mark.unit
    def test_two_one(self):
        assert unshuffles(3, 2) == ((0, 1, 2), (0, 2, 1), (1, 2, 0))

    @pytest.mark.property
    @given(n=st.integers(0, 6), data=st.data())
    def test_count_is_binomial(self, n, data):
        first = data.draw(st.integers(0, n))
        assert len(unshuffles(n, first)) == comb(n, first)


class TestBoundedWords:

    @pytest.mark.unit
    def test_weight_bound(self):
        words = list(bounded_words([0, 1], [1, 2], 2, 3))
        assert words == [(0, 0), (0, 1), (1, 0)]

    @pytest.mark.unit
    def test_empty_word(self):
        assert list(bounded_words([0], [1], 0, 0)) == [()]
