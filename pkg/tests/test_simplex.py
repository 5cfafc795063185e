"""
Tests for monotone maps between finite ordinals.
"""

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmc_checker.errors import SimplexMapError
from dmc_checker.simplex import (SimplexMap, all_maps, codegeneracy, coface, compose_all,
                                 cosimplicial_identities, identity, shuffles, surjection)


@st.composite
def simplex_maps(draw, max_level=5):
    source = draw(st.integers(0, max_level))
    target = draw(st.integers(0, max_level))
    values = sorted(draw(st.lists(st.integers(0, target), min_size=source + 1,
                                  max_size=source + 1)))
    return SimplexMap(source, target, tuple(values))


class TestSimplexMap:
    """Test construction and composition."""

    def test_non_monotone_rejected(self):
        with pytest.raises(SimplexMapError):
            SimplexMap(1, 1, (1, 0))

    def test_wrong_arity_rejected(self):
        with pytest.raises(SimplexMapError):
            SimplexMap(2, 1, (0, 1))

    def test_elementary_maps(self):
        assert coface(2, 1).values == (0, 2)
        assert codegeneracy(1, 0).values == (0, 0, 1)
        with pytest.raises(SimplexMapError):
            coface(1, 2)

    def test_surjection_from_sizes(self):
        f = surjection([2, 0, 1])
        assert f.values == (0, 0, 2)
        assert f.preimage_sizes() == (2, 0, 1)

    def test_all_maps_count(self):
        assert len(list(all_maps(2, 2))) == comb(5, 3)

    def test_cosimplicial_identities(self):
        verdict = cosimplicial_identities(4)
        assert verdict.passed
        assert verdict.details["relations"] > 0


class TestFactorization:
    """Property tests for epi-mono factorization and elementary words."""

    @settings(max_examples=80, deadline=None)
    @given(simplex_maps())
    def test_factor(self, f):
        epi, mono = f.factor()
        assert epi.is_surjective and mono.is_injective
        assert mono * epi == f

    @settings(max_examples=80, deadline=None)
    @given(simplex_maps())
    def test_elementary_word_composes_back(self, f):
        word = f.elementary_word()
        assert compose_all(word) == f

    def test_identity_word(self):
        assert identity(3).elementary_word() == [identity(3)]


class TestShuffles:
    """Test shuffle enumeration and signs."""

    @pytest.mark.parametrize("p,q", [(0, 2), (1, 1), (2, 2), (2, 3)])
    def test_count(self, p, q):
        assert len(list(shuffles(p, q))) == comb(p + q, p)

    def test_signs(self):
        assert [(I, sign) for I, _, sign in shuffles(1, 1)] == [((0,), 1), ((1,), -1)]

    def test_complements(self):
        for I, J, _ in shuffles(2, 2):
            assert sorted(I + J) == [0, 1, 2, 3]
