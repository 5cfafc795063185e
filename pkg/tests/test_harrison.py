"""
Tests for Harrison cochains and the Gerstenhaber bracket.
"""

from fractions import Fraction

import pytest

from dmc_checker.errors import AlgebraError
from dmc_checker.harrison import (componentwise_product, express, gerstenhaber_bracket,
                                  harrison_basis, harrison_fixture, is_commutative_associative)
from dmc_checker.lie import relation_failures


class TestCochains:
    """Test the shuffle-vanishing cochain spaces."""

    def test_degree_zero_is_all_endomorphisms(self):
        assert len(harrison_basis(2, 0)) == 4

    def test_degree_one_is_commutative_products(self):
        # symmetric bilinear maps Q^2 x Q^2 -> Q^2
        assert len(harrison_basis(2, 1)) == 6
        assert len(harrison_basis(1, 1)) == 1

    def test_componentwise_product_is_harrison(self):
        coordinates = express(componentwise_product(2), 1, 2)
        assert coordinates
        assert all(name.startswith("h1_") for name in coordinates)

    def test_non_commutative_product_rejected(self):
        with pytest.raises(AlgebraError):
            express({(0, 1): {0: Fraction(1)}}, 1, 2)


class TestMaurerCartan:
    """Commutative associative products are Maurer-Cartan elements."""

    def test_componentwise_product(self):
        assert is_commutative_associative(componentwise_product(2), 2)
        assert gerstenhaber_bracket(componentwise_product(2), componentwise_product(2),
                                    1, 1, 2) == {}

    def test_non_associative_product(self):
        # e0 e0 = e1 and e0 e1 = e1 e0 = e0 is commutative but not associative
        c = {(0, 0): {1: Fraction(1)}, (0, 1): {0: Fraction(1)}, (1, 0): {0: Fraction(1)}}
        assert not is_commutative_associative(c, 2)


class TestFixture:
    """Test the bundled Harrison structure."""

    def test_degrees(self):
        L = harrison_fixture(2, 2)
        assert L.degrees() == [0, 1, 2]
        assert L.is_dgla()
        assert relation_failures(L) == []

    def test_bounds(self):
        with pytest.raises(AlgebraError):
            harrison_fixture(2, 1)
