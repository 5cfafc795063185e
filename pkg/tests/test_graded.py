"""
Tests for free graded-commutative algebras.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmc_checker.errors import AlgebraError
from dmc_checker.graded import (UNIT, GradedAlgebra, GradedPolynomial, Generator,
                                apply_derivation, poly_multiply, substitute)

ALGEBRA = GradedAlgebra([Generator("a", 0), Generator("u", -1), Generator("v", -1),
                         Generator("b", -2)], "test")


def polynomials(max_terms=4):
    """Random elements of ``ALGEBRA`` of weight at most three."""
    monomials = sum(ALGEBRA.monomials(4).values(), [])
    return st.dictionaries(st.sampled_from(monomials), st.integers(-3, 3).map(Fraction),
                           max_size=max_terms).map(lambda t: GradedPolynomial(ALGEBRA, t))


def homogeneous(max_terms=3):
    """Random homogeneous elements together with their degree."""
    buckets = {}
    for (deg, _), ms in ALGEBRA.monomials(4).items():
        buckets.setdefault(deg, []).extend(ms)
    return st.sampled_from(sorted(buckets)).flatmap(
        lambda deg: st.dictionaries(st.sampled_from(buckets[deg]),
                                    st.integers(-3, 3).map(Fraction), min_size=1,
                                    max_size=max_terms).map(
            lambda t: (GradedPolynomial(ALGEBRA, t), deg)))


class TestMonomials:
    """Test the Koszul sign rule on monomials."""

    def test_generators_sorted_by_degree(self):
        assert [g.name for g in ALGEBRA.generators] == ["b", "u", "v", "a"]

    def test_odd_generators_anticommute(self):
        u, v = ALGEBRA.gen("u"), ALGEBRA.gen("v")
        assert u * v == -(v * u)
        assert (u * u).is_zero()

    def test_even_generators_commute(self):
        a, b = ALGEBRA.gen("a"), ALGEBRA.gen("b")
        assert a * b == b * a
        assert (a * a).coefficient(((ALGEBRA.rank("a"), 2),)) == 1

    def test_canonical_monomial_sign(self):
        sign, m = ALGEBRA.canonical_monomial([("v", 1), ("u", 1)])
        assert sign == -1
        assert m == ((ALGEBRA.rank("u"), 1), (ALGEBRA.rank("v"), 1))
        assert ALGEBRA.canonical_monomial([("u", 1), ("u", 1)]) == (0, None)

    def test_canonical_monomial_is_idempotent(self):
        _, m = ALGEBRA.canonical_monomial([("a", 2), ("v", 1), ("u", 1), ("b", 1)])
        assert ALGEBRA.canonical_monomial(list(m)) == (1, m)

    def test_unknown_generator(self):
        with pytest.raises(AlgebraError):
            ALGEBRA.gen("w")

    def test_duplicate_generators(self):
        with pytest.raises(AlgebraError):
            GradedAlgebra([Generator("a", 0), Generator("a", 1)])

    def test_monomials_respect_bounds(self):
        table = ALGEBRA.monomials(3, degree_range=(-2, 0))
        for (deg, weight), ms in table.items():
            assert -2 <= deg <= 0 and weight < 3
            for m in ms:
                assert ALGEBRA.monomial_degree(m) == deg
        assert table[(0, 0)] == [UNIT]


class TestProducts:
    """Property tests for the product."""

    @settings(max_examples=50, deadline=None)
    @given(homogeneous(), homogeneous())
    def test_graded_commutativity(self, x, y):
        (p, dp), (q, dq) = x, y
        sign = -1 if (dp * dq) % 2 else 1
        assert p * q == (q * p).scale(sign)

    @settings(max_examples=40, deadline=None)
    @given(polynomials(), polynomials(), polynomials())
    def test_associativity(self, p, q, r):
        assert (p * q) * r == p * (q * r)

    def test_truncated_product(self):
        a = ALGEBRA.gen("a")
        assert poly_multiply(a, a, max_weight=2).is_zero()
        assert poly_multiply(a, ALGEBRA.one(), max_weight=2) == a

    def test_format(self):
        p = ALGEBRA.gen("a") * ALGEBRA.gen("a") - ALGEBRA.gen("u").scale(Fraction(1, 2))
        assert p.format() == "-1/2*u + a^2"


class TestMaps:
    """Test substitutions and derivations."""

    def test_substitute_is_multiplicative(self):
        u, v, a = ALGEBRA.gen("u"), ALGEBRA.gen("v"), ALGEBRA.gen("a")
        swap = {"u": v, "v": u}
        assert substitute(u * v * a, swap) == v * u * a

    def test_inhomogeneous_image_rejected(self):
        with pytest.raises(AlgebraError):
            substitute(ALGEBRA.gen("u"), {"u": ALGEBRA.gen("a")})

    def test_derivation_on_exterior_algebra(self):
        exterior = GradedAlgebra([Generator(f"e{i}", -1) for i in range(3)], "lambda")
        images = {r: exterior.one() for r in range(3)}
        e0, e1, e2 = (exterior.gen(f"e{i}") for i in range(3))
        assert apply_derivation(e0 * e1, images, 1) == e1 - e0
        once = apply_derivation(e0 * e1 * e2, images, 1)
        assert apply_derivation(once, images, 1).is_zero()
