"""
Tests for curvature, the Bianchi identity and the Chevalley-Eilenberg model.
"""

from fractions import Fraction

import pytest

from dmc_checker.chevalley import bianchi_check, ce_model, coordinate, curvature
from dmc_checker.complexes import check_differential, total_cohomology_dims
from dmc_checker.errors import AlgebraError, ComplexError
from dmc_checker.lie import load_structure

POSITIVE_FIXTURES = ["abelian2", "odd-square", "heis", "koszul-x2"]


class TestCurvature:
    """Test ``F(mu)`` on the bundled fixtures."""

    def test_odd_square(self, odd_square):
        F = curvature(odd_square)
        x = F.algebra.gen("t[x]")
        assert F.component("y") == (x * x).scale(Fraction(1, 2))

    def test_koszul_bracket_doubles(self, koszul_x2):
        F = curvature(koszul_x2)
        x = F.algebra.gen("t[x]")
        assert F.component("y") == x * x

    def test_heisenberg(self, heis):
        F = curvature(heis)
        x1, x2 = F.algebra.gen("t[x1]"), F.algebra.gen("t[x2]")
        assert F.component("y") == x1 * x2

    def test_abelian_curvature_is_linear(self, abelian2):
        F = curvature(abelian2)
        assert F.component("y") == F.algebra.gen("t[x]")

    def test_non_positive_structure_rejected(self):
        with pytest.raises(AlgebraError):
            curvature(load_structure("fixture:harrison-d2"))

    @pytest.mark.parametrize("name", POSITIVE_FIXTURES)
    def test_bianchi(self, name):
        assert bianchi_check(load_structure(f"fixture:{name}")).passed


class TestChevalleyEilenberg:
    """Test the truncated CE complex."""

    def test_odd_square_dimensions(self, odd_square):
        ce = ce_model(odd_square, 3, 1)
        assert {n: ce.complex.dim(n) for n in ce.complex.degrees()} == {-2: 0, -1: 2, 0: 3}

    def test_odd_square_generator_differential(self, odd_square):
        ce = ce_model(odd_square, 3, 1)
        x = ce.algebra.gen(coordinate("x"))
        assert ce.generator_differential("y") == (x * x).scale(Fraction(-1, 2))
        assert ce.generator_differential("x").is_zero()

    def test_lowest_degree_carries_no_cohomology(self, odd_square):
        c = ce_model(odd_square, 3, 1).complex
        assert c.cohomology_degrees() == [-1, 0]
        assert total_cohomology_dims(c)[0] == 2

    @pytest.mark.parametrize("name", POSITIVE_FIXTURES)
    def test_d_squared_vanishes(self, name):
        ce = ce_model(load_structure(f"fixture:{name}"), 4, 3)
        assert check_differential(ce.complex).passed

    def test_d_squared_on_harrison_truncation(self, harrison_positive):
        assert check_differential(ce_model(harrison_positive, 3, 1).complex).passed

    def test_bounds_validated(self, odd_square):
        with pytest.raises(ComplexError):
            ce_model(odd_square, 0, 1)

    def test_wrong_sign_still_squares_to_zero(self, odd_square):
        ce = ce_model(odd_square, 3, 1, arity_signs={2: -1})
        x = ce.algebra.gen(coordinate("x"))
        assert ce.generator_differential("y") == (x * x).scale(Fraction(1, 2))
