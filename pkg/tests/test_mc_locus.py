"""
Tests for the cosimplicial Maurer-Cartan scheme and its function algebras.
"""

import pytest

from dmc_checker.errors import ComplexError
from dmc_checker.lie import load_structure
from dmc_checker.mc_locus import (DIFFERENCE, VERTEX, MaurerCartanTower, classical_locus,
                                  cosimplicial_scheme_check, embedding_check,
                                  explicit_formula_oracle, frame_change, frame_change_check,
                                  functions_algebra, low_level_oracle, matching_check,
                                  mc_coordinates, structure_map)
from dmc_checker.simplex import codegeneracy, coface
from dmc_checker.simplicial import compare_normalizations, shuffle_product_check

POSITIVE_FIXTURES = ["abelian2", "odd-square", "heis", "koszul-x2"]


class TestCoordinates:
    """Test the coordinate blocks of each level."""

    def test_blocks(self, odd_square):
        coords = mc_coordinates(odd_square, 2)
        assert coords.names == ["x[]", "y[0]", "y[1]"]
        assert coords.dim == 3
        assert coords.block_dims() == {(): 1, (0,): 1, (1,): 1}

    def test_blocks_stop_at_top_degree(self, heis):
        coords = mc_coordinates(heis, 3)
        assert max(len(S) for S in coords.block_dims()) == 1

    def test_unknown_frame(self, odd_square):
        with pytest.raises(ValueError):
            mc_coordinates(odd_square, 1, "polar")

    def test_negative_level(self, odd_square):
        with pytest.raises(ComplexError):
            mc_coordinates(odd_square, -1)


class TestStructureMaps:
    """Test the structure maps of ``MC^*(L)``."""

    def test_odd_square_d0(self, odd_square):
        d0 = structure_map(odd_square, coface(1, 0), VERTEX)
        assert d0.image("y[0]").format() == "-1/2*x[]^2"
        assert d0.image("x[]").format() == "x[]"

    def test_codegeneracy_is_linear(self, odd_square):
        s0 = structure_map(odd_square, codegeneracy(0, 0))
        assert s0.is_linear()
        assert s0.linear_matrix().rows == 1

    def test_abelian_maps_are_linear(self, abelian2):
        tower = MaurerCartanTower(abelian2)
        assert tower.structure_map(coface(2, 0)).is_linear()

    @pytest.mark.parametrize("name", POSITIVE_FIXTURES)
    def test_embedding_is_maurer_cartan(self, name):
        assert embedding_check(load_structure(f"fixture:{name}"), 2).passed

    @pytest.mark.parametrize("frame", [DIFFERENCE, VERTEX])
    def test_cosimplicial_identities(self, odd_square, frame):
        verdict = cosimplicial_scheme_check(odd_square, 2, frame)
        assert verdict.passed, verdict.witness

    def test_cosimplicial_identities_heisenberg(self, heis):
        assert cosimplicial_scheme_check(heis, 2).passed


class TestFrames:
    """Test the change between difference and vertex coordinates."""

    @pytest.mark.parametrize("n", range(4))
    def test_round_trip(self, heis, n):
        assert frame_change_check(heis, n).passed

    def test_level_zero_is_identity(self, odd_square):
        change = frame_change(odd_square, 0)
        assert change.image("x[]").format() == "x[]"


class TestOracles:
    """Test the closed-form formulas and the low-level checks."""

    @pytest.mark.parametrize("name", POSITIVE_FIXTURES)
    def test_low_level(self, name):
        verdict = low_level_oracle(load_structure(f"fixture:{name}"))
        assert verdict.passed
        assert verdict.informational

    def test_explicit_formulas_are_informational(self, odd_square):
        verdict = explicit_formula_oracle(odd_square, 2)
        assert verdict.informational
        names = [c["name"] for c in verdict.details["checks"]]
        assert names[:3] == ["grouplike", "face", "d0_formula"]


class TestMatching:
    """Test surjectivity onto the matching objects."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_abelian(self, abelian2, n):
        verdict = matching_check(abelian2, n)
        assert verdict.passed
        assert verdict.details["rank"] == verdict.details["matching_dim"]

    def test_heisenberg(self, heis):
        assert matching_check(heis, 2).passed

    def test_level_zero_rejected(self, abelian2):
        with pytest.raises(ComplexError):
            matching_check(abelian2, 0)


class TestClassicalLocus:
    """Test the two descriptions of the classical Maurer-Cartan locus."""

    def test_odd_square(self, odd_square):
        locus = classical_locus(odd_square)
        assert locus.verdict.passed
        assert [p.format() for p in locus.curvature_generators] == ["1/2*x[]^2"]

    def test_heisenberg(self, heis):
        locus = classical_locus(heis)
        assert locus.verdict.passed
        assert len(locus.equalizer_generators) == 1


class TestFunctionsAlgebra:
    """Test ``O(MC^*(L))`` as a simplicial commutative algebra."""

    def test_identities(self, odd_square):
        A = functions_algebra(odd_square, 2, 2)
        assert A.check_identities().passed
        assert compare_normalizations(A).passed

    def test_shuffle_product(self, odd_square):
        verdict = shuffle_product_check(functions_algebra(odd_square, 2, 2))
        assert verdict.passed, verdict.witness

    def test_coproduct_only_for_abelian(self, abelian2, odd_square):
        assert functions_algebra(abelian2, 1, 2).coproduct is not None
        assert functions_algebra(odd_square, 1, 2).coproduct is None

    def test_bounds(self, odd_square):
        with pytest.raises(ComplexError):
            functions_algebra(odd_square, 1, 0)
