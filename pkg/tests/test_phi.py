"""
Tests for the comparison map from the CE model to normalized functions on the
Maurer-Cartan scheme.
"""

from fractions import Fraction

import pytest

from dmc_checker.errors import AlgebraError, ComplexError
from dmc_checker.lie import load_structure
from dmc_checker.phi import (abelian_dold_kan_check, chain_map_check, free_hilbert,
                             freeness_check, freeness_hilbert, graded_independence_check,
                             phi_generator, phi_map, quasi_iso_report, random_abelian,
                             shifted_complex)
from dmc_checker.simplicial import SimplicialModuleFamily, constant_module

POSITIVE_FIXTURES = ["abelian2", "odd-square", "heis", "koszul-x2"]


def total_row(report, degree):
    return next(r for r in report.rows if r.degree == degree and r.weight is None)


def truncated_polynomials(nilpotency, levels):
    """Constant simplicial algebra Q[x]/(x^nilpotency), x of weight 1."""
    const = constant_module(nilpotency, levels)
    basis = {n: [(j, f"x^{j}") for j in range(nilpotency)] for n in range(levels + 1)}

    def product(n, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                if i + j < nilpotency:
                    out[i + j] = out.get(i + j, Fraction(0)) + a * b
        return {k: c for k, c in out.items() if c}

    return SimplicialModuleFamily(f"Q[x]/(x^{nilpotency})", basis, const.faces,
                                  const.degeneracies, product, lambda n: {0: Fraction(1)})


class TestGenerators:
    """Test the images of single generators."""

    def test_degree_one_lands_on_level_zero(self, odd_square):
        image = phi_generator(odd_square, "x")
        assert image.level == 0
        assert image.function.format() == "x[]"
        assert image.boundary.is_zero()

    def test_images_are_normalized(self, odd_square):
        image = phi_generator(odd_square, "y")
        assert image.level == 1
        assert image.normalized
        assert image.to_json()["function"] == "y[0]"

    def test_level_beyond_storage(self, odd_square):
        with pytest.raises(ComplexError):
            phi_generator(odd_square, "y", levels=0)


class TestChainMap:
    """Test that Phi commutes with the differentials."""

    @pytest.mark.parametrize("name", POSITIVE_FIXTURES)
    def test_fixtures(self, name):
        verdict = chain_map_check(phi_map(load_structure(f"fixture:{name}"), 1, 3))
        assert verdict.passed, verdict.witness

    def test_vertex_frame(self, heis):
        assert chain_map_check(phi_map(heis, 1, 3, frame="vertex")).passed

    def test_wrong_bracket_sign_is_caught(self, odd_square):
        phi = phi_map(odd_square, 1, 3, arity_signs={2: -1})
        verdict = phi.chain_map.check()
        assert not verdict.passed
        assert verdict.details["degree"] == -1
        assert verdict.details["weight"] == 2
        assert verdict.details["source_weight"] == 1
        assert "t[y]" in verdict.witness
        assert verdict.witness.startswith("degree -1, weight 2")

    def test_unit_and_generators(self, heis):
        phi = phi_map(heis, 1, 2)
        data = phi.to_json()
        assert data["levels"] == 2
        assert set(data["generators"]) == {"t[x1]", "t[x2]", "t[y]"}

    def test_non_positive_rejected(self):
        with pytest.raises(AlgebraError):
            phi_map(load_structure("fixture:harrison-d2"), 1, 2)

    @pytest.mark.slow
    def test_harrison_truncation(self, harrison_positive):
        assert chain_map_check(phi_map(harrison_positive, 1, 2)).passed


class TestQuasiIsomorphism:
    """Test Phi on cohomology."""

    def test_abelian(self, abelian2):
        report = quasi_iso_report(abelian2, 1, 3)
        assert report.verdict.passed, report.verdict.witness
        assert total_row(report, 0).dim_source == 1

    def test_odd_square(self, odd_square):
        report = quasi_iso_report(odd_square, 1, 3)
        assert report.verdict.passed, report.verdict.witness
        row = total_row(report, 0)
        assert (row.dim_source, row.dim_target, row.verdict) == (2, 2, "iso")

    def test_heisenberg_weights(self, heis):
        report = quasi_iso_report(heis, 1, 3)
        assert report.verdict.passed, report.verdict.witness
        by_weight = {r.weight: r.dim_source for r in report.rows
                     if r.degree == 0 and r.weight is not None}
        assert by_weight == {0: 1, 1: 2, 2: 2}

    def test_stable_dims_can_be_skipped(self, odd_square):
        report = quasi_iso_report(odd_square, 1, 2, stable=False)
        assert report.stable == {}
        assert "stable_cohomology" not in [c["name"] for c in report.verdict.details["checks"]]

    def test_json(self, abelian2):
        data = quasi_iso_report(abelian2, 1, 2).to_json()
        assert data["fixture"] == "abelian2"
        assert data["bounds"] == {"depth": 1, "weight": 2}
        assert all(row["induced"] == "iso" for row in data["cohomology"])


class TestIndependence:
    """Faces, degeneracies and products do not see the brackets."""

    @pytest.mark.parametrize("name", ["odd-square", "heis"])
    def test_brackets_do_not_enter(self, name):
        verdict = graded_independence_check(load_structure(f"fixture:{name}"), 2, 2)
        assert verdict.passed, verdict.witness


class TestFreeness:
    """Test the Hilbert-function comparison with a free algebra."""

    def test_polynomial_generator(self):
        assert free_hilbert({(0, 1): 1}, 2, 3) == {(0, 0): 1, (0, 1): 1, (0, 2): 1}

    def test_exterior_generators(self):
        assert free_hilbert({(1, 1): 2}, 2, 3) == {(0, 0): 1, (1, 1): 2, (2, 2): 1}

    def test_weight_zero_generator_rejected(self):
        with pytest.raises(AlgebraError):
            free_hilbert({(0, 0): 1}, 2, 3)

    @pytest.mark.parametrize("name", ["abelian2", "odd-square"])
    def test_normalized_functions_are_free(self, name):
        report = freeness_hilbert(load_structure(f"fixture:{name}"), 2, 3)
        assert report.verdict.passed, report.verdict.witness
        assert report.normalized[(0, 0)] == 1

    def test_truncation_beyond_window_is_free(self):
        report = freeness_check(truncated_polynomials(3, 1), 3)
        assert report.verdict.passed, report.verdict.witness
        assert report.generators == {(0, 1): 1}

    def test_square_zero_algebra_is_not_free(self):
        report = freeness_check(truncated_polynomials(2, 1), 3)
        assert not report.verdict.passed
        assert report.generators == {(0, 1): 1}
        assert report.free[(0, 2)] == 1
        assert (0, 2) not in report.normalized
        assert report.verdict.witness.startswith("level 0, weight 2")


class TestDoldKan:
    """Test the abelian comparison with the K-functor."""

    def test_shifted_complex(self, abelian2):
        Z = shifted_complex(abelian2)
        assert Z.degrees() == [0, 1]
        assert Z.d(0).entries

    def test_abelian2(self, abelian2):
        verdict = abelian_dold_kan_check(abelian2, 2)
        assert verdict.passed, verdict.witness

    @pytest.mark.parametrize("seed", range(5))
    def test_random_abelian(self, seed):
        L = random_abelian(seed)
        assert L.is_abelian()
        verdict = abelian_dold_kan_check(L, 2)
        assert verdict.passed, verdict.witness

    def test_requires_abelian(self, odd_square):
        with pytest.raises(AlgebraError):
            abelian_dold_kan_check(odd_square, 1)
