"""
Tests for simplicial module families, their normalizations, the K-functor and
the Eilenberg-Zilber comparison.
"""

from fractions import Fraction

import pytest

from dmc_checker.complexes import check_differential, total_cohomology_dims
from dmc_checker.errors import ComplexError
from dmc_checker.exact import SparseMatrix
from dmc_checker.phi import shifted_complex
from dmc_checker.simplex import coface, codegeneracy
from dmc_checker.simplicial import (SimplicialModuleFamily, compare_normalizations,
                                    constant_module, eilenberg_zilber_check, k_functor,
                                    k_functor_family, k_functor_map, kernel_form, normalize,
                                    quotient_form, random_family, shuffle_product_check,
                                    standard_simplex_module)


class TestFamilies:
    """Test the simplicial identities on concrete families."""

    def test_standard_simplex(self):
        A = standard_simplex_module(1, 3)
        assert [A.dim(n) for n in A.levels()] == [2, 3, 4, 5]
        assert A.check_identities().passed

    def test_constant_module(self):
        assert constant_module(2, 3).check_identities().passed

    @pytest.mark.parametrize("seed", range(5))
    def test_random_family_satisfies_identities(self, seed):
        assert random_family(seed, 3).check_identities().passed

    def test_broken_face_detected(self):
        A = standard_simplex_module(1, 2)
        faces = {n: list(ms) for n, ms in A.faces.items()}
        faces[2][0] = faces[2][1]
        broken = SimplicialModuleFamily("broken", A.basis, faces, A.degeneracies)
        verdict = broken.check_identities()
        assert not verdict.passed
        with pytest.raises(ComplexError):
            normalize(broken)


class TestNormalization:
    """Test the kernel and quotient forms of the normalized chains."""

    def test_simplex_is_contractible(self):
        N = normalize(standard_simplex_module(1, 2))
        assert check_differential(N).passed
        assert total_cohomology_dims(N) == {-1: 0, 0: 1}

    def test_forms_have_equal_dimensions(self):
        A = standard_simplex_module(2, 3)
        K, Q = kernel_form(A), quotient_form(A)
        assert K.complex.dims() == Q.complex.dims()

    def test_constant_module_normalizes_to_level_zero(self):
        N = normalize(constant_module(2, 3))
        assert [N.dim(-n) for n in range(4)] == [2, 0, 0, 0]

    @pytest.mark.parametrize("seed", range(10))
    def test_forms_agree_on_random_families(self, seed):
        assert compare_normalizations(random_family(seed, 3)).passed


class TestKFunctor:
    """Test the K-functor of a positive complex."""

    @pytest.mark.parametrize("n", range(3))
    def test_two_realizations_agree(self, abelian2, n):
        value = k_functor(shifted_complex(abelian2), n)
        assert value.verdict.passed
        assert len(value.cocycles) == value.dim

    @pytest.mark.parametrize("theta", [coface(1, 0), coface(2, 1), codegeneracy(1, 0)])
    def test_naturality(self, abelian2, theta):
        _, _, verdict = k_functor_map(shifted_complex(abelian2), theta)
        assert verdict.passed

    def test_family_is_simplicial(self, abelian2):
        family = k_functor_family(shifted_complex(abelian2), 2)
        assert family.check_identities().passed


class TestEilenbergZilber:
    """Test the Alexander-Whitney and shuffle maps."""

    def test_simplex_times_simplex(self):
        verdict = eilenberg_zilber_check(standard_simplex_module(1, 2),
                                         standard_simplex_module(1, 2))
        assert verdict.passed, verdict.witness

    def test_random_factors(self):
        verdict = eilenberg_zilber_check(random_family(3, 2), random_family(7, 2))
        assert verdict.passed, verdict.witness

    def test_identity_shapes(self):
        A = constant_module(1, 1)
        assert A.face(1, 0) == SparseMatrix.identity(1)


def constant_algebra(labels, table, levels=1):
    """Constant family on ``labels`` (index 0 is the unit) with products from ``table``.

    ``table[(i, j)]`` is the product of basis elements ``i <= j``; missing pairs are zero.
    """
    const = constant_module(len(labels), levels)
    basis = {n: [(w, lbl) for w, lbl in labels] for n in range(levels + 1)}

    def product(n, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                if i == 0 or j == 0:
                    terms = {i + j: Fraction(1)}
                else:
                    terms = table.get((min(i, j), max(i, j)), {})
                for k, c in terms.items():
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return {k: c for k, c in out.items() if c}

    return SimplicialModuleFamily("const-algebra", basis, const.faces, const.degeneracies,
                                  product, lambda n: {0: Fraction(1)})


LABELS = [(0, "1"), (1, "p"), (1, "q"), (1, "u"), (2, "v"), (3, "t")]


class TestShuffleProduct:
    """Test the algebra axioms on normalized chains."""

    def test_associative_constant_algebra(self):
        # u^2 = v, u^3 = t: truncated polynomials in u
        A = constant_algebra(LABELS, {(3, 3): {4: Fraction(1)}, (3, 4): {5: Fraction(1)}})
        verdict = shuffle_product_check(A)
        assert verdict.passed, verdict.witness

    def test_non_associativity_deep_in_the_basis(self):
        # (u u) v = t but u (u v) = 0; only u, v, t are involved
        A = constant_algebra(LABELS, {(3, 3): {4: Fraction(1)}, (4, 4): {5: Fraction(1)}})
        verdict = shuffle_product_check(A)
        assert not verdict.passed
        assert verdict.witness == "associativity: (u * u) * v"
