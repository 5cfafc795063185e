"""
Tests for exact scalars and sparse linear algebra.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmc_checker.errors import SpecFormatError
from dmc_checker.exact import (SparseMatrix, _integer_row, format_scalar, parse_scalar, rank,
                               rank_kernel, solve, solve_columns, span_contains, sympy_rank,
                               vector_add)


def dense_matrices(max_size=12):
    """Small integer matrices, sparse-ish so that rank deficiency is common."""
    return st.integers(1, max_size).flatmap(
        lambda rows: st.integers(1, max_size).flatmap(
            lambda cols: st.lists(
                st.lists(st.sampled_from([0, 0, 0, 1, -1, 2, -3]), min_size=cols, max_size=cols),
                min_size=rows, max_size=rows)))


class TestScalars:
    """Test rational literal parsing."""

    def test_parse_forms(self):
        assert parse_scalar("3") == 3
        assert parse_scalar("-1/2") == Fraction(-1, 2)
        assert parse_scalar(4) == 4

    @pytest.mark.parametrize("literal", ["1.5", "1/0", "x", "", 2.0, True])
    def test_rejects_non_rationals(self, literal):
        with pytest.raises(SpecFormatError):
            parse_scalar(literal)

    def test_format(self):
        assert format_scalar(Fraction(6, 3)) == "2"
        assert format_scalar(Fraction(-3, 4)) == "-3/4"


class TestSparseMatrix:
    """Test matrix construction and arithmetic."""

    def test_zeros_are_not_stored(self):
        m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): 5})
        assert m.entries == {(1, 1): Fraction(5)}

    def test_out_of_range_entry(self):
        with pytest.raises(IndexError):
            SparseMatrix(1, 1, {(1, 0): 1})

    def test_product_and_identity(self):
        a = SparseMatrix.from_dense([[1, 2], [0, 1]])
        assert a @ SparseMatrix.identity(2) == a
        assert (a @ a).to_dense() == [[1, 4], [0, 1]]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            SparseMatrix(2, 3) @ SparseMatrix(2, 3)

    def test_columns_round_trip(self):
        a = SparseMatrix.from_dense([[1, 0, 2], [0, 3, 0]])
        assert SparseMatrix.from_columns(2, a.columns()) == a

    def test_kron_indexing(self):
        a = SparseMatrix.from_dense([[1, 2]])
        b = SparseMatrix.from_dense([[0], [1]])
        k = a.kron(b)
        assert (k.rows, k.cols) == (2, 2)
        assert k.to_dense() == [[0, 0], [1, 2]]

    def test_stacking(self):
        a = SparseMatrix.identity(2)
        assert SparseMatrix.vstack([a, a]).rows == 4
        assert SparseMatrix.hstack([a, a]).cols == 4


class TestElimination:
    """Test rank, kernels and solving."""

    def test_kernel_of_rank_one(self):
        m = SparseMatrix.from_dense([[1, 1, 1], [2, 2, 2]])
        r, kernel = rank_kernel(m)
        assert r == 1
        assert len(kernel) == 2
        for v in kernel:
            assert m.apply(v) == {}

    def test_solve(self):
        m = SparseMatrix.from_dense([[1, 1], [0, 2]])
        x = solve(m, {0: Fraction(3), 1: Fraction(4)})
        assert x == {0: Fraction(1), 1: Fraction(2)}
        assert solve(SparseMatrix.from_dense([[1], [1]]), {0: Fraction(1)}) is None

    def test_solve_columns(self):
        m = SparseMatrix.from_dense([[2, 0], [0, 4]])
        inverse = solve_columns(m, SparseMatrix.identity(2).columns())
        assert m @ inverse == SparseMatrix.identity(2)

    def test_span_contains(self):
        generators = [{0: Fraction(1), 1: Fraction(1)}]
        assert span_contains(generators, 2, [{0: Fraction(2), 1: Fraction(2)}])
        assert not span_contains(generators, 2, [{0: Fraction(1)}])

    def test_vector_add_drops_zeros(self):
        assert vector_add({0: Fraction(1)}, {0: Fraction(1)}, -1) == {}

    def test_fractional_rows_are_cleared_to_primitive_integers(self):
        row = {0: Fraction(1, 4), 1: Fraction(1, 6), 2: Fraction(3, 10)}
        assert _integer_row(row) == {0: 15, 1: 10, 2: 18}
        assert _integer_row({0: Fraction(2, 3), 1: Fraction(4, 3)}) == {0: 1, 1: 2}

    def test_rank_with_fractional_entries(self):
        m = SparseMatrix.from_dense([[Fraction(1, 2), Fraction(1, 3)],
                                     [Fraction(3, 2), Fraction(1)],
                                     [Fraction(1, 5), Fraction(-1, 7)]])
        assert rank(m) == sympy_rank(m) == 2

    @settings(max_examples=60, deadline=None)
    @given(dense_matrices())
    def test_rank_matches_dense_oracle(self, data):
        m = SparseMatrix.from_dense(data)
        assert rank(m) == sympy_rank(m)

    @settings(max_examples=40, deadline=None)
    @given(dense_matrices(8))
    def test_rank_nullity(self, data):
        m = SparseMatrix.from_dense(data)
        r, kernel = rank_kernel(m)
        assert r + len(kernel) == m.cols
        for v in kernel:
            assert m.apply(v) == {}
