"""
Tests for truncated complexes, chain maps and weight filtrations.
"""

import pytest

from dmc_checker.complexes import (ChainMap, TruncatedComplex, check_differential,
                                   cohomology_dims, euler_characteristic, graded_piece,
                                   identity_map, induced_cohomology_map, quotient_by_weight,
                                   restrict_chain_map, stable_cohomology_dims,
                                   total_cohomology_dims)
from dmc_checker.errors import ComplexError
from dmc_checker.exact import SparseMatrix


def two_term(entry=1):
    """``a (w=1) -> b (w=1)`` plus an isolated ``c`` of weight 2 in degree 1."""
    basis = {0: [(1, "a")], 1: [(1, "b"), (2, "c")]}
    d = {0: SparseMatrix(2, 1, {(0, 0): entry})}
    return TruncatedComplex("two-term", basis, d)


def filtered():
    """``a (w=1) -> b (w=2)``: the differential raises weight."""
    basis = {0: [(1, "a")], 1: [(2, "b")]}
    return TruncatedComplex("filtered", basis, {0: SparseMatrix(1, 1, {(0, 0): 1})})


class TestTruncatedComplex:
    """Test construction and cohomology."""

    def test_shape_is_checked(self):
        with pytest.raises(ComplexError):
            TruncatedComplex("bad", {0: [(0, "a")], 1: [(0, "b")]}, {0: SparseMatrix(2, 1)})

    def test_weight_lowering_rejected(self):
        with pytest.raises(ComplexError):
            TruncatedComplex("bad", {0: [(2, "a")], 1: [(1, "b")]},
                             {0: SparseMatrix(1, 1, {(0, 0): 1})})

    def test_cohomology(self):
        c = two_term()
        assert total_cohomology_dims(c) == {0: 0, 1: 1}
        assert cohomology_dims(c) == {(0, 1): 0, (1, 1): 0, (1, 2): 1}
        assert total_cohomology_dims(two_term(0)) == {0: 1, 1: 2}

    def test_edge_degree_without_cohomology(self):
        c = TruncatedComplex("open", {0: [(0, "a")], 1: [(0, "b")]}, {},
                             lower_bounded=False)
        assert c.cohomology_degrees() == [1]
        with pytest.raises(ComplexError):
            total_cohomology_dims(c, [0])

    def test_d_squared(self):
        basis = {0: [(0, "a")], 1: [(0, "b")], 2: [(0, "c")]}
        d = {0: SparseMatrix(1, 1, {(0, 0): 1}), 1: SparseMatrix(1, 1, {(0, 0): 1})}
        verdict = check_differential(TruncatedComplex("bad", basis, d))
        assert not verdict.passed
        assert verdict.details["degree"] == 0

    def test_euler_characteristic(self):
        c = two_term()
        assert euler_characteristic(c, 1, [0, 1]) == 0
        assert euler_characteristic(c, 2, [0, 1]) == -1


class TestFiltration:
    """Test quotients, graded pieces and stable cohomology."""

    def test_quotient_drops_high_weight(self):
        q = quotient_by_weight(filtered(), 2)
        assert q.dim(1) == 0
        assert total_cohomology_dims(q) == {0: 1, 1: 0}

    def test_graded_piece_strips_weight_raising_part(self):
        g = graded_piece(filtered(), 1)
        assert g.dim(0) == 1 and g.dim(1) == 0
        assert total_cohomology_dims(graded_piece(filtered(), 2)) == {0: 0, 1: 1}

    def test_stable_cohomology_removes_truncation_classes(self):
        # a is a cocycle only because the quotient cuts off its boundary.
        assert cohomology_dims(quotient_by_weight(filtered(), 2)) == {(0, 1): 1}
        assert stable_cohomology_dims(filtered(), 2) == {(0, 1): 0}


class TestChainMaps:
    """Test chain-map verification and induced maps."""

    def test_identity_is_iso(self):
        rows = induced_cohomology_map(identity_map(two_term()))
        assert all(r.verdict == "iso" for r in rows)

    def test_failure_witness(self):
        c = two_term()
        broken = ChainMap(c, c, {0: SparseMatrix.identity(1), 1: SparseMatrix(2, 2)})
        verdict = broken.check()
        assert not verdict.passed
        assert verdict.details["degree"] == 0
        with pytest.raises(ComplexError):
            induced_cohomology_map(broken)

    def test_zero_map_on_cohomology(self):
        c = two_term()
        zero = ChainMap(c, c, {0: SparseMatrix(1, 1), 1: SparseMatrix(2, 2)})
        rows = induced_cohomology_map(zero, by_weight=False)
        assert [(r.degree, r.verdict) for r in rows] == [(0, "iso"), (1, "neither")]

    def test_restriction_to_graded_piece(self):
        c = filtered()
        f = identity_map(c)
        g = graded_piece(c, 2)
        restricted = restrict_chain_map(f, g, g, weight=2)
        assert restricted.check().passed
        assert restricted.at(1) == SparseMatrix.identity(1)
        assert f.respects_filtration()
