"""Exact rational scalars and sparse linear algebra.

Every rank, kernel and solvability question in the package reduces to
:func:`row_reduce`. Elimination is fraction-free on integer-scaled rows with a
first-nonzero pivoting rule, so kernels are reproducible run to run.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from .errors import SpecFormatError

LOGGER = logging.getLogger(__name__)

_SCALAR_RE = re.compile(r"^-?\d+(/\d+)?$")

Scalar = Fraction
Vector = Dict[int, Fraction]


def parse_scalar(literal: Union[str, int]) -> Fraction:
    """Parse a rational literal ``"p"`` or ``"p/q"``; floats are rejected."""
    if isinstance(literal, bool) or not isinstance(literal, (str, int)):
        raise SpecFormatError(f"coefficient must be a 'p/q' string, got {literal!r}")
    if isinstance(literal, int):
        return Fraction(literal)
    text = literal.strip()
    if not _SCALAR_RE.match(text):
        raise SpecFormatError(f"not a rational literal: {literal!r}")
    if re.search(r"/0+$", text):
        raise SpecFormatError(f"zero denominator in {literal!r}")
    return Fraction(text)


def format_scalar(value: Fraction) -> str:
    """Render a rational as ``"p"`` or ``"p/q"``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class SparseMatrix:
    """Immutable sparse matrix over the rationals.

    Entries are stored per row; explicit zeros are never kept.
    """

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int,
                 entries: Optional[Mapping[Tuple[int, int], Union[Fraction, int]]] = None):
        self.rows = rows
        self.cols = cols
        table: Dict[int, Dict[int, Fraction]] = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            value = Fraction(value)
            if value:
                table.setdefault(r, {})[c] = value
        self._rows = table

    @classmethod
    def _from_rows(cls, rows: int, cols: int, table: Dict[int, Dict[int, Fraction]]):
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._rows = {r: dict(row) for r, row in table.items() if row}
        return m

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[Union[Fraction, int]]],
                   cols: Optional[int] = None) -> "SparseMatrix":
        n_rows = len(data)
        n_cols = cols if cols is not None else (len(data[0]) if data else 0)
        return cls(n_rows, n_cols, {(r, c): v for r, row in enumerate(data)
                                    for c, v in enumerate(row) if v})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, Fraction]]) -> "SparseMatrix":
        """Build a matrix whose ``j``-th column is the sparse vector ``columns[j]``."""
        return cls(rows, len(columns), {(r, c): v for c, col in enumerate(columns)
                                        for r, v in col.items()})

    @property
    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return {(r, c): v for r, row in self._rows.items() for c, v in row.items()}

    def row(self, r: int) -> Dict[int, Fraction]:
        return dict(self._rows.get(r, {}))

    def column(self, c: int) -> Vector:
        return {r: row[c] for r, row in self._rows.items() if c in row}

    def columns(self) -> List[Vector]:
        cols: List[Vector] = [{} for _ in range(self.cols)]
        for r, row in self._rows.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        r, c = key
        return self._rows.get(r, {}).get(c, Fraction(0))

    def is_zero(self) -> bool:
        return not self._rows

    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def transpose(self) -> "SparseMatrix":
        table: Dict[int, Dict[int, Fraction]] = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                table.setdefault(c, {})[r] = v
        return SparseMatrix._from_rows(self.cols, self.rows, table)

    def apply(self, vector: Mapping[int, Fraction]) -> Vector:
        """Matrix times sparse column vector."""
        out: Vector = {}
        for r, row in self._rows.items():
            acc = Fraction(0)
            for c, v in row.items():
                x = vector.get(c)
                if x:
                    acc += v * x
            if acc:
                out[r] = acc
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        table: Dict[int, Dict[int, Fraction]] = {}
        for r, row in self._rows.items():
            acc: Dict[int, Fraction] = {}
            for k, a in row.items():
                for c, b in other._rows.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + a * b
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                table[r] = acc
        return SparseMatrix._from_rows(self.rows, other.cols, table)

    def _combine(self, other: "SparseMatrix", sign: int) -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        table = {r: dict(row) for r, row in self._rows.items()}
        for r, row in other._rows.items():
            target = table.setdefault(r, {})
            for c, v in row.items():
                s = target.get(c, 0) + sign * v
                if s:
                    target[c] = s
                else:
                    target.pop(c, None)
        return SparseMatrix._from_rows(self.rows, self.cols, table)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def scale(self, factor: Union[Fraction, int]) -> "SparseMatrix":
        factor = Fraction(factor)
        if not factor:
            return SparseMatrix(self.rows, self.cols)
        return SparseMatrix._from_rows(
            self.rows, self.cols,
            {r: {c: v * factor for c, v in row.items()} for r, row in self._rows.items()})

    def select(self, rows: Optional[Sequence[int]] = None,
               cols: Optional[Sequence[int]] = None) -> "SparseMatrix":
        """Submatrix on the given (ordered) row and column index lists."""
        rows = list(range(self.rows)) if rows is None else list(rows)
        cols = list(range(self.cols)) if cols is None else list(cols)
        col_pos = {c: j for j, c in enumerate(cols)}
        table: Dict[int, Dict[int, Fraction]] = {}
        for i, r in enumerate(rows):
            row = {col_pos[c]: v for c, v in self._rows.get(r, {}).items() if c in col_pos}
            if row:
                table[i] = row
        return SparseMatrix._from_rows(len(rows), len(cols), table)

    @staticmethod
    def vstack(blocks: Sequence["SparseMatrix"], cols: Optional[int] = None) -> "SparseMatrix":
        n_cols = cols if cols is not None else (blocks[0].cols if blocks else 0)
        table: Dict[int, Dict[int, Fraction]] = {}
        offset = 0
        for block in blocks:
            if block.cols != n_cols:
                raise ValueError("vstack column mismatch")
            for r, row in block._rows.items():
                table[offset + r] = dict(row)
            offset += block.rows
        return SparseMatrix._from_rows(offset, n_cols, table)

    @staticmethod
    def hstack(blocks: Sequence["SparseMatrix"], rows: Optional[int] = None) -> "SparseMatrix":
        return SparseMatrix.vstack([b.transpose() for b in blocks], rows).transpose()

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        """Kronecker product; row ``(r, s)`` sits at ``r * other.rows + s``."""
        table: Dict[int, Dict[int, Fraction]] = {}
        for r, row in self._rows.items():
            for s, other_row in other._rows.items():
                table[r * other.rows + s] = {c * other.cols + d: a * b
                                             for c, a in row.items()
                                             for d, b in other_row.items()}
        return SparseMatrix._from_rows(self.rows * other.rows, self.cols * other.cols, table)

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                dense[r][c] = v
        return dense

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    def to_json(self) -> Dict[str, object]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, format_scalar(v)] for (r, c), v in sorted(self.entries.items())],
        }


@dataclass
class Echelon:
    """Reduced row echelon data of a matrix.

    ``pivots[i]`` is the pivot column of reduced row ``reduced[i]`` (pivot entry 1).
    """

    cols: int
    pivots: List[int] = field(default_factory=list)
    reduced: List[Dict[int, Fraction]] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free_columns(self) -> List[int]:
        pivot_set = set(self.pivots)
        return [c for c in range(self.cols) if c not in pivot_set]

    def kernel(self) -> List[Vector]:
        """Kernel basis; the vector for free column ``f`` has entry 1 at ``f``."""
        basis: List[Vector] = []
        for f in self.free_columns:
            v: Vector = {f: Fraction(1)}
            for p, row in zip(self.pivots, self.reduced):
                x = row.get(f)
                if x:
                    v[p] = -x
            basis.append(v)
        return basis


def _integer_row(row: Mapping[int, Fraction]) -> Dict[int, int]:
    scale = 1
    for v in row.values():
        d = Fraction(v).denominator
        scale = scale * d // gcd(scale, d)
    ints = {c: int(Fraction(v) * scale) for c, v in row.items() if v}
    return _primitive(ints)


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def row_reduce(m: SparseMatrix) -> Echelon:
    """Fraction-free forward elimination followed by exact back substitution."""
    pending: List[Dict[int, int]] = [_integer_row(m.row(r)) for r in range(m.rows)]
    pending = [row for row in pending if row]
    echelon_rows: List[Dict[int, int]] = []
    pivots: List[int] = []
    for col in range(m.cols):
        if not pending:
            break
        pivot_index = next((i for i, row in enumerate(pending) if row.get(col)), None)
        if pivot_index is None:
            continue
        pivot_row = pending.pop(pivot_index)
        p = pivot_row[col]
        survivors: List[Dict[int, int]] = []
        for row in pending:
            a = row.get(col)
            if a:
                combined: Dict[int, int] = {}
                for c, v in row.items():
                    combined[c] = p * v
                for c, v in pivot_row.items():
                    s = combined.get(c, 0) - a * v
                    if s:
                        combined[c] = s
                    else:
                        combined.pop(c, None)
                row = _primitive(combined)
            if row:
                survivors.append(row)
        pending = survivors
        echelon_rows.append(pivot_row)
        pivots.append(col)

    reduced: List[Dict[int, Fraction]] = []
    for col, row in zip(pivots, echelon_rows):
        lead = row[col]
        reduced.append({c: Fraction(v, lead) for c, v in row.items()})
    for i in range(len(reduced) - 1, -1, -1):
        col = pivots[i]
        for j in range(i):
            factor = reduced[j].get(col)
            if factor:
                target = reduced[j]
                for c, v in reduced[i].items():
                    s = target.get(c, 0) - factor * v
                    if s:
                        target[c] = s
                    else:
                        target.pop(c, None)
    LOGGER.debug("row_reduce %dx%d -> rank %d", m.rows, m.cols, len(pivots))
    return Echelon(cols=m.cols, pivots=pivots, reduced=reduced)


def rank_kernel(m: SparseMatrix) -> Tuple[int, List[Vector]]:
    """Exact rank and a deterministic kernel basis of ``m``."""
    echelon = row_reduce(m)
    return echelon.rank, echelon.kernel()


def rank(m: SparseMatrix) -> int:
    return row_reduce(m).rank


def solve(m: SparseMatrix, rhs: Mapping[int, Fraction]) -> Optional[Vector]:
    """Return some ``x`` with ``m x = rhs``, or ``None`` when no solution exists."""
    augmented = SparseMatrix(m.rows, m.cols + 1,
                             {**m.entries, **{(r, m.cols): v for r, v in rhs.items() if v}})
    echelon = row_reduce(augmented)
    if echelon.pivots and echelon.pivots[-1] == m.cols:
        return None
    x: Vector = {}
    for p, row in zip(echelon.pivots, echelon.reduced):
        v = row.get(m.cols)
        if v:
            x[p] = v
    return x


def solve_columns(m: SparseMatrix, targets: Sequence[Mapping[int, Fraction]]
                  ) -> Optional[SparseMatrix]:
    """Solve ``m X = T`` column by column; ``None`` if some column is unreachable."""
    columns = []
    for t in targets:
        x = solve(m, t)
        if x is None:
            return None
        columns.append(x)
    return SparseMatrix.from_columns(m.cols, columns)


def sympy_rank(m: SparseMatrix) -> int:
    """Dense rank computed by sympy; used as an independent oracle."""
    if m.rows == 0 or m.cols == 0:
        return 0
    dense = [[sympy.Rational(v.numerator, v.denominator) for v in row] for row in m.to_dense()]
    return sympy.Matrix(dense).rank()


def vector_add(u: Mapping[int, Fraction], v: Mapping[int, Fraction],
               factor: Union[Fraction, int] = 1) -> Vector:
    out = dict(u)
    for k, x in v.items():
        s = out.get(k, 0) + factor * x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def span_contains(generators: Iterable[Mapping[int, Fraction]], dim: int,
                  targets: Iterable[Mapping[int, Fraction]]) -> bool:
    """Whether every target vector lies in the span of the generators."""
    gens = list(generators)
    base = rank(SparseMatrix.from_columns(dim, gens))
    return all(rank(SparseMatrix.from_columns(dim, gens + [dict(t)])) == base for t in targets)
