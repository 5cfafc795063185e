"""Finite cochain complexes in chosen bases, with a weight filtration.

A :class:`TruncatedComplex` stores, for each cohomological degree ``n`` in a
closed window, an ordered basis of weight-homogeneous labels and the matrix
of ``d: C^n -> C^(n+1)``. Differentials never decrease weight, so the span of
basis elements of weight ``>= W`` is a subcomplex and quotients by it are
honest complexes.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ComplexError
from .exact import SparseMatrix, rank, rank_kernel
from .verdict import Verdict

LOGGER = logging.getLogger(__name__)

Basis = List[Tuple[int, str]]


@dataclass
class TruncatedComplex:
    """Cochain complex on degrees ``lo..hi`` with weight-homogeneous bases.

    ``lower_bounded``/``upper_bounded`` say whether the complex is genuinely
    zero outside the window; otherwise the edge degrees only serve as the
    source or target of a differential and carry no cohomology.
    """

    name: str
    basis: Dict[int, Basis]
    differential: Dict[int, SparseMatrix]
    lower_bounded: bool = True
    upper_bounded: bool = True
    weight_bound: Optional[int] = None

    def __post_init__(self) -> None:
        for n in self.degrees():
            self.basis.setdefault(n, [])
        for n in self.degrees()[:-1]:
            rows, cols = self.dim(n + 1), self.dim(n)
            d = self.differential.get(n)
            if d is None:
                self.differential[n] = SparseMatrix(rows, cols)
            elif (d.rows, d.cols) != (rows, cols):
                raise ComplexError(
                    f"{self.name}: d^{n} has shape {d.rows}x{d.cols}, expected {rows}x{cols}")
            else:
                self._check_weights(n, d)

    def _check_weights(self, n: int, d: SparseMatrix) -> None:
        src, tgt = self.basis[n], self.basis[n + 1]
        for (r, c) in d.entries:
            if tgt[r][0] < src[c][0]:
                raise ComplexError(
                    f"{self.name}: d^{n} lowers weight on {src[c][1]} -> {tgt[r][1]}")

    @property
    def lo(self) -> int:
        return min(self.basis) if self.basis else 0

    @property
    def hi(self) -> int:
        return max(self.basis) if self.basis else 0

    def degrees(self) -> List[int]:
        if not self.basis:
            return []
        return list(range(min(self.basis), max(self.basis) + 1))

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def weights(self) -> List[int]:
        return sorted({w for b in self.basis.values() for w, _ in b})

    def dims(self) -> Dict[Tuple[int, int], int]:
        table: Dict[Tuple[int, int], int] = {}
        for n, b in self.basis.items():
            for w, _ in b:
                table[(n, w)] = table.get((n, w), 0) + 1
        return table

    def indices(self, n: int, weight: Optional[int] = None, at_least: Optional[int] = None,
                below: Optional[int] = None) -> List[int]:
        return [i for i, (w, _) in enumerate(self.basis.get(n, []))
                if (weight is None or w == weight)
                and (at_least is None or w >= at_least)
                and (below is None or w < below)]

    def d(self, n: int) -> SparseMatrix:
        """``d^n``, with zero maps outside the stored window."""
        if n in self.differential:
            return self.differential[n]
        return SparseMatrix(self.dim(n + 1), self.dim(n))

    def has_cohomology_at(self, n: int) -> bool:
        if n not in self.basis:
            return False
        if n == self.lo and not self.lower_bounded:
            return False
        if n == self.hi and not self.upper_bounded:
            return False
        return True

    def cohomology_degrees(self) -> List[int]:
        return [n for n in self.degrees() if self.has_cohomology_at(n)]

    def to_json(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "dims": {str(n): self.dim(n) for n in self.degrees()},
            "differentials": {str(n): d.to_json() for n, d in sorted(self.differential.items())},
        }


@dataclass
class ChainMap:
    """Degree-preserving map ``source -> target``.

    ``maps[n]`` is a ``target.dim(n) x source.dim(n)`` matrix.
    """

    source: TruncatedComplex
    target: TruncatedComplex
    maps: Dict[int, SparseMatrix] = field(default_factory=dict)

    def at(self, n: int) -> SparseMatrix:
        if n in self.maps:
            return self.maps[n]
        return SparseMatrix(self.target.dim(n), self.source.dim(n))

    def check(self, degrees: Optional[Iterable[int]] = None) -> Verdict:
        """Exact commutation ``f d = d f`` on every pair of stored degrees.

        The witness names the source basis element and the weight of the
        target component where the two sides disagree.
        """
        window = sorted(set(self.source.degrees()) & set(self.target.degrees()))
        degrees = sorted(degrees) if degrees is not None else window
        for n in degrees:
            if n + 1 not in window or n not in window:
                continue
            lhs = self.at(n + 1) @ self.source.d(n)
            rhs = self.target.d(n) @ self.at(n)
            diff = lhs - rhs
            if not diff.is_zero():
                (r, c), value = min(diff.entries.items())
                source_weight, label = self.source.basis[n][c]
                w, component = self.target.basis[n + 1][r]
                return Verdict("chain_map", False,
                               f"degree {n}, weight {w}, basis element {label}",
                               {"degree": n, "weight": w, "element": label,
                                "source_weight": source_weight,
                                "target_component": component})
        return Verdict("chain_map", True)

    def respects_filtration(self) -> bool:
        for n, m in self.maps.items():
            for (r, c) in m.entries:
                if self.target.basis[n][r][0] < self.source.basis[n][c][0]:
                    return False
        return True


def check_differential(c: TruncatedComplex) -> Verdict:
    """``d o d = 0`` wherever two consecutive differentials are stored."""
    for n in c.degrees()[:-2]:
        square = c.d(n + 1) @ c.d(n)
        if not square.is_zero():
            (_, col), _ = min(square.entries.items())
            w, label = c.basis[n][col]
            return Verdict("d_squared", False, f"degree {n}, weight {w}, basis element {label}",
                           {"degree": n, "weight": w, "element": label})
    return Verdict("d_squared", True)


def _require(c: TruncatedComplex, degrees: Optional[Iterable[int]]) -> List[int]:
    verdict = check_differential(c)
    if not verdict.passed:
        raise ComplexError(f"{c.name}: d^2 != 0 at {verdict.witness}")
    if degrees is None:
        return c.cohomology_degrees()
    degrees = sorted(degrees)
    for n in degrees:
        if not c.has_cohomology_at(n):
            raise ComplexError(f"{c.name}: degree {n} outside the stored cohomology range")
    return degrees


def _cycles(c: TruncatedComplex, n: int, at_least: int = 0) -> List[Dict[int, Fraction]]:
    """Basis of cocycles lying in the filtration piece of weight ``>= at_least``."""
    cols = c.indices(n, at_least=at_least)
    block = c.d(n).select(cols=cols)
    _, kernel = rank_kernel(block)
    return [{cols[j]: v for j, v in vec.items()} for vec in kernel]


def _boundaries(c: TruncatedComplex, n: int) -> List[Dict[int, Fraction]]:
    if n - 1 not in c.basis:
        return []
    return [col for col in c.d(n - 1).columns() if col]


def filtered_cohomology_dims(c: TruncatedComplex, n: int) -> Dict[int, int]:
    """``dim F^w H^n`` for every weight ``w`` present in degree ``n``."""
    boundaries = _boundaries(c, n)
    base = rank(SparseMatrix.from_columns(c.dim(n), boundaries))
    weights = sorted({w for w, _ in c.basis.get(n, [])})
    table: Dict[int, int] = {}
    for w in weights:
        cycles = _cycles(c, n, at_least=w)
        table[w] = rank(SparseMatrix.from_columns(c.dim(n), cycles + boundaries)) - base
    return table


def _graded_from_filtered(filtered: Dict[int, int]) -> Dict[int, int]:
    weights = sorted(filtered)
    graded: Dict[int, int] = {}
    for i, w in enumerate(weights):
        nxt = filtered[weights[i + 1]] if i + 1 < len(weights) else 0
        graded[w] = filtered[w] - nxt
    return graded


def cohomology_dims(c: TruncatedComplex, degrees: Optional[Iterable[int]] = None
                    ) -> Dict[Tuple[int, int], int]:
    """Dimensions of ``gr^w H^n`` for the weight filtration.

    For weight-preserving differentials these are the cohomology dimensions
    of each weight piece; in general they sum to ``dim H^n``.
    """
    table: Dict[Tuple[int, int], int] = {}
    for n in _require(c, degrees):
        for w, dim in _graded_from_filtered(filtered_cohomology_dims(c, n)).items():
            table[(n, w)] = dim
    return table


def total_cohomology_dims(c: TruncatedComplex, degrees: Optional[Iterable[int]] = None
                          ) -> Dict[int, int]:
    totals: Dict[int, int] = {}
    for n in _require(c, degrees):
        z = c.dim(n) - rank(c.d(n))
        b = rank(c.d(n - 1)) if n - 1 in c.basis else 0
        totals[n] = z - b
    return totals


def stable_cohomology_dims(c: TruncatedComplex, weight_bound: int,
                           degrees: Optional[Iterable[int]] = None) -> Dict[Tuple[int, int], int]:
    """``gr^w`` of the image of ``H(c) -> H(c / F^weight_bound)``.

    ``c`` must itself be truncated at a larger weight bound. The quotient
    by ``F^W`` can carry classes created only by the truncation; those are not
    in the image and are excluded here.
    """
    quotient = quotient_by_weight(c, weight_bound)
    table: Dict[Tuple[int, int], int] = {}
    keep = {n: c.indices(n, below=weight_bound) for n in c.degrees()}
    for n in _require(c, degrees):
        position = {old: new for new, old in enumerate(keep[n])}
        boundaries = _boundaries(quotient, n)
        base = rank(SparseMatrix.from_columns(quotient.dim(n), boundaries))
        filtered: Dict[int, int] = {}
        for w in sorted({w for w, _ in quotient.basis.get(n, [])}):
            projected = []
            for z in _cycles(c, n, at_least=w):
                image = {position[i]: v for i, v in z.items() if i in position}
                if image:
                    projected.append(image)
            filtered[w] = rank(SparseMatrix.from_columns(quotient.dim(n),
                                                         projected + boundaries)) - base
        for w, dim in _graded_from_filtered(filtered).items():
            table[(n, w)] = dim
    return table


@dataclass
class InducedMap:
    degree: int
    weight: Optional[int]
    dim_source: int
    dim_target: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.dim_source

    @property
    def surjective(self) -> bool:
        return self.rank == self.dim_target

    @property
    def verdict(self) -> str:
        if self.injective and self.surjective:
            return "iso"
        if self.injective:
            return "injective"
        if self.surjective:
            return "surjective"
        return "neither"

    def to_json(self) -> Dict[str, object]:
        data: Dict[str, object] = {"degree": self.degree, "dim_source": self.dim_source,
                                   "dim_target": self.dim_target, "rank": self.rank,
                                   "induced": self.verdict}
        if self.weight is not None:
            data["weight"] = self.weight
        return data


def _filtered_image_ranks(f: ChainMap, n: int) -> Dict[int, int]:
    src, tgt = f.source, f.target
    boundaries = _boundaries(tgt, n)
    base = rank(SparseMatrix.from_columns(tgt.dim(n), boundaries))
    m = f.at(n)
    ranks: Dict[int, int] = {}
    for w in sorted({w for w, _ in src.basis.get(n, [])} | {w for w, _ in tgt.basis.get(n, [])}):
        images = [m.apply(z) for z in _cycles(src, n, at_least=w)]
        ranks[w] = rank(SparseMatrix.from_columns(tgt.dim(n), images + boundaries)) - base
    return ranks


def induced_cohomology_map(f: ChainMap, degrees: Optional[Iterable[int]] = None,
                           by_weight: bool = True) -> List[InducedMap]:
    """Ranks of the maps induced on cohomology, totals and per filtration weight."""
    verdict = f.check()
    if not verdict.passed:
        raise ComplexError(f"not a chain map: {verdict.witness}")
    if degrees is None:
        degrees = sorted(set(f.source.cohomology_degrees()) & set(f.target.cohomology_degrees()))
    else:
        degrees = sorted(degrees)
        _require(f.source, degrees)
        _require(f.target, degrees)
    results: List[InducedMap] = []
    for n in degrees:
        src_filtered = filtered_cohomology_dims(f.source, n)
        tgt_filtered = filtered_cohomology_dims(f.target, n)
        image_filtered = _filtered_image_ranks(f, n)
        weights = sorted(set(src_filtered) | set(tgt_filtered))

        def at(table: Dict[int, int], w: int) -> int:
            later = [v for k, v in table.items() if k >= w]
            return max(later) if later else 0

        total_src, total_tgt = at(src_filtered, 0), at(tgt_filtered, 0)
        results.append(InducedMap(n, None, total_src, total_tgt, at(image_filtered, 0)))
        if not by_weight:
            continue
        for i, w in enumerate(weights):
            nxt = weights[i + 1] if i + 1 < len(weights) else None

            def graded(table: Dict[int, int]) -> int:
                return at(table, w) - (at(table, nxt) if nxt is not None else 0)

            results.append(InducedMap(n, w, graded(src_filtered), graded(tgt_filtered),
                                      graded(image_filtered)))
    return results


def quotient_by_weight(c: TruncatedComplex, weight_bound: int) -> TruncatedComplex:
    """Quotient by the subcomplex spanned by basis elements of weight ``>= weight_bound``."""
    if weight_bound < 1:
        raise ComplexError("weight bound must be at least 1")
    keep = {n: c.indices(n, below=weight_bound) for n in c.degrees()}
    basis = {n: [c.basis[n][i] for i in keep[n]] for n in c.degrees()}
    differential = {n: c.d(n).select(rows=keep[n + 1], cols=keep[n]) for n in c.degrees()[:-1]}
    bound = weight_bound if c.weight_bound is None else min(weight_bound, c.weight_bound)
    return TruncatedComplex(f"{c.name}/F^{weight_bound}", basis, differential,
                            c.lower_bounded, c.upper_bounded, bound)


def graded_piece(c: TruncatedComplex, weight: int) -> TruncatedComplex:
    """The associated graded piece ``gr^w``: weight-``w`` basis and the weight-preserving ``d``."""
    keep = {n: c.indices(n, weight=weight) for n in c.degrees()}
    basis = {n: [c.basis[n][i] for i in keep[n]] for n in c.degrees()}
    differential = {n: c.d(n).select(rows=keep[n + 1], cols=keep[n]) for n in c.degrees()[:-1]}
    return TruncatedComplex(f"gr^{weight} {c.name}", basis, differential,
                            c.lower_bounded, c.upper_bounded, c.weight_bound)


def restrict_chain_map(f: ChainMap, source: TruncatedComplex, target: TruncatedComplex,
                       weight_bound: Optional[int] = None,
                       weight: Optional[int] = None) -> ChainMap:
    """Restrict ``f`` to a weight quotient or graded piece of its source and target."""
    maps = {}
    for n in source.degrees():
        if weight is not None:
            rows = f.target.indices(n, weight=weight)
            cols = f.source.indices(n, weight=weight)
        else:
            rows = f.target.indices(n, below=weight_bound)
            cols = f.source.indices(n, below=weight_bound)
        maps[n] = f.at(n).select(rows=rows, cols=cols)
    return ChainMap(source, target, maps)


def euler_characteristic(c: TruncatedComplex, weight: int, degrees: Sequence[int]) -> int:
    """Alternating sum of the weight-``w`` component dimensions over ``degrees``."""
    return sum((-1) ** (n % 2) * len(c.indices(n, weight=weight)) for n in degrees)


def identity_map(c: TruncatedComplex) -> ChainMap:
    return ChainMap(c, c, {n: SparseMatrix.identity(c.dim(n)) for n in c.degrees()})
