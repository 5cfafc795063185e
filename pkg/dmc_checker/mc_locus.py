"""The cosimplicial scheme ``MC^n(L) = MC(L (x) Lambda^n)`` in explicit coordinates.

A point of ``MC^n(L)`` is recorded by its image in ``L (x) Lambda^n / e_0``,
expanded in one of two bases of ``Lambda^n / e_0 Lambda^n``:

* ``difference``: monomials in ``eps_i = e_(i+1) - e_i``;
* ``vertex``: monomials in ``v_i = e_(i+1) - e_0``.

The coordinate ``b[S]`` is the coefficient of the monomial indexed by
``S`` in front of the basis element ``b`` of ``L^(|S|+1)``. A point ``xi``
lifts to the Maurer-Cartan element ``xi - e_0 F(xi)``; every structure map is
computed by lifting, applying ``e_i -> e_phi(i)`` and reading the result
back modulo ``e_0``.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .chevalley import require_positive
from .errors import AlgebraError, ComplexError
from .exact import SparseMatrix, Vector, rank, rank_kernel, span_contains
from .graded import (GradedAlgebra, GradedPolynomial, Generator, Monomial, UNIT, apply_derivation,
                     poly_multiply, substitute)
from .lie import LInfinityStructure
from .simplex import SimplexMap, codegeneracy, coface, compose, identity
from .simplicial import SimplicialModuleFamily
from .tensor import TensorElement, left_multiply, tensor_curvature
from .verdict import Verdict, combine

LOGGER = logging.getLogger(__name__)

DIFFERENCE = "difference"
VERTEX = "vertex"
FRAMES = (DIFFERENCE, VERTEX)

Subset = Tuple[int, ...]


def coordinate_name(b: str, S: Sequence[int]) -> str:
    return f"{b}[{''.join(str(s) for s in S)}]"


def _check_frame(frame: str) -> None:
    if frame not in FRAMES:
        raise ValueError(f"unknown coordinate frame {frame!r}")


@dataclass
class McCoordinates:
    """Coordinate blocks of ``MC^n(L)``: one block per subset ``S`` of ``0..n-1``."""

    structure: LInfinityStructure
    level: int
    frame: str
    blocks: List[Tuple[Subset, List[str]]]
    algebra: GradedAlgebra

    @property
    def names(self) -> List[str]:
        return [coordinate_name(b, S) for S, block in self.blocks for b in block]

    @property
    def dim(self) -> int:
        return len(self.algebra)

    def name(self, S: Sequence[int], b: str) -> str:
        return coordinate_name(b, S)

    def coordinate(self, S: Sequence[int], b: str) -> GradedPolynomial:
        return self.algebra.gen(coordinate_name(b, S))

    def has(self, S: Sequence[int], b: str) -> bool:
        return coordinate_name(b, S) in self.algebra

    def block_dims(self) -> Dict[Subset, int]:
        return {S: len(block) for S, block in self.blocks}

    def to_json(self) -> Dict[str, object]:
        return {
            "level": self.level,
            "frame": self.frame,
            "blocks": [{"subset": list(S), "coordinates": [coordinate_name(b, S) for b in block]}
                       for S, block in self.blocks],
            "total": self.dim,
        }


def mc_coordinates(L: LInfinityStructure, n: int, frame: str = DIFFERENCE) -> McCoordinates:
    """Blocks ordered by size of ``S``, then lexicographically."""
    require_positive(L)
    _check_frame(frame)
    if n < 0:
        raise ComplexError(f"no simplex level {n}")
    blocks: List[Tuple[Subset, List[str]]] = []
    top = L.top_degree
    for k in range(0, min(n, top - 1) + 1):
        names = L.names(k + 1)
        if not names:
            continue
        for S in itertools.combinations(range(n), k):
            blocks.append((S, names))
    generators = [Generator(coordinate_name(b, S), 0) for S, names in blocks for b in names]
    algebra = GradedAlgebra(generators, f"O(MC^{n}({L.name}))[{frame}]")
    return McCoordinates(L, n, frame, blocks, algebra)


@dataclass
class PolynomialMap:
    """``MC^m -> MC^n`` as the pullback of every target coordinate to the source."""

    source: McCoordinates
    target: McCoordinates
    images: Dict[str, GradedPolynomial]

    def image(self, name: str) -> GradedPolynomial:
        return self.images[name]

    def pullback(self, p: GradedPolynomial, max_weight: Optional[int] = None) -> GradedPolynomial:
        return substitute(p, self.images, self.source.algebra, max_weight)

    def __mul__(self, inner: "PolynomialMap") -> "PolynomialMap":
        """``self o inner``."""
        if inner.target.algebra is not self.source.algebra:
            raise AlgebraError("cannot compose polynomial maps through different coordinates")
        return PolynomialMap(inner.source, self.target,
                             {name: inner.pullback(p) for name, p in self.images.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolynomialMap):
            return NotImplemented
        return (self.source.names == other.source.names
                and self.target.names == other.target.names
                and all(p.terms == other.images[k].terms for k, p in self.images.items()))

    def is_linear(self) -> bool:
        return all(w == 1 for p in self.images.values() for w in p.weights())

    def linear_matrix(self) -> SparseMatrix:
        """Rows: target coordinates; columns: source coordinates."""
        if not self.is_linear():
            raise AlgebraError("structure map is not linear")
        entries = {}
        for r, name in enumerate(self.target.names):
            for m, c in self.images[name].terms.items():
                entries[(r, m[0][0])] = c
        return SparseMatrix(self.target.dim, self.source.dim, entries)

    def to_json(self) -> Dict[str, str]:
        return {name: self.images[name].format() for name in self.target.names}


# -- lifts and read-off -------------------------------------------------------


def _ambient(coords: McCoordinates, lambda_level: int, letter: str = "e") -> GradedAlgebra:
    """Coordinates of ``MC^m`` adjoined to exterior generators of degree -1."""
    count = lambda_level + 1 if letter == "e" else lambda_level
    odd = [Generator(f"{letter}{i}", -1) for i in range(count)]
    even = [coords.algebra.generator(r) for r in range(coords.dim)]
    return GradedAlgebra(odd + even, f"{coords.algebra.name}(x){letter}[{lambda_level}]")


def _lift(algebra: GradedAlgebra, S: Sequence[int], frame: str) -> GradedPolynomial:
    p = algebra.one()
    for s in S:
        base = f"e{s}" if frame == DIFFERENCE else "e0"
        p = p * (algebra.gen(f"e{s + 1}") - algebra.gen(base))
    return p


def _readoff_assignment(source: GradedAlgebra, target: GradedAlgebra, n: int,
                        frame: str) -> Dict[str, GradedPolynomial]:
    """``e_0 -> 0`` and ``e_(i+1) -> u_i`` (vertex) or ``u_0 + .. + u_i`` (difference)."""
    assignment: Dict[str, GradedPolynomial] = {"e0": target.zero()}
    for i in range(n):
        if frame == VERTEX:
            assignment[f"e{i + 1}"] = target.gen(f"u{i}")
        else:
            total = target.zero()
            for l in range(i + 1):
                total = total + target.gen(f"u{l}")
            assignment[f"e{i + 1}"] = total
    for g in source.generators:
        if g.degree == 0:
            assignment[g.name] = target.gen(g.name)
    return assignment


def _split_monomial(algebra: GradedAlgebra, m: Monomial) -> Tuple[Subset, Monomial]:
    """``(S, coordinate part)`` for a monomial ``u_S * coordinates``."""
    S = tuple(int(algebra.generator(r).name[1:]) for r, _ in m if algebra.generator(r).degree < 0)
    rest = tuple((r, e) for r, e in m if algebra.generator(r).degree == 0)
    return S, rest


def _read(X: TensorElement, n: int, frame: str, coords: McCoordinates
          ) -> Dict[Tuple[Subset, str], GradedPolynomial]:
    """Project ``X`` modulo ``e_0`` and expand it in the frame basis of level ``n``."""
    source = X.algebra
    readout = _ambient(coords, n, "u")
    assignment = _readoff_assignment(source, readout, n, frame)
    offset = {readout.rank(coords.algebra.generator(r).name): r for r in range(coords.dim)}
    out: Dict[Tuple[Subset, str], Dict[Monomial, Fraction]] = {}
    for b, p in X.components.items():
        projected = substitute(p, assignment, readout)
        for m, c in projected.terms.items():
            S, rest = _split_monomial(readout, m)
            key = (S, b)
            mono = tuple((offset[r], e) for r, e in rest)
            bucket = out.setdefault(key, {})
            bucket[mono] = bucket.get(mono, 0) + c
    return {key: GradedPolynomial(coords.algebra, terms) for key, terms in out.items()}


def _delta(algebra: GradedAlgebra):
    images = {r: algebra.one() for r, g in enumerate(algebra.generators) if g.degree == -1}
    return lambda p: apply_derivation(p, images, 1)


# -- the tower ----------------------------------------------------------------


@dataclass
class Embedding:
    """The generic point ``xi`` of level ``n`` and its Maurer-Cartan lift ``xi - e_0 F(xi)``."""

    coordinates: McCoordinates
    ambient: GradedAlgebra
    point: TensorElement
    curvature: TensorElement
    element: TensorElement

    def residual(self) -> TensorElement:
        """``F(xi - e_0 F(xi))``; zero exactly when the lift is Maurer-Cartan."""
        return tensor_curvature(self.element, _delta(self.ambient))


class MaurerCartanTower:
    """Levels of ``MC^*(L)`` in one frame, with cached coordinates, lifts and structure maps."""

    def __init__(self, structure: LInfinityStructure, frame: str = DIFFERENCE):
        require_positive(structure)
        _check_frame(frame)
        self.structure = structure
        self.frame = frame
        self._coordinates: Dict[int, McCoordinates] = {}
        self._embeddings: Dict[int, Embedding] = {}
        self._maps: Dict[SimplexMap, PolynomialMap] = {}

    def coordinates(self, n: int) -> McCoordinates:
        if n not in self._coordinates:
            self._coordinates[n] = mc_coordinates(self.structure, n, self.frame)
        return self._coordinates[n]

    def embedding(self, n: int) -> Embedding:
        if n not in self._embeddings:
            coords = self.coordinates(n)
            ambient = _ambient(coords, n)
            components: Dict[str, GradedPolynomial] = {}
            for S, names in coords.blocks:
                lift = _lift(ambient, S, self.frame)
                for b in names:
                    term = lift * ambient.gen(coordinate_name(b, S))
                    components[b] = components[b] + term if b in components else term
            xi = TensorElement(self.structure, ambient, components)
            F = tensor_curvature(xi, _delta(ambient))
            element = xi - left_multiply(ambient.gen("e0"), F)
            self._embeddings[n] = Embedding(coords, ambient, xi, F, element)
        return self._embeddings[n]

    def curvature_coordinates(self, n: int) -> Dict[Tuple[Subset, str], GradedPolynomial]:
        """``F(xi)`` at level ``n`` read off in the frame."""
        emb = self.embedding(n)
        return _read(emb.curvature, n, self.frame, emb.coordinates)

    def structure_map(self, phi: SimplexMap) -> PolynomialMap:
        if phi not in self._maps:
            emb = self.embedding(phi.source)
            target = self.coordinates(phi.target)
            pushed_algebra = _ambient(emb.coordinates, phi.target)
            assignment = {f"e{i}": pushed_algebra.gen(f"e{phi(i)}")
                          for i in range(phi.source + 1)}
            for name in emb.coordinates.names:
                assignment[name] = pushed_algebra.gen(name)
            pushed = emb.element.map_components(
                lambda p: substitute(p, assignment, pushed_algebra), pushed_algebra)
            values = _read(pushed, phi.target, self.frame, emb.coordinates)
            zero = emb.coordinates.algebra.zero()
            images = {coordinate_name(b, S): values.get((S, b), zero)
                      for S, names in target.blocks for b in names}
            stray = [key for key, p in values.items()
                     if not p.is_zero() and coordinate_name(key[1], key[0]) not in images]
            if stray:
                raise AlgebraError(f"{self.structure.name}: {phi} leaves the coordinate blocks "
                                   f"at {stray[0]}")
            self._maps[phi] = PolynomialMap(emb.coordinates, target, images)
        return self._maps[phi]


def graph_embedding(L: LInfinityStructure, n: int, frame: str = DIFFERENCE) -> Embedding:
    return MaurerCartanTower(L, frame).embedding(n)


def embedding_check(L: LInfinityStructure, bound: int, frame: str = DIFFERENCE) -> Verdict:
    """``F(xi - e_0 F(xi)) = 0`` symbolically at every level up to ``bound``."""
    tower = MaurerCartanTower(L, frame)
    for n in range(bound + 1):
        residual = tower.embedding(n).residual()
        if not residual.is_zero():
            b = min(residual.components)
            p = residual.components[b]
            return Verdict("mc_embedding", False, f"level {n}: component {b} = {p.format()}")
    return Verdict("mc_embedding", True, details={"levels": bound})


def structure_map(L: LInfinityStructure, phi: SimplexMap,
                  frame: str = DIFFERENCE) -> PolynomialMap:
    return MaurerCartanTower(L, frame).structure_map(phi)


def functoriality_check(tower: MaurerCartanTower, bound: int) -> Verdict:
    """Identities and composites of cofaces and codegeneracies up to level ``bound``."""
    checked = 0
    for n in range(bound + 1):
        ident = tower.structure_map(identity(n))
        if any(ident.images[name] != tower.coordinates(n).algebra.gen(name)
               for name in ident.images):
            return Verdict("functoriality", False, f"identity of level {n}")
    elementary = [coface(n, i) for n in range(1, bound + 1) for i in range(n + 1)]
    elementary += [codegeneracy(n, i) for n in range(bound) for i in range(n + 1)]
    for outer, inner in itertools.product(elementary, repeat=2):
        if inner.target != outer.source:
            continue
        composite = compose(outer, inner)
        checked += 1
        if tower.structure_map(composite) != (tower.structure_map(outer)
                                              * tower.structure_map(inner)):
            return Verdict("functoriality", False, f"{outer} after {inner}")
    return Verdict("functoriality", True, details={"composites": checked})


def cosimplicial_scheme_check(L: LInfinityStructure, bound: int,
                              frame: str = DIFFERENCE) -> Verdict:
    """The cosimplicial identities for the structure maps of ``MC^*(L)``."""
    tower = MaurerCartanTower(L, frame)

    def m(phi: SimplexMap) -> PolynomialMap:
        return tower.structure_map(phi)

    checked = 0
    for n in range(2, bound + 1):
        for i, j in itertools.combinations(range(n + 1), 2):
            checked += 1
            if m(coface(n, j)) * m(coface(n - 1, i)) != m(coface(n, i)) * m(coface(n - 1, j - 1)):
                return Verdict("cosimplicial_scheme", False, f"d^{j} d^{i} at level {n}")
    for n in range(bound):
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = m(codegeneracy(n, j)) * m(coface(n + 1, i))
                if i in (j, j + 1):
                    rhs = m(identity(n))
                elif i < j:
                    rhs = m(coface(n, i)) * m(codegeneracy(n - 1, j - 1))
                else:
                    rhs = m(coface(n, i - 1)) * m(codegeneracy(n - 1, j))
                checked += 1
                if lhs != rhs:
                    return Verdict("cosimplicial_scheme", False, f"s^{j} d^{i} at level {n}")
    relations = Verdict("identities", True, details={"relations": checked})
    return combine("cosimplicial_scheme", [relations, functoriality_check(tower, bound)])


# -- frames -------------------------------------------------------------------


def frame_change(L: LInfinityStructure, n: int, source: str = DIFFERENCE,
                 target: str = VERTEX) -> PolynomialMap:
    """Coordinates of the same point in ``target`` frame as linear forms in ``source`` frame."""
    return _frame_change(mc_coordinates(L, n, source), mc_coordinates(L, n, target))


def _frame_change(src: McCoordinates, tgt: McCoordinates) -> PolynomialMap:
    n = src.level
    ambient = _ambient(src, n)
    readout = _ambient(src, n, "u")
    assignment = _readoff_assignment(ambient, readout, n, tgt.frame)
    images: Dict[str, GradedPolynomial] = {name: src.algebra.zero() for name in tgt.names}
    for S, names in src.blocks:
        expanded = substitute(_lift(ambient, S, src.frame), assignment, readout)
        for m, c in expanded.terms.items():
            T, _ = _split_monomial(readout, m)
            for b in names:
                key = coordinate_name(b, T)
                images[key] = images[key] + src.coordinate(S, b).scale(c)
    return PolynomialMap(src, tgt, images)


def frame_change_check(L: LInfinityStructure, n: int) -> Verdict:
    """Both frame changes compose to the identity and fix the top coordinate."""
    difference, vertex = mc_coordinates(L, n, DIFFERENCE), mc_coordinates(L, n, VERTEX)
    there, back = _frame_change(difference, vertex), _frame_change(vertex, difference)
    round_trip = back * there
    for name, p in round_trip.images.items():
        if p != there.source.algebra.gen(name):
            return Verdict("frame_change", False, f"level {n}: {name} -> {p.format()}")
    top = tuple(range(n))
    for b in L.names(n + 1):
        name = coordinate_name(b, top)
        if name in there.images and there.images[name] != there.source.algebra.gen(name):
            return Verdict("frame_change", False, f"level {n}: top coordinate {name} moves")
    return Verdict("frame_change", True)


# -- closed-form oracles -----------------------------------------------------


def grouplike_formula(coords_source: McCoordinates, coords_target: McCoordinates,
                      j: int) -> Dict[str, GradedPolynomial]:
    """Codegeneracy ``s^j: MC^(n+1) -> MC^n`` in vertex coordinates, by the two-case sum."""
    images: Dict[str, GradedPolynomial] = {}
    for I, names in coords_target.blocks:
        ell = sum(1 for i in I if i <= j - 1)
        T1 = I[:ell] + tuple(i + 1 for i in I[ell:])
        sources = [T1]
        if ell and I[ell - 1] == j - 1:
            sources.append(I[:ell - 1] + tuple(i + 1 for i in I[ell - 1:]))
        for b in names:
            p = coords_source.algebra.zero()
            for T in sources:
                p = p + coords_source.coordinate(T, b)
            images[coordinate_name(b, I)] = p
    return images


def face_formula(coords_source: McCoordinates, coords_target: McCoordinates,
                 j: int) -> Dict[str, GradedPolynomial]:
    """Coface ``d^j: MC^(n-1) -> MC^n`` for ``j > 0`` in vertex coordinates."""
    images: Dict[str, GradedPolynomial] = {}
    for I, names in coords_target.blocks:
        killed = any(i + 1 == j for i in I)
        T = tuple(i if i + 1 < j else i - 1 for i in I)
        for b in names:
            images[coordinate_name(b, I)] = (coords_source.algebra.zero() if killed
                                             else coords_source.coordinate(T, b))
    return images


def d0_formula(tower: MaurerCartanTower, n: int) -> Dict[str, GradedPolynomial]:
    """The closed-form sum over ``tau`` for ``d^0: MC^(n-1) -> MC^n`` (boundary ``i_0 = -1``)."""
    source, target = tower.coordinates(n - 1), tower.coordinates(n)
    curvature = tower.curvature_coordinates(n - 1)
    zero = source.algebra.zero()
    images: Dict[str, GradedPolynomial] = {}
    for I, names in target.blocks:
        k = len(I)
        for b in names:
            total = zero
            for tau in itertools.product((0, 1), repeat=k):
                shifted = tuple(i - t for i, t in zip(I, tau))
                if any(a >= c for a, c in zip((-1,) + shifted, shifted)):
                    continue
                sign = -1 if (sum(tau) + k) % 2 else 1
                term = source.coordinate(shifted, b) if source.has(shifted, b) else zero
                if k and I[0] == 0:
                    term = term + curvature.get((shifted[1:], b), zero)
                total = total + term.scale(sign)
            images[coordinate_name(b, I)] = total
    return images


def _compare(name: str, computed: PolynomialMap, expected: Mapping[str, GradedPolynomial],
             label: str) -> Optional[Verdict]:
    for coordinate in computed.target.names:
        if computed.images[coordinate] != expected[coordinate]:
            return Verdict(name, False,
                           f"{label}: {coordinate} is {computed.images[coordinate].format()}, "
                           f"formula gives {expected[coordinate].format()}", informational=True)
    return None


def explicit_formula_oracle(L: LInfinityStructure, n: int) -> Verdict:
    """Closed-form codegeneracy, face and ``d^0`` formulas against the functorial maps."""
    tower = MaurerCartanTower(L, VERTEX)
    checks: List[Verdict] = []
    groups = {"grouplike": None, "face": None, "d0_formula": None}
    for level in range(n + 1):
        for j in range(level + 1):
            if level + 1 <= n:
                phi = codegeneracy(level, j)
                expected = grouplike_formula(tower.coordinates(level + 1),
                                            tower.coordinates(level), j)
                groups["grouplike"] = groups["grouplike"] or _compare(
                    "grouplike", tower.structure_map(phi), expected, str(phi))
        if level >= 1:
            for j in range(1, level + 1):
                phi = coface(level, j)
                expected = face_formula(tower.coordinates(level - 1), tower.coordinates(level), j)
                groups["face"] = groups["face"] or _compare(
                    "face", tower.structure_map(phi), expected, str(phi))
            groups["d0_formula"] = groups["d0_formula"] or _compare(
                "d0_formula", tower.structure_map(coface(level, 0)), d0_formula(tower, level),
                str(coface(level, 0)))
    for name, failure in groups.items():
        checks.append(failure or Verdict(name, True, informational=True))
    checks.append(low_level_oracle(L))
    failing = [c for c in checks if not c.passed]
    witness = f"{failing[0].name}: {failing[0].witness}" if failing else None
    return Verdict(f"explicit_formulas[{L.name}]", not failing, witness,
                   {"levels": n, "checks": [c.to_json() for c in checks]}, informational=True)


def low_level_oracle(L: LInfinityStructure) -> Verdict:
    """``s^0(x, y) = x``, ``d^0 x = (x, -F(x))`` and ``d^1 x = (x, 0)``."""
    tower = MaurerCartanTower(L, VERTEX)
    zero, one = tower.coordinates(0), tower.coordinates(1)
    curvature = tower.curvature_coordinates(0)
    s0 = tower.structure_map(codegeneracy(0, 0))
    d0 = tower.structure_map(coface(1, 0))
    d1 = tower.structure_map(coface(1, 1))
    for b in L.names(1):
        x = zero.coordinate((), b)
        if s0.images[coordinate_name(b, ())] != one.coordinate((), b):
            return Verdict("low_level", False, f"s^0 on {b}", informational=True)
        if d0.images[coordinate_name(b, ())] != x or d1.images[coordinate_name(b, ())] != x:
            return Verdict("low_level", False, f"d^0/d^1 on {b}", informational=True)
    for y in L.names(2):
        F_y = curvature.get(((), y), zero.algebra.zero())
        if d0.images[coordinate_name(y, (0,))] != -F_y:
            return Verdict("low_level", False, f"d^0 on {y}: expected -F", informational=True)
        if not d1.images[coordinate_name(y, (0,))].is_zero():
            return Verdict("low_level", False, f"d^1 on {y}: expected 0", informational=True)
    return Verdict("low_level", True, informational=True)


# -- functions ----------------------------------------------------------------


@dataclass
class FunctionsAlgebra(SimplicialModuleFamily):
    """``O(MC^n(L))`` truncated at weight ``< weight_bound`` for ``n <= top``.

    Bases are monomials in the coordinates; faces and degeneracies pull back
    along the structure maps. When every structure map is linear the
    coordinates are primitive for the coproduct.
    """

    tower: Optional[MaurerCartanTower] = None
    weight_bound: int = 1
    monomials: Dict[int, List[Monomial]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.product = self._multiply
        self.unit = self._unit
        if self.tower is not None and self.tower.structure.is_abelian():
            self.coproduct = self._comultiply

    def algebra(self, n: int) -> GradedAlgebra:
        return self.tower.coordinates(n).algebra

    def index(self, n: int) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials[n])}

    def vector(self, n: int, p: GradedPolynomial) -> Vector:
        index = self.index(n)
        return {index[m]: c for m, c in p.truncate(self.weight_bound).terms.items()}

    def polynomial(self, n: int, v: Mapping[int, Fraction]) -> GradedPolynomial:
        return GradedPolynomial(self.algebra(n), {self.monomials[n][i]: c for i, c in v.items()})

    def _multiply(self, n: int, u: Vector, v: Vector) -> Vector:
        product = poly_multiply(self.polynomial(n, u), self.polynomial(n, v), self.weight_bound)
        return self.vector(n, product)

    def _unit(self, n: int) -> Vector:
        return {self.index(n)[UNIT]: Fraction(1)}

    def _comultiply(self, n: int, u: Vector) -> Vector:
        """Coordinates are primitive: ``x^a -> sum_b binom(a, b) x^b (x) x^(a-b)``."""
        index = self.index(n)
        dim = len(self.monomials[n])
        out: Vector = {}
        for i, c in u.items():
            m = self.monomials[n][i]
            ranks = [r for r, _ in m]
            for split in itertools.product(*(range(e + 1) for _, e in m)):
                left = tuple((r, s) for r, s in zip(ranks, split) if s)
                right = tuple((r, e - s) for (r, e), s in zip(m, split) if e - s)
                coefficient = c
                for (_, e), s in zip(m, split):
                    coefficient *= comb(e, s)
                key = index[left] * dim + index[right]
                out[key] = out.get(key, 0) + coefficient
        return {k: v for k, v in out.items() if v}


def _pullback_matrix(pm: PolynomialMap, on_target: Sequence[Monomial],
                     on_source: Sequence[Monomial], weight_bound: int) -> SparseMatrix:
    """Matrix of ``p -> p o pm`` from functions on ``pm.target`` to functions on ``pm.source``."""
    index = {m: i for i, m in enumerate(on_source)}
    columns = []
    for m in on_target:
        image = pm.pullback(pm.target.algebra.monomial(m), weight_bound)
        columns.append({index[mm]: c for mm, c in image.terms.items()})
    return SparseMatrix.from_columns(len(on_source), columns)


def functions_algebra(L: LInfinityStructure, levels: int, weight_bound: int,
                      frame: str = DIFFERENCE) -> FunctionsAlgebra:
    """The simplicial commutative algebra ``O(MC^*(L))`` on levels ``0..levels``."""
    if levels < 0 or weight_bound < 1:
        raise ComplexError("function algebra bounds must satisfy levels >= 0, weight >= 1")
    tower = MaurerCartanTower(L, frame)
    monomials: Dict[int, List[Monomial]] = {}
    for n in range(levels + 1):
        algebra = tower.coordinates(n).algebra
        found = [m for bucket in algebra.monomials(weight_bound).values() for m in bucket]
        monomials[n] = sorted(found, key=lambda m: (algebra.monomial_weight(m), m))
    basis = {n: [(GradedAlgebra.monomial_weight(m),
                  tower.coordinates(n).algebra.format_monomial(m))
                 for m in ms] for n, ms in monomials.items()}
    faces = {n: [_pullback_matrix(tower.structure_map(coface(n, i)), monomials[n],
                                  monomials[n - 1], weight_bound) for i in range(n + 1)]
             for n in range(1, levels + 1)}
    degeneracies = {n: [_pullback_matrix(tower.structure_map(codegeneracy(n, i)), monomials[n],
                                         monomials[n + 1], weight_bound) for i in range(n + 1)]
                    for n in range(levels)}
    family = FunctionsAlgebra(f"O(MC({L.name}))", basis, faces, degeneracies,
                              tower=tower, weight_bound=weight_bound, monomials=monomials)
    LOGGER.debug("O(MC(%s)): level dims %s", L.name, {n: family.dim(n) for n in family.levels()})
    return family


# -- classical locus ----------------------------------------------------------


def _polynomial_vectors(polys: Sequence[GradedPolynomial]) -> Tuple[List[Vector], int]:
    monomials = sorted({m for p in polys for m in p.terms})
    index = {m: i for i, m in enumerate(monomials)}
    return [{index[m]: c for m, c in p.terms.items()} for p in polys], len(monomials)


def _sympy_groebner(polys: Sequence[GradedPolynomial], algebra: GradedAlgebra) -> List[str]:
    symbols = [sympy.Symbol(g.name) for g in algebra.generators]
    if not symbols:
        return []
    expressions = []
    for p in polys:
        expr = sympy.Integer(0)
        for m, c in p.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for r, e in m:
                term *= symbols[r] ** e
            expr += term
        if expr != 0:
            expressions.append(expr)
    if not expressions:
        return []
    basis = sympy.groebner(expressions, *symbols, order="grevlex")
    return sorted(str(g) for g in basis.exprs)


@dataclass
class ClassicalLocus:
    structure: LInfinityStructure
    curvature_generators: List[GradedPolynomial]
    equalizer_generators: List[GradedPolynomial]
    verdict: Verdict

    def to_json(self) -> Dict[str, object]:
        return {
            "curvature": [p.format() for p in self.curvature_generators],
            "equalizer": [p.format() for p in self.equalizer_generators],
            "verdict": self.verdict.to_json(),
        }


def classical_locus(L: LInfinityStructure) -> ClassicalLocus:
    """Ideal of ``MC(L)`` in ``O(MC^0)``, compared with the ``d^0``/``d^1`` equalizer."""
    tower = MaurerCartanTower(L, DIFFERENCE)
    level0 = tower.coordinates(0)
    curvature = tower.curvature_coordinates(0)
    by_curvature = [curvature[((), y)] for y in L.names(2)
                    if ((), y) in curvature and not curvature[((), y)].is_zero()]
    d0, d1 = tower.structure_map(coface(1, 0)), tower.structure_map(coface(1, 1))
    by_equalizer = [d0.images[name] - d1.images[name] for name in tower.coordinates(1).names]
    by_equalizer = [p for p in by_equalizer if not p.is_zero()]
    vectors, dim = _polynomial_vectors(by_curvature + by_equalizer)
    a, b = vectors[:len(by_curvature)], vectors[len(by_curvature):]
    same = span_contains(a, dim, b) and span_contains(b, dim, a)
    groebner_a = _sympy_groebner(by_curvature, level0.algebra)
    groebner_b = _sympy_groebner(by_equalizer, level0.algebra)
    checks = [Verdict("generator_span", same, None if same else "spans differ"),
              Verdict("groebner_basis", groebner_a == groebner_b,
                      None if groebner_a == groebner_b else f"{groebner_a} vs {groebner_b}",
                      {"basis": groebner_a})]
    return ClassicalLocus(L, by_curvature, by_equalizer,
                          combine(f"classical_locus[{L.name}]", checks))


# -- matching map -------------------------------------------------------------


def matching_check(L: LInfinityStructure, n: int, frame: str = DIFFERENCE) -> Verdict:
    """Surjectivity of ``MC^n -> M^n``, ``x -> (s^0 x, .., s^(n-1) x)``, by exact rank."""
    if n < 1:
        raise ComplexError("the matching map starts at level 1")
    tower = MaurerCartanTower(L, frame)
    below = tower.coordinates(n - 1).dim
    maps = [tower.structure_map(codegeneracy(n - 1, j)) for j in range(n)]
    if not all(m.is_linear() for m in maps):
        return Verdict("matching", False, f"level {n}: codegeneracies are not linear")
    stacked = SparseMatrix.vstack([m.linear_matrix() for m in maps], tower.coordinates(n).dim)
    rows: List[SparseMatrix] = []
    if n >= 2:
        lower = [tower.structure_map(codegeneracy(n - 2, i)).linear_matrix() for i in range(n - 1)]
        width = n * below
        for i, j in itertools.combinations(range(n), 2):
            left, right = lower[i], lower[j - 1]
            entries: Dict[Tuple[int, int], Fraction] = {}
            for (r, c), v in left.entries.items():
                entries[(r, j * below + c)] = v
            for (r, c), v in right.entries.items():
                entries[(r, i * below + c)] = entries.get((r, i * below + c), 0) - v
            rows.append(SparseMatrix(left.rows, width, entries))
    constraints = SparseMatrix.vstack(rows, n * below) if rows else SparseMatrix(0, n * below)
    matching_dim = len(rank_kernel(constraints)[1])
    image_rank = rank(stacked)
    surjective = image_rank == matching_dim and (constraints @ stacked).is_zero()
    return Verdict("matching", surjective,
                   None if surjective else f"level {n}: rank {image_rank}, dim M^n {matching_dim}",
                   {"level": n, "rank": image_rank, "matching_dim": matching_dim})
