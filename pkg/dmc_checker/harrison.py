"""Harrison cochains of a finite-dimensional vector space as a graded Lie algebra.

``CHarr^k(R, R)`` is the space of ``(k+1)``-linear maps ``R^(k+1) -> R`` that
vanish on signed shuffles; the Gerstenhaber bracket makes the sum over
``k`` a graded Lie algebra whose Maurer-Cartan elements in degree one are the
commutative associative products on ``R``.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import AlgebraError
from .exact import SparseMatrix, rank_kernel, solve
from .graded import Generator
from .lie import LInfinityStructure, LinearCombination

LOGGER = logging.getLogger(__name__)

Cochain = Dict[Tuple[int, ...], Dict[int, Fraction]]


def _inputs(dimension: int, arity: int) -> List[Tuple[int, ...]]:
    return list(itertools.product(range(dimension), repeat=arity))


def _shuffles(n: int, p: int):
    for head in itertools.combinations(range(n), p):
        tail = tuple(i for i in range(n) if i not in head)
        yield head, tail


def cochain_to_vector(c: Cochain, dimension: int, degree: int) -> Dict[int, Fraction]:
    position = {a: i for i, a in enumerate(_inputs(dimension, degree + 1))}
    vector: Dict[int, Fraction] = {}
    for args, value in c.items():
        for out, coefficient in value.items():
            if coefficient:
                vector[position[args] * dimension + out] = Fraction(coefficient)
    return vector


def vector_to_cochain(v: Dict[int, Fraction], dimension: int, degree: int) -> Cochain:
    inputs = _inputs(dimension, degree + 1)
    c: Cochain = {}
    for index, coefficient in v.items():
        args, out = inputs[index // dimension], index % dimension
        c.setdefault(args, {})[out] = coefficient
    return c


def shuffle_constraints(dimension: int, degree: int) -> SparseMatrix:
    """Rows are the shuffle relations ``sum (-1)^(i_1+..+i_p) c(r_I, r_J) = 0``, ``0 < p <= k``."""
    arity = degree + 1
    inputs = _inputs(dimension, arity)
    position = {a: i for i, a in enumerate(inputs)}
    rows: List[Dict[int, Fraction]] = []
    for p in range(1, arity):
        for args in inputs:
            for out in range(dimension):
                row: Dict[int, Fraction] = {}
                for head, tail in _shuffles(arity, p):
                    sign = -1 if sum(head) % 2 else 1
                    permuted = tuple(args[i] for i in head + tail)
                    col = position[permuted] * dimension + out
                    row[col] = row.get(col, 0) + sign
                row = {k: Fraction(v) for k, v in row.items() if v}
                if row:
                    rows.append(row)
    cols = len(inputs) * dimension
    return SparseMatrix(len(rows), cols,
                        {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})


def harrison_basis(dimension: int, degree: int) -> List[Dict[int, Fraction]]:
    """Exact basis of ``CHarr^degree`` as vectors in ``Hom(R^(k+1), R)``."""
    constraints = shuffle_constraints(dimension, degree)
    _, kernel = rank_kernel(constraints)
    return kernel


def _evaluate(c: Cochain, args: Tuple[int, ...]) -> Dict[int, Fraction]:
    return c.get(args, {})


def insertion(f: Cochain, g: Cochain, kf: int, kg: int, dimension: int) -> Cochain:
    """``(f o g)(r_0..) = sum_i (-1)^(i kg) f(r_0, .., g(r_i, .., r_(i+kg)), ..)``."""
    out: Cochain = {}
    for args in _inputs(dimension, kf + kg + 1):
        value: Dict[int, Fraction] = {}
        for i in range(kf + 1):
            sign = -1 if (i * kg) % 2 else 1
            inner = _evaluate(g, args[i:i + kg + 1])
            for middle, a in inner.items():
                outer_args = args[:i] + (middle,) + args[i + kg + 1:]
                for result, b in _evaluate(f, outer_args).items():
                    value[result] = value.get(result, 0) + sign * a * b
        value = {k: v for k, v in value.items() if v}
        if value:
            out[args] = value
    return out


def gerstenhaber_bracket(c1: Cochain, c2: Cochain, k1: int, k2: int, dimension: int) -> Cochain:
    """``[c1, c2] = c1 o c2 - (-1)^(k1 k2) c2 o c1``."""
    first = insertion(c1, c2, k1, k2, dimension)
    second = insertion(c2, c1, k2, k1, dimension)
    sign = -1 if (k1 * k2) % 2 else 1
    out: Cochain = {}
    for args in set(first) | set(second):
        value = dict(first.get(args, {}))
        for k, v in second.get(args, {}).items():
            value[k] = value.get(k, 0) - sign * v
        value = {k: v for k, v in value.items() if v}
        if value:
            out[args] = value
    return out


def componentwise_product(dimension: int) -> Cochain:
    """The product ``e_i e_j = delta_ij e_i`` on ``R = Q^dimension``."""
    return {(i, i): {i: Fraction(1)} for i in range(dimension)}


def harrison_fixture(dimension: int, bound: int, name: str = "") -> LInfinityStructure:
    """``CHarr^k(R, R)`` for ``0 <= k <= bound`` with the Gerstenhaber bracket.

    Generators are named ``h{k}_{j}``; degree ``k`` cochains have ``k + 1``
    arguments. Degree 0 is ``End(R)`` and disappears under positive truncation.
    """
    if dimension < 1 or bound < 2:
        raise AlgebraError("Harrison fixture needs dimension >= 1 and bound >= 2")
    bases: Dict[int, List[Dict[int, Fraction]]] = {}
    generators: List[Generator] = []
    cochains: Dict[str, Tuple[int, Cochain]] = {}
    for k in range(bound + 1):
        bases[k] = harrison_basis(dimension, k)
        for j, vector in enumerate(bases[k]):
            label = f"h{k}_{j}"
            generators.append(Generator(label, k))
            cochains[label] = (k, vector_to_cochain(vector, dimension, k))
        LOGGER.debug("CHarr^%d(Q^%d): dimension %d", k, dimension, len(bases[k]))
    matrices = {k: SparseMatrix.from_columns(dimension ** (k + 2), bases[k]) for k in bases}
    names = [g.name for g in generators]
    brackets: Dict[Tuple[str, ...], LinearCombination] = {}
    for a, b in itertools.combinations_with_replacement(names, 2):
        ka, ca = cochains[a]
        kb, cb = cochains[b]
        if ka + kb > bound:
            continue
        if a == b and ka % 2 == 0:
            continue
        value = gerstenhaber_bracket(ca, cb, ka, kb, dimension)
        if not value:
            continue
        coordinates = solve(matrices[ka + kb], cochain_to_vector(value, dimension, ka + kb))
        if coordinates is None:
            raise AlgebraError(f"bracket [{a}, {b}] leaves the Harrison cochains")
        combination = {f"h{ka + kb}_{j}": c for j, c in coordinates.items() if c}
        if combination:
            brackets[(a, b)] = combination
    return LInfinityStructure(name or f"harrison-d{dimension}", tuple(generators), brackets, 2)


def express(c: Cochain, degree: int, dimension: int) -> LinearCombination:
    """Coordinates of a Harrison cochain in the ``h{k}_{j}`` fixture basis."""
    basis = harrison_basis(dimension, degree)
    coordinates = solve(SparseMatrix.from_columns(dimension ** (degree + 2), basis),
                        cochain_to_vector(c, dimension, degree))
    if coordinates is None:
        raise AlgebraError(f"cochain is not in CHarr^{degree}")
    return {f"h{degree}_{j}": v for j, v in sorted(coordinates.items()) if v}


def is_commutative_associative(c: Cochain, dimension: int) -> bool:
    """Direct test of commutativity and associativity of a bilinear product."""
    for a, b in itertools.product(range(dimension), repeat=2):
        if _evaluate(c, (a, b)) != _evaluate(c, (b, a)):
            return False
    square = gerstenhaber_bracket(c, c, 1, 1, dimension)
    return not square

