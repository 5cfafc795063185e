"""The cosimplicial DG algebra Lambda and its dual, the surjection complex.

``Lambda^n`` is the exterior algebra on ``e_0..e_n`` in degree -1 with
``delta e_i = 1``; a monotone map ``phi`` acts by ``e_i -> e_phi(i)``.

The normalized cochains ``N^*(Z Delta_n)`` have a basis of classes of
monotone maps ``f: [n] -> [k]``, recorded by their preimage sizes
``(n_0, ..., n_k)``. Classes are taken modulo the images of the cofaces
``d^i`` for ``i >= 1``, so only slot 0 may be empty, and the differential is
induced by ``d^0``: ``d[f_(n_0..n_k)] = [f_(0, n_0..n_k)]``.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import TruncatedComplex, check_differential
from .errors import ComplexError, SimplexMapError
from .exact import SparseMatrix, rank, solve_columns
from .graded import GradedAlgebra, GradedPolynomial, Generator, apply_derivation, substitute
from .simplex import SimplexMap, all_maps, shuffles
from .verdict import Verdict, combine

LOGGER = logging.getLogger(__name__)

SLOT_ZERO = "slot0"
APPEND = "append"

Sizes = Tuple[int, ...]


class LambdaAlgebra:
    """``Lambda^n`` with its derivation ``delta``."""

    def __init__(self, n: int):
        if n < 0:
            raise SimplexMapError(f"no simplex level {n}")
        self.n = n
        self.algebra = GradedAlgebra([Generator(f"e{i}", -1) for i in range(n + 1)],
                                     f"Lambda^{n}")
        self._delta = {i: self.algebra.one() for i in range(n + 1)}

    def __repr__(self) -> str:
        return f"LambdaAlgebra({self.n})"

    def e(self, i: int) -> GradedPolynomial:
        return self.algebra.gen(f"e{i}")

    def epsilon(self, i: int) -> GradedPolynomial:
        """``eps_i = e_(i+1) - e_i`` for ``0 <= i < n``."""
        if not 0 <= i < self.n:
            raise SimplexMapError(f"eps_{i} is not defined on Lambda^{self.n}")
        return self.e(i + 1) - self.e(i)

    def delta(self, p: GradedPolynomial) -> GradedPolynomial:
        return apply_derivation(p, self._delta, 1)

    def subset(self, indices: Sequence[int]) -> GradedPolynomial:
        """``e_(j_1) ... e_(j_k)`` in the given order."""
        return self.algebra.from_factors([(f"e{j}", 1) for j in indices])

    def basis(self, k: int) -> List[Tuple[int, ...]]:
        """Increasing ``k``-subsets of ``{0..n}``; they index a basis of degree ``-k``."""
        return list(itertools.combinations(range(self.n + 1), k))

    def coordinates(self, p: GradedPolynomial, k: int) -> Dict[int, Fraction]:
        """Coefficients of ``p`` in the ``basis(k)`` monomials."""
        position = {tuple((j, 1) for j in J): i for i, J in enumerate(self.basis(k))}
        out: Dict[int, Fraction] = {}
        for m, c in p.terms.items():
            if m in position:
                out[position[m]] = c
        return out


@lru_cache(maxsize=None)
def lambda_algebra(n: int) -> LambdaAlgebra:
    return LambdaAlgebra(n)


def epsilon_basis(n: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """Basis ``e_0^a eps_S`` of ``Lambda^n`` as ``(a, S)`` pairs."""
    return [(a, S) for a in (0, 1) for k in range(n + 1)
            for S in itertools.combinations(range(n), k)]


def epsilon_monomial(n: int, a: int, S: Sequence[int]) -> GradedPolynomial:
    lam = lambda_algebra(n)
    p = lam.e(0) if a else lam.algebra.one()
    for s in S:
        p = p * lam.epsilon(s)
    return p


def epsilon_basis_check(n: int) -> Verdict:
    """The ``e_0^a eps_S`` span ``Lambda^n`` over the integers, degree by degree.

    In each degree the change of basis to the ``e_J`` monomials must be a
    square integer matrix whose inverse is again integral.
    """
    lam = lambda_algebra(n)
    pairs = epsilon_basis(n)
    for k in range(n + 2):
        columns = [lam.coordinates(epsilon_monomial(n, a, S), k)
                   for a, S in pairs if a + len(S) == k]
        m = SparseMatrix.from_columns(len(lam.basis(k)), columns)
        inverse = None
        if m.rows == m.cols:
            inverse = solve_columns(m, SparseMatrix.identity(m.rows).columns())
        integral = inverse is not None and all(
            v.denominator == 1 for v in list(m.entries.values()) + list(inverse.entries.values()))
        if not integral:
            return Verdict("epsilon_basis", False, f"n={n}, degree -{k}")
    return Verdict("epsilon_basis", True, details={"size": len(pairs)})


@dataclass(frozen=True)
class LambdaMap:
    """The DG algebra map ``Lambda^m -> Lambda^n`` induced by ``phi: [m] -> [n]``."""

    phi: SimplexMap

    @property
    def source(self) -> LambdaAlgebra:
        return lambda_algebra(self.phi.source)

    @property
    def target(self) -> LambdaAlgebra:
        return lambda_algebra(self.phi.target)

    def __call__(self, p: GradedPolynomial) -> GradedPolynomial:
        assignment = {f"e{i}": self.target.e(self.phi(i)) for i in range(self.phi.source + 1)}
        return substitute(p, assignment, self.target.algebra)


def lambda_map(phi: SimplexMap) -> LambdaMap:
    return LambdaMap(phi)


def check_lambda_map(phi: SimplexMap) -> Verdict:
    """Multiplicativity and ``delta``-equivariance on every basis monomial of the source."""
    f = lambda_map(phi)
    src, tgt = f.source, f.target
    for k in range(src.n + 2):
        for J in src.basis(k):
            x = src.subset(J)
            image = f(x)
            product = tgt.algebra.one()
            for j in J:
                product = product * tgt.e(phi(j))
            if image != product:
                return Verdict("lambda_map", False, f"{phi}: not multiplicative on e{J}")
            if f(src.delta(x)) != tgt.delta(image):
                return Verdict("lambda_map", False, f"{phi}: does not commute with delta on e{J}")
    return Verdict("lambda_map", True)


# -- surjection complex -------------------------------------------------------


def admissible(n: int, k: int, convention: str = SLOT_ZERO) -> List[Sizes]:
    """Preimage-size tuples of length ``k+1`` summing to ``n+1``; one slot may be empty."""
    free = 0 if convention == SLOT_ZERO else k
    out: List[Sizes] = []

    def extend(prefix: List[int], remaining: int) -> None:
        i = len(prefix)
        low = 0 if i == free else 1
        if i == k:
            if remaining >= low:
                out.append(tuple(prefix + [remaining]))
            return
        for s in range(low, remaining + 1):
            extend(prefix + [s], remaining - s)

    extend([], n + 1)
    return sorted(out)


def normalized(sizes: Sizes, convention: str = SLOT_ZERO) -> bool:
    free = 0 if convention == SLOT_ZERO else len(sizes) - 1
    return all(s >= 1 for i, s in enumerate(sizes) if i != free)


def coface_action(sizes: Sizes, i: int) -> Sizes:
    """``d^i o f``: insert an empty slot at position ``i``."""
    return sizes[:i] + (0,) + sizes[i:]


def codegeneracy_action(sizes: Sizes, j: int) -> Sizes:
    """``s^j o f``: merge slots ``j`` and ``j+1``."""
    return sizes[:j] + (sizes[j] + sizes[j + 1],) + sizes[j + 2:]


def values(sizes: Sizes) -> Tuple[int, ...]:
    out: List[int] = []
    for j, s in enumerate(sizes):
        out.extend([j] * s)
    return tuple(out)


def sizes_of(vals: Sequence[int], k: int) -> Sizes:
    sizes = [0] * (k + 1)
    for v in vals:
        sizes[v] += 1
    return tuple(sizes)


def pullback(sizes: Sizes, phi: SimplexMap, convention: str = SLOT_ZERO) -> Optional[Sizes]:
    """``phi^*[f] = [f o phi]``, or ``None`` when the class vanishes."""
    f = values(sizes)
    if len(f) != phi.target + 1:
        raise SimplexMapError(f"cannot pull {sizes} back along {phi}")
    result = sizes_of([f[phi(j)] for j in range(phi.source + 1)], len(sizes) - 1)
    return result if normalized(result, convention) else None


def label(sizes: Sizes) -> str:
    return "f(" + ",".join(str(s) for s in sizes) + ")"


@dataclass
class SurjectionComplex:
    n: int
    convention: str
    basis: Dict[int, List[Sizes]]
    complex: TruncatedComplex

    def index(self, k: int) -> Dict[Sizes, int]:
        return {s: i for i, s in enumerate(self.basis.get(k, []))}

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, []))


@lru_cache(maxsize=None)
def surjection_complex(n: int, convention: str = SLOT_ZERO) -> SurjectionComplex:
    """``N^*(Z Delta_n)`` in degrees ``0..n+1``; ``d^2 = 0`` is verified."""
    if n < 0:
        raise SimplexMapError(f"no simplex level {n}")
    if convention not in (SLOT_ZERO, APPEND):
        raise ValueError(f"unknown convention {convention!r}")
    basis = {k: admissible(n, k, convention) for k in range(n + 2)}
    differential = {}
    for k in range(n + 1):
        target = {s: i for i, s in enumerate(basis[k + 1])}
        columns = []
        for s in basis[k]:
            image = coface_action(s, 0) if convention == SLOT_ZERO else s + (0,)
            columns.append({target[image]: Fraction(1)} if image in target else {})
        differential[k] = SparseMatrix.from_columns(len(basis[k + 1]), columns)
    complex_ = TruncatedComplex(f"N*(Z Delta_{n}) [{convention}]",
                                {k: [(0, label(s)) for s in b] for k, b in basis.items()},
                                differential)
    verdict = check_differential(complex_)
    if not verdict.passed:
        raise ComplexError(f"surjection complex: d^2 != 0 at {verdict.witness}")
    return SurjectionComplex(n, convention, basis, complex_)


def surjection_dimension(n: int, k: int) -> int:
    return comb(n + 1, k)


def append_isomorphism(n: int) -> Verdict:
    """Order reversal is an isomorphism between the two zero-slot conventions."""
    slot0, append = surjection_complex(n, SLOT_ZERO), surjection_complex(n, APPEND)
    for k in range(n + 2):
        reversed_basis = sorted(tuple(reversed(s)) for s in slot0.basis[k])
        if reversed_basis != append.basis[k]:
            return Verdict("append_isomorphism", False, f"basis mismatch in degree {k}")
    for k in range(n + 1):
        src_a, tgt_a = append.index(k), append.index(k + 1)
        for s in slot0.basis[k]:
            col = slot0.complex.d(k).column(slot0.index(k)[s])
            image = {tgt_a[tuple(reversed(slot0.basis[k + 1][r]))]: v for r, v in col.items()}
            if image != append.complex.d(k).column(src_a[tuple(reversed(s))]):
                return Verdict("append_isomorphism", False,
                               f"differential mismatch on {label(s)}")
    return Verdict("append_isomorphism", True)


# -- pairing and coproduct ----------------------------------------------------


def pair(sizes: Sizes, subset: Sequence[int]) -> int:
    """``<[f], e_(j_1)..e_(j_k)>``: the determinant ``det [a_r <= j_c]``.

    ``a_r = n_0 + .. + n_(r-1)``; since ``f`` is monotone the determinant is
    1 exactly when ``f(j_c) = c`` for every ``c`` and 0 otherwise.
    """
    k = len(sizes) - 1
    if len(subset) != k:
        return 0
    f = values(sizes)
    return int(all(f[j] == c for c, j in enumerate(subset, start=1)))


def pairing_matrix(n: int, k: int, convention: str = SLOT_ZERO) -> SparseMatrix:
    rows = admissible(n, k, convention)
    cols = lambda_algebra(n).basis(k)
    entries = {(r, c): Fraction(1) for r, s in enumerate(rows) for c, J in enumerate(cols)
               if pair(s, J)}
    return SparseMatrix(len(rows), len(cols), entries)


def threshold_pairing_matrix(n: int, convention: str = SLOT_ZERO) -> SparseMatrix:
    """Degree-one pairing ``[i <= j]`` for ``[f_(i, n-i+1)]`` against ``e_j``."""
    rows = admissible(n, 1, convention)
    return SparseMatrix(len(rows), n + 1, {(r, j): Fraction(1) for r, s in enumerate(rows)
                                           for j in range(n + 1) if s[0] <= j})


def _rho(complement: Sequence[int], k: int) -> Tuple[int, ...]:
    """``l -> l - #{j in complement : j < l}`` on ``[k]``."""
    return tuple(l - sum(1 for j in complement if j < l) for l in range(k + 1))


Tensor = Dict[Tuple[Sizes, ...], int]


def coproduct(sizes: Sizes, p: int, convention: str = SLOT_ZERO) -> Tensor:
    """``c_pq[f] = sum over shuffles (I, J) of +-[rho_J f] (x) [rho_I f]``."""
    k = len(sizes) - 1
    q = k - p
    f = values(sizes)
    out: Tensor = {}
    for I, J, sign in shuffles(p, q):
        rho_J, rho_I = _rho(J, k), _rho(I, k)
        left = sizes_of([rho_J[v] for v in f], p)
        right = sizes_of([rho_I[v] for v in f], q)
        if not (normalized(left, convention) and normalized(right, convention)):
            continue
        key = (left, right)
        out[key] = out.get(key, 0) + sign
    return {key: v for key, v in out.items() if v}


def iterated_coproduct(sizes: Sizes) -> Tensor:
    """Degree-one factors of the iterated coproduct ``(c_1,k-1 (x) ...) c_1,k-1``."""
    k = len(sizes) - 1
    if k <= 1:
        return {(sizes,): 1}
    out: Tensor = {}
    for (left, right), c in coproduct(sizes, 1).items():
        for rest, d in iterated_coproduct(right).items():
            key = (left,) + rest
            out[key] = out.get(key, 0) + c * d
    return {key: v for key, v in out.items() if v}


def antisymmetrized_thresholds(sizes: Sizes) -> Tensor:
    """``sum_sigma sign(sigma) U_sigma(1) (x) .. (x) U_sigma(k)``, ``U_r = [f_(a_r, n+1-a_r)]``."""
    k = len(sizes) - 1
    n1 = sum(sizes)
    partial = [sum(sizes[:r]) for r in range(1, k + 1)]
    out: Tensor = {}
    for perm in itertools.permutations(range(k)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        key = tuple((partial[r], n1 - partial[r]) for r in perm)
        out[key] = out.get(key, 0) + (-1 if inversions % 2 else 1)
    return {key: v for key, v in out.items() if v}


def differential_sign(n: int, k: int) -> Optional[int]:
    """The sign ``s`` with ``<du, lambda> = s <u, delta lambda>`` for ``u`` in degree ``k``.

    ``None`` if no single sign works.
    """
    sc = surjection_complex(n)
    lam = lambda_algebra(n)
    found: Optional[int] = None
    for u in sc.basis.get(k, []):
        du = coface_action(u, 0)
        du = du if normalized(du) else None
        for J in lam.basis(k + 1):
            lhs = pair(du, J) if du is not None else 0
            delta = lam.coordinates(lam.delta(lam.subset(J)), k)
            rhs = sum(c * pair(u, I) for I, c in zip(lam.basis(k), _dense(delta, comb(n + 1, k))))
            if lhs == 0 and rhs == 0:
                continue
            if lhs != rhs and lhs != -rhs:
                return None
            sign = 1 if lhs == rhs else -1
            if found is None:
                found = sign
            elif found != sign:
                return None
    return found if found is not None else 1


def _dense(v: Dict[int, Fraction], size: int) -> List[Fraction]:
    return [v.get(i, Fraction(0)) for i in range(size)]


def coproduct_duality(n: int, max_degree: int) -> Verdict:
    """``<c_pq u, alpha (x) beta> = <u, alpha beta>`` for all ``p + q = k <= max_degree``."""
    lam = lambda_algebra(n)
    checked = 0
    for k in range(2, min(max_degree, n + 1) + 1):
        for u in admissible(n, k):
            for p in range(1, k):
                c = coproduct(u, p)
                for A in lam.basis(p):
                    for B in lam.basis(k - p):
                        lhs = sum(v * pair(left, A) * pair(right, B)
                                  for (left, right), v in c.items())
                        product = lam.subset(A) * lam.subset(B)
                        rhs = sum(coef * pair(u, J) for J, coef in
                                  zip(lam.basis(k), _dense(lam.coordinates(product, k),
                                                           comb(n + 1, k))))
                        checked += 1
                        if lhs != rhs:
                            return Verdict("coproduct_duality", False,
                                           f"n={n}, {label(u)}, p={p}, e{A} (x) e{B}")
    return Verdict("coproduct_duality", True, details={"pairs": checked})


def equivariance_check(bound: int) -> Verdict:
    """``<phi^*[f], e_J> = <[f], phi(e_J)>`` for all ``phi: [m] -> [n]``, ``m, n <= bound``."""
    checked = 0
    for m, n in itertools.product(range(bound + 1), repeat=2):
        lam_m, lam_n = lambda_algebra(m), lambda_algebra(n)
        for phi in all_maps(m, n):
            f = lambda_map(phi)
            for k in range(1, min(m, n) + 2):
                for u in admissible(n, k):
                    pulled = pullback(u, phi)
                    for J in lam_m.basis(k):
                        lhs = pair(pulled, J) if pulled is not None else 0
                        image = lam_n.coordinates(f(lam_m.subset(J)), k)
                        rhs = sum(c * pair(u, I) for I, c in
                                  zip(lam_n.basis(k), _dense(image, comb(n + 1, k))))
                        checked += 1
                        if lhs != rhs:
                            return Verdict("pairing_equivariance", False,
                                           f"{phi}, {label(u)}, e{J}")
    return Verdict("pairing_equivariance", True, details={"pairs": checked})


def lambda_pairing(n: int) -> Verdict:
    """Nondegeneracy in every degree, coproduct duality and the iterated-coproduct formula."""
    checks: List[Verdict] = []
    ranks = {}
    for k in range(n + 2):
        m = pairing_matrix(n, k)
        ranks[k] = rank(m)
        if ranks[k] != m.rows or m.rows != m.cols:
            checks.append(Verdict("pairing_nondegenerate", False, f"n={n}, degree -{k}"))
    if not any(v.name == "pairing_nondegenerate" for v in checks):
        checks.append(Verdict("pairing_nondegenerate", True, details={"ranks": ranks}))
    thresholds = threshold_pairing_matrix(n)
    if thresholds != pairing_matrix(n, 1):
        checks.append(Verdict("threshold_pairing", False, f"n={n}: [i <= j] differs",
                              informational=True))
    else:
        checks.append(Verdict("threshold_pairing", True))
    for k in range(2, n + 2):
        for u in admissible(n, k):
            if iterated_coproduct(u) != antisymmetrized_thresholds(u):
                checks.append(Verdict("iterated_coproduct", False, f"n={n}, {label(u)}"))
                break
    checks.append(coproduct_duality(n, min(n + 1, 3)))
    signs = {k: differential_sign(n, k) for k in range(n + 1)}
    checks.append(Verdict("differential_duality", all(s is not None for s in signs.values()),
                          None if all(s is not None for s in signs.values())
                          else f"n={n}: no consistent sign in degrees "
                               f"{[k for k, s in signs.items() if s is None]}",
                          {"signs": {str(k): s for k, s in signs.items()}}))
    return combine(f"lambda_pairing[{n}]", checks, n=n)


def append_convention_report(n: int) -> Verdict:
    """The append-zero convention: isomorphic complex, degenerate threshold pairing."""
    iso = append_isomorphism(n)
    thresholds = threshold_pairing_matrix(n, APPEND)
    degenerate = rank(thresholds) < thresholds.rows or thresholds.rows != thresholds.cols
    return Verdict("append_convention", iso.passed, iso.witness,
                   {"isomorphic_to_slot0": iso.passed,
                    "threshold_pairing_rank": rank(thresholds),
                    "threshold_pairing_degenerate": degenerate},
                   informational=True)

