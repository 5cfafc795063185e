"""Simplicial modules: normalization, the K-functor and the Eilenberg-Zilber maps.

A :class:`SimplicialModuleFamily` stores levels ``0..top`` of a simplicial
vector space in chosen weight-homogeneous bases. Normalized chains are placed
in cohomological degree ``-n`` for level ``n`` so that they share
:class:`~dmc_checker.complexes.TruncatedComplex` with the cochain side.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .complexes import (Basis, ChainMap, TruncatedComplex, check_differential,
                        total_cohomology_dims)
from .errors import ComplexError
from .exact import SparseMatrix, Vector, rank, rank_kernel, row_reduce, solve_columns, vector_add
from .lambda_algebra import (Sizes, admissible, label, lambda_algebra, lambda_map,
                             pairing_matrix, pullback, differential_sign)
from .simplex import SimplexMap, codegeneracy, coface, shuffles
from .verdict import Verdict, combine

LOGGER = logging.getLogger(__name__)

Product = Callable[[int, Vector, Vector], Vector]
Coproduct = Callable[[int, Vector], Vector]


def _weight_preserving(m: SparseMatrix, source: Basis, target: Basis) -> bool:
    return all(source[c][0] == target[r][0] for (r, c) in m.entries)


@dataclass
class SimplicialModuleFamily:
    """Levels ``0..top`` of a simplicial vector space in weight-homogeneous bases.

    ``faces[n][i]`` maps ``A_n -> A_(n-1)`` and ``degeneracies[n][i]`` maps
    ``A_n -> A_(n+1)``.

    ``product``/``unit`` make the family a simplicial commutative algebra and
    ``coproduct`` (into ``A_n (x) A_n``, Kronecker-ordered) a simplicial
    coalgebra; all three are optional.
    """

    name: str
    basis: Dict[int, Basis]
    faces: Dict[int, List[SparseMatrix]]
    degeneracies: Dict[int, List[SparseMatrix]]
    product: Optional[Product] = None
    unit: Optional[Callable[[int], Vector]] = None
    coproduct: Optional[Coproduct] = None

    @property
    def top(self) -> int:
        return max(self.basis)

    def levels(self) -> List[int]:
        return list(range(self.top + 1))

    def dim(self, n: int) -> int:
        return len(self.basis[n])

    def face(self, n: int, i: int) -> SparseMatrix:
        return self.faces[n][i]

    def degeneracy(self, n: int, i: int) -> SparseMatrix:
        return self.degeneracies[n][i]

    def degenerate_span(self, n: int) -> List[Vector]:
        """Spanning set of ``D_n``, the sum of the images of ``sigma_i: A_(n-1) -> A_n``."""
        if n == 0:
            return []
        return [col for i in range(n) for col in self.degeneracy(n - 1, i).columns() if col]

    def alternating_face(self, n: int) -> SparseMatrix:
        total = SparseMatrix(self.dim(n - 1), self.dim(n))
        for i in range(n + 1):
            face = self.face(n, i)
            total = total + face if i % 2 == 0 else total - face
        return total

    def check_identities(self) -> Verdict:
        """Every simplicial identity that lies inside the stored levels."""
        checked = 0

        def fail(relation: str, n: int) -> Verdict:
            return Verdict("simplicial_identities", False, f"{self.name}: {relation} at level {n}")

        for n in range(2, self.top + 1):
            for i, j in itertools.combinations(range(n + 1), 2):
                checked += 1
                if self.face(n - 1, i) @ self.face(n, j) != \
                        self.face(n - 1, j - 1) @ self.face(n, i):
                    return fail(f"d{i} d{j}", n)
        for n in range(self.top - 1):
            for i, j in itertools.combinations_with_replacement(range(n + 1), 2):
                checked += 1
                if self.degeneracy(n + 1, i) @ self.degeneracy(n, j) != \
                        self.degeneracy(n + 1, j + 1) @ self.degeneracy(n, i):
                    return fail(f"s{i} s{j}", n)
        for n in range(self.top):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = self.face(n + 1, i) @ self.degeneracy(n, j)
                    if i in (j, j + 1):
                        rhs = SparseMatrix.identity(self.dim(n))
                    elif n == 0:
                        continue
                    elif i < j:
                        rhs = self.degeneracy(n - 1, j - 1) @ self.face(n, i)
                    else:
                        rhs = self.degeneracy(n - 1, j) @ self.face(n, i - 1)
                    checked += 1
                    if lhs != rhs:
                        return fail(f"d{i} s{j}", n)
        return Verdict("simplicial_identities", True, details={"relations": checked})


def _require_identities(A: SimplicialModuleFamily) -> None:
    verdict = A.check_identities()
    if not verdict.passed:
        raise ComplexError(f"simplicial identities fail: {verdict.witness}")


# -- constructions ------------------------------------------------------------


def simplicial_set_module(facets: Sequence[Sequence[int]], levels: int,
                          name: str = "") -> SimplicialModuleFamily:
    """Free module on the sub-simplicial set of a simplex spanned by ``facets``.

    ``n``-simplices are nondecreasing vertex sequences of length ``n+1``
    inside one facet; ``d_i`` drops entry ``i`` and ``s_i`` repeats it.
    """
    facet_sets = [frozenset(f) for f in facets]
    vertices = sorted(set().union(*facet_sets)) if facet_sets else []
    simplices: Dict[int, List[Tuple[int, ...]]] = {}
    for n in range(levels + 1):
        simplices[n] = [s for s in itertools.combinations_with_replacement(vertices, n + 1)
                        if any(set(s) <= f for f in facet_sets)]
    index = {n: {s: i for i, s in enumerate(ss)} for n, ss in simplices.items()}
    faces: Dict[int, List[SparseMatrix]] = {}
    degeneracies: Dict[int, List[SparseMatrix]] = {}
    for n in range(levels + 1):
        if n >= 1:
            faces[n] = [SparseMatrix.from_columns(
                len(simplices[n - 1]),
                [{index[n - 1][s[:i] + s[i + 1:]]: Fraction(1)} for s in simplices[n]])
                for i in range(n + 1)]
        if n < levels:
            degeneracies[n] = [SparseMatrix.from_columns(
                len(simplices[n + 1]),
                [{index[n + 1][s[:i + 1] + s[i:]]: Fraction(1)} for s in simplices[n]])
                for i in range(n + 1)]
    basis = {n: [(0, "x" + "".join(str(v) for v in s)) for s in ss]
             for n, ss in simplices.items()}
    return SimplicialModuleFamily(name or f"Z[{'|'.join(str(sorted(f)) for f in facets)}]",
                                  basis, faces, degeneracies)


def standard_simplex_module(n: int, levels: int) -> SimplicialModuleFamily:
    """``Z Delta^n`` through level ``levels``."""
    return simplicial_set_module([range(n + 1)], levels, f"Z Delta^{n}")


def constant_module(dimension: int, levels: int) -> SimplicialModuleFamily:
    """Every level equal to ``Q^dimension`` with identity structure maps."""
    identity = SparseMatrix.identity(dimension)
    return SimplicialModuleFamily(
        f"const(Q^{dimension})",
        {n: [(0, f"c{j}") for j in range(dimension)] for n in range(levels + 1)},
        {n: [identity] * (n + 1) for n in range(1, levels + 1)},
        {n: [identity] * (n + 1) for n in range(levels)})


def change_basis(A: SimplicialModuleFamily, changes: Dict[int, SparseMatrix],
                 name: str = "") -> SimplicialModuleFamily:
    """Conjugate every structure map by invertible ``changes[n]`` on ``A_n``."""
    inverses: Dict[int, SparseMatrix] = {}
    for n, P in changes.items():
        inverse = solve_columns(P, SparseMatrix.identity(P.rows).columns())
        if inverse is None:
            raise ComplexError(f"basis change at level {n} is singular")
        inverses[n] = inverse
    faces = {n: [changes[n - 1] @ m @ inverses[n] for m in ms] for n, ms in A.faces.items()}
    degeneracies = {n: [changes[n + 1] @ m @ inverses[n] for m in ms]
                    for n, ms in A.degeneracies.items()}
    basis = {n: [(w, f"b{j}") for j, (w, _) in enumerate(b)] for n, b in A.basis.items()}
    return SimplicialModuleFamily(name or f"{A.name}'", basis, faces, degeneracies)


def random_family(seed: int, levels: int = 3, vertices: int = 4) -> SimplicialModuleFamily:
    """Random sub-simplicial set of ``Delta^(vertices-1)`` in a random unitriangular basis."""
    rng = random.Random(seed)
    facets = []
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(1, min(vertices, levels + 1))
        facets.append(sorted(rng.sample(range(vertices), size)))
    A = simplicial_set_module(facets, levels)
    changes = {}
    for n in A.levels():
        d = A.dim(n)
        entries = {(i, i): 1 for i in range(d)}
        for i, j in itertools.combinations(range(d), 2):
            entries[(i, j)] = rng.randint(-2, 2)
        changes[n] = SparseMatrix(d, d, entries)
    LOGGER.debug("random family seed %d: facets %s", seed, facets)
    return change_basis(A, changes, f"random[{seed}]")


# -- normalization ------------------------------------------------------------


@dataclass
class KernelForm:
    """``N_n = cap_(i>=1) ker d_i`` with differential ``d_0``; ``inclusions[n]`` spans ``N_n``."""

    family: SimplicialModuleFamily
    complex: TruncatedComplex
    inclusions: Dict[int, SparseMatrix]


@dataclass
class QuotientForm:
    """``N_n = A_n / D_n``; ``projections[n] sections[n] = 1``."""

    family: SimplicialModuleFamily
    complex: TruncatedComplex
    projections: Dict[int, SparseMatrix]
    sections: Dict[int, SparseMatrix]


def _degree(n: int) -> int:
    return -n


def kernel_form(A: SimplicialModuleFamily) -> KernelForm:
    """Exact per-weight bases of ``cap_(i=1..n) ker d_i`` and the restricted ``d_0``."""
    _require_identities(A)
    inclusions: Dict[int, SparseMatrix] = {}
    basis: Dict[int, Basis] = {}
    for n in A.levels():
        if n == 0:
            vectors = [{i: Fraction(1)} for i in range(A.dim(0))]
        else:
            for i in range(1, n + 1):
                if not _weight_preserving(A.face(n, i), A.basis[n], A.basis[n - 1]):
                    raise ComplexError(f"{A.name}: d_{i} at level {n} does not preserve weight")
            stacked = SparseMatrix.vstack([A.face(n, i) for i in range(1, n + 1)])
            vectors = []
            for w in sorted({w for w, _ in A.basis[n]}):
                cols = [c for c, (cw, _) in enumerate(A.basis[n]) if cw == w]
                _, kernel = rank_kernel(stacked.select(cols=cols))
                vectors.extend({cols[j]: v for j, v in vec.items()} for vec in kernel)
        inclusions[n] = SparseMatrix.from_columns(A.dim(n), vectors)
        basis[_degree(n)] = [A.basis[n][max(v)] for v in vectors]
    differential: Dict[int, SparseMatrix] = {}
    for n in A.levels()[1:]:
        images = (A.face(n, 0) @ inclusions[n]).columns()
        restricted = solve_columns(inclusions[n - 1], images)
        if restricted is None:
            raise ComplexError(f"{A.name}: d_0 leaves the normalized chains at level {n}")
        differential[_degree(n)] = restricted
    complex_ = TruncatedComplex(f"N({A.name})", basis, differential,
                                lower_bounded=False, upper_bounded=True)
    return KernelForm(A, complex_, inclusions)


def _quotient(dimension: int, spanning: List[Vector]
              ) -> Tuple[SparseMatrix, SparseMatrix, List[int]]:
    """Projection ``Q``, section ``R`` and free coordinates for ``Q^dimension / span``."""
    if not spanning:
        identity = SparseMatrix.identity(dimension)
        return identity, identity, list(range(dimension))
    echelon = row_reduce(SparseMatrix.from_columns(dimension, spanning).transpose())
    free = echelon.free_columns
    position = {f: j for j, f in enumerate(free)}
    entries: Dict[Tuple[int, int], Fraction] = {(j, f): Fraction(1) for j, f in enumerate(free)}
    for p, row in zip(echelon.pivots, echelon.reduced):
        for f, v in row.items():
            if f != p:
                entries[(position[f], p)] = -v
    Q = SparseMatrix(len(free), dimension, entries)
    R = SparseMatrix(dimension, len(free), {(f, j): 1 for j, f in enumerate(free)})
    return Q, R, free


def quotient_form(A: SimplicialModuleFamily) -> QuotientForm:
    """``A_n / D_n`` with the alternating face sum as differential."""
    _require_identities(A)
    projections: Dict[int, SparseMatrix] = {}
    sections: Dict[int, SparseMatrix] = {}
    basis: Dict[int, Basis] = {}
    for n in A.levels():
        Q, R, free = _quotient(A.dim(n), A.degenerate_span(n))
        projections[n], sections[n] = Q, R
        basis[_degree(n)] = [A.basis[n][f] for f in free]
    differential = {_degree(n): projections[n - 1] @ A.alternating_face(n) @ sections[n]
                    for n in A.levels()[1:]}
    complex_ = TruncatedComplex(f"A/D({A.name})", basis, differential,
                                lower_bounded=False, upper_bounded=True)
    return QuotientForm(A, complex_, projections, sections)


def normalize(A: SimplicialModuleFamily) -> TruncatedComplex:
    """Normalized chains in kernel form, after checking the simplicial identities."""
    return kernel_form(A).complex


def compare_normalizations(A: SimplicialModuleFamily) -> Verdict:
    """The quotient projection restricted to the kernel form is an isomorphism of complexes."""
    K, Qf = kernel_form(A), quotient_form(A)
    maps: Dict[int, SparseMatrix] = {}
    for n in A.levels():
        P = Qf.projections[n] @ K.inclusions[n]
        if P.rows != P.cols or rank(P) != P.rows:
            return Verdict("normalization_forms", False,
                           f"{A.name}: level {n} projection has shape {P.rows}x{P.cols}, "
                           f"rank {rank(P)}")
        maps[_degree(n)] = P
    chain = ChainMap(K.complex, Qf.complex, maps).check()
    if not chain.passed:
        return Verdict("normalization_forms", False, f"{A.name}: {chain.witness}")
    return Verdict("normalization_forms", True,
                   details={"dims": {str(n): K.complex.dim(_degree(n)) for n in A.levels()}})


# -- K-functor ----------------------------------------------------------------


Slot = Tuple[int, Sizes, int]
TensorIndex = Tuple[int, int, Tuple[int, ...]]


@dataclass
class KFunctorLevel:
    """``K^n(Z)`` realized as chain maps ``N*(Z Delta_n) -> Z`` and as ``Z^0(Z (x) Lambda^n)``.

    A chain map is free on sources (classes with ``n_0 > 0``): ``slots`` lists
    ``(k, source, basis index of Z^k)`` and a vector in these coordinates is
    the family of values on sources. ``isomorphism`` sends it to the
    ``(Z (x) Lambda^n)^0`` coordinates ``tensor_basis``.
    """

    source: TruncatedComplex
    n: int
    slots: List[Slot]
    tensor_basis: List[TensorIndex]
    isomorphism: SparseMatrix
    cocycles: List[Vector]
    verdict: Verdict

    @property
    def dim(self) -> int:
        return len(self.slots)

    def value(self, phi: Vector, k: int, sizes: Sizes) -> Vector:
        return _map_value(self.source, self.slots, phi, k, sizes)


def _map_value(Z: TruncatedComplex, slots: List[Slot], phi: Vector, k: int, sizes: Sizes
               ) -> Vector:
    """``phi([f])`` for any basis class, using ``phi(d u) = d phi(u)`` off the sources."""
    if sizes[0] > 0:
        out: Vector = {}
        for s, c in phi.items():
            j, u, z = slots[s]
            if j == k and u == sizes:
                out[z] = out.get(z, 0) + c
        return out
    inner = _map_value(Z, slots, phi, k - 1, sizes[1:])
    return Z.d(k - 1).apply(inner) if inner else {}


def _z_degrees(Z: TruncatedComplex, n: int) -> List[int]:
    if Z.lo < 0:
        raise ComplexError(f"{Z.name}: the K-functor needs a complex in degrees >= 0")
    return [k for k in range(0, min(Z.hi, n + 1) + 1)]


def _slots(Z: TruncatedComplex, n: int) -> List[Slot]:
    return [(k, u, z) for k in _z_degrees(Z, n) for u in admissible(n, k) if u[0] > 0
            for z in range(Z.dim(k))]


def _tensor_basis(Z: TruncatedComplex, n: int, degree: int) -> List[TensorIndex]:
    """Coordinates of ``(Z (x) Lambda^n)^degree``: ``(k, z, J)`` with ``k - |J| = degree``."""
    lam = lambda_algebra(n)
    return [(k, z, J) for k in range(max(degree, 0), Z.hi + 1)
            for z in range(Z.dim(k)) for J in lam.basis(k - degree) if k - degree <= n + 1]


def _tensor_differential(Z: TruncatedComplex, n: int) -> SparseMatrix:
    """``d(z (x) e_J) = dz (x) e_J + (-1)^|z| z (x) delta e_J`` on degree 0."""
    lam = lambda_algebra(n)
    source, target = _tensor_basis(Z, n, 0), _tensor_basis(Z, n, 1)
    index = {t: i for i, t in enumerate(target)}
    columns = []
    for k, z, J in source:
        column: Vector = {}
        if k + 1 <= Z.hi:
            for r, v in Z.d(k).column(z).items():
                column = vector_add(column, {index[(k + 1, r, J)]: v})
        if k >= 1:
            sign = -1 if k % 2 else 1
            delta = lam.coordinates(lam.delta(lam.subset(J)), k - 1)
            lower = lam.basis(k - 1)
            for j, v in delta.items():
                column = vector_add(column, {index[(k, z, lower[j])]: sign * v})
        columns.append(column)
    return SparseMatrix.from_columns(len(target), columns)


def _dual_basis(n: int, k: int) -> SparseMatrix:
    """Columns ``u^dual`` in ``Lambda^n``, dual to the classes of degree ``k``."""
    M = pairing_matrix(n, k)
    inverse = solve_columns(M, SparseMatrix.identity(M.rows).columns())
    if inverse is None:
        raise ComplexError(f"pairing of N^{k}(Z Delta_{n}) with Lambda^{n} is degenerate")
    return inverse


def _iso_constants(n: int, top: int) -> Dict[int, int]:
    """``c_0 = 1``, ``c_k = (-1)^(k+1) s_(k-1) c_(k-1)`` with ``s`` the duality sign of ``d``."""
    constants = {0: 1}
    for k in range(1, top + 1):
        s = differential_sign(n, k - 1)
        if s is None:
            raise ComplexError(f"no consistent duality sign in degree {k - 1} for n = {n}")
        constants[k] = (1 if (k + 1) % 2 == 0 else -1) * s * constants[k - 1]
    return constants


def _iota(Z: TruncatedComplex, n: int, slots: List[Slot],
          tensor_basis: List[TensorIndex]) -> SparseMatrix:
    """``phi -> sum_k c_k sum_u phi(u) (x) u^dual``."""
    degrees = _z_degrees(Z, n)
    lam = lambda_algebra(n)
    constants = _iso_constants(n, max(degrees))
    duals = {k: _dual_basis(n, k) for k in degrees}
    index = {t: i for i, t in enumerate(tensor_basis)}
    columns = []
    for s in range(len(slots)):
        phi = {s: Fraction(1)}
        column: Vector = {}
        for k in degrees:
            subsets = lam.basis(k)
            for u_index, u in enumerate(admissible(n, k)):
                value = _map_value(Z, slots, phi, k, u)
                if not value:
                    continue
                for j, coefficient in duals[k].column(u_index).items():
                    for z, v in value.items():
                        column = vector_add(column, {index[(k, z, subsets[j])]:
                                                     constants[k] * coefficient * v})
        columns.append(column)
    return SparseMatrix.from_columns(len(tensor_basis), columns)


def k_functor(Z: TruncatedComplex, n: int) -> KFunctorLevel:
    """``K^n(Z)`` in both realizations together with the verified isomorphism."""
    slots = _slots(Z, n)
    tensor_basis = _tensor_basis(Z, n, 0)
    delta = _tensor_differential(Z, n)
    cocycle_rank, cocycles = rank_kernel(delta)
    iota = _iota(Z, n, slots, tensor_basis)
    checks = [
        Verdict("iota_cocycles", (delta @ iota).is_zero(),
                None if (delta @ iota).is_zero() else f"{Z.name}, n={n}: image not closed"),
        Verdict("iota_injective", rank(iota) == len(slots),
                None if rank(iota) == len(slots) else f"{Z.name}, n={n}: rank {rank(iota)}"),
        Verdict("k_functor_dims", len(cocycles) == len(slots),
                None if len(cocycles) == len(slots)
                else f"{Z.name}, n={n}: {len(slots)} maps vs {len(cocycles)} cocycles",
                {"maps": len(slots), "cocycles": len(cocycles)}),
    ]
    LOGGER.debug("K^%d(%s): dim %d, tensor rank %d", n, Z.name, len(slots), cocycle_rank)
    return KFunctorLevel(Z, n, slots, tensor_basis, iota, cocycles,
                         combine(f"k_functor[{n}]", checks, dimension=len(slots)))


def k_functor_map(Z: TruncatedComplex, theta: SimplexMap
                  ) -> Tuple[SparseMatrix, SparseMatrix, Verdict]:
    """``K(theta): K^m -> K^n`` on both realizations, and their compatibility with ``iota``.

    On maps ``phi -> phi o theta^*``; on cocycles ``1 (x) theta``.
    """
    source, target = k_functor(Z, theta.source), k_functor(Z, theta.target)
    target_slot = {slot: i for i, slot in enumerate(target.slots)}
    map_columns = []
    for s in range(source.dim):
        phi = {s: Fraction(1)}
        column: Vector = {}
        for (k, u, z) in target.slots:
            pulled = pullback(u, theta)
            if pulled is None:
                continue
            value = source.value(phi, k, pulled)
            if z in value:
                column[target_slot[(k, u, z)]] = value[z]
        map_columns.append(column)
    on_maps = SparseMatrix.from_columns(target.dim, map_columns)

    f = lambda_map(theta)
    lam_m, lam_n = lambda_algebra(theta.source), lambda_algebra(theta.target)
    index = {t: i for i, t in enumerate(target.tensor_basis)}
    tensor_columns = []
    for k, z, J in source.tensor_basis:
        image = lam_n.coordinates(f(lam_m.subset(J)), len(J))
        subsets = lam_n.basis(len(J))
        tensor_columns.append({index[(k, z, subsets[j])]: v for j, v in image.items()})
    on_tensors = SparseMatrix.from_columns(len(target.tensor_basis), tensor_columns)

    agree = target.isomorphism @ on_maps == on_tensors @ source.isomorphism
    verdict = Verdict("k_functor_naturality", agree,
                      None if agree else f"{Z.name}: iota does not commute with {theta}")
    return on_maps, on_tensors, verdict


def k_functor_family(Z: TruncatedComplex, levels: int) -> SimplicialModuleFamily:
    """The levelwise linear dual of ``K^0(Z) .. K^levels(Z)``, a simplicial module."""
    values = {n: k_functor(Z, n) for n in range(levels + 1)}
    basis = {n: [(0, f"{label(u)}:{Z.basis[k][z][1]}") for k, u, z in v.slots]
             for n, v in values.items()}
    faces = {n: [k_functor_map(Z, coface(n, i))[0].transpose() for i in range(n + 1)]
             for n in range(1, levels + 1)}
    degeneracies = {n: [k_functor_map(Z, codegeneracy(n, i))[0].transpose()
                        for i in range(n + 1)] for n in range(levels)}
    return SimplicialModuleFamily(f"K({Z.name})^dual", basis, faces, degeneracies)


# -- Eilenberg-Zilber ---------------------------------------------------------


def _kron_basis(left: Basis, right: Basis) -> Basis:
    return [(wa + wb, f"{la}(x){lb}") for wa, la in left for wb, lb in right]


@dataclass
class BisimplicialModule:
    """External tensor ``A [x] B``: ``(p, q) -> A_p (x) B_q`` with commuting actions."""

    first: SimplicialModuleFamily
    second: SimplicialModuleFamily

    @property
    def name(self) -> str:
        return f"{self.first.name}[x]{self.second.name}"

    @property
    def top(self) -> int:
        return min(self.first.top, self.second.top)

    def dim(self, p: int, q: int) -> int:
        return self.first.dim(p) * self.second.dim(q)

    def horizontal_face(self, p: int, q: int, i: int) -> SparseMatrix:
        return self.first.face(p, i).kron(SparseMatrix.identity(self.second.dim(q)))

    def vertical_face(self, p: int, q: int, j: int) -> SparseMatrix:
        return SparseMatrix.identity(self.first.dim(p)).kron(self.second.face(q, j))

    def horizontal_degeneracy(self, p: int, q: int, i: int) -> SparseMatrix:
        return self.first.degeneracy(p, i).kron(SparseMatrix.identity(self.second.dim(q)))

    def vertical_degeneracy(self, p: int, q: int, j: int) -> SparseMatrix:
        return SparseMatrix.identity(self.first.dim(p)).kron(self.second.degeneracy(q, j))

    def diagonal(self) -> SimplicialModuleFamily:
        A, B = self.first, self.second
        levels = range(self.top + 1)
        return SimplicialModuleFamily(
            f"Diag({self.name})",
            {n: _kron_basis(A.basis[n], B.basis[n]) for n in levels},
            {n: [A.face(n, i).kron(B.face(n, i)) for i in range(n + 1)] for n in levels if n},
            {n: [A.degeneracy(n, i).kron(B.degeneracy(n, i)) for i in range(n + 1)]
             for n in levels if n < self.top})


def external_tensor(A: SimplicialModuleFamily, B: SimplicialModuleFamily) -> BisimplicialModule:
    _require_identities(A)
    _require_identities(B)
    return BisimplicialModule(A, B)


def _front(A: SimplicialModuleFamily, n: int, p: int) -> SparseMatrix:
    """``d_(p+1) .. d_n: A_n -> A_p``, keeping vertices ``0..p``."""
    m = SparseMatrix.identity(A.dim(n))
    for level in range(n, p, -1):
        m = A.face(level, level) @ m
    return m


def _back(A: SimplicialModuleFamily, n: int, p: int) -> SparseMatrix:
    """``d_0 .. d_(p-1): A_n -> A_(n-p)``, keeping vertices ``p..n``."""
    m = SparseMatrix.identity(A.dim(n))
    for step, i in enumerate(range(p - 1, -1, -1)):
        m = A.face(n - step, i) @ m
    return m


def _degeneracy_word(A: SimplicialModuleFamily, level: int,
                     indices: Sequence[int]) -> SparseMatrix:
    """``s_(i_r) .. s_(i_1)`` starting at ``A_level``; ``s_(i_1)`` is applied first."""
    m = SparseMatrix.identity(A.dim(level))
    for step, i in enumerate(indices):
        m = A.degeneracy(level + step, i) @ m
    return m


@dataclass
class EilenbergZilber:
    """Quotient normalizations of both factors and of the diagonal, plus ``Tot``."""

    bisimplicial: BisimplicialModule
    first: QuotientForm
    second: QuotientForm
    diagonal: QuotientForm
    total: TruncatedComplex
    offsets: Dict[int, Dict[int, int]] = field(default_factory=dict)

    def total_block(self, n: int, p: int) -> range:
        start = self.offsets[n][p]
        size = self.first.complex.dim(_degree(p)) * self.second.complex.dim(_degree(n - p))
        return range(start, start + size)


def total_complex(X: BisimplicialModule) -> EilenbergZilber:
    """``Tot(N)_n = sum_(p+q=n) N_p (x) N_q`` with ``d = d^(1) + (-1)^p d^(2)``."""
    NA, NB = quotient_form(X.first), quotient_form(X.second)
    ND = quotient_form(X.diagonal())
    top = X.top
    basis: Dict[int, Basis] = {}
    offsets: Dict[int, Dict[int, int]] = {}
    for n in range(top + 1):
        offsets[n] = {}
        rows: Basis = []
        for p in range(n + 1):
            offsets[n][p] = len(rows)
            rows.extend(_kron_basis(NA.complex.basis[_degree(p)],
                                    NB.complex.basis[_degree(n - p)]))
        basis[_degree(n)] = rows
    differential: Dict[int, SparseMatrix] = {}
    for n in range(1, top + 1):
        entries: Dict[Tuple[int, int], Fraction] = {}
        for p in range(n + 1):
            q = n - p
            dim_a, dim_b = NA.complex.dim(_degree(p)), NB.complex.dim(_degree(q))
            col0 = offsets[n][p]
            if p >= 1:
                block = NA.complex.d(_degree(p)).kron(SparseMatrix.identity(dim_b))
                row0 = offsets[n - 1][p - 1]
                for (r, c), v in block.entries.items():
                    entries[(row0 + r, col0 + c)] = entries.get((row0 + r, col0 + c), 0) + v
            if q >= 1:
                sign = -1 if p % 2 else 1
                block = SparseMatrix.identity(dim_a).kron(NB.complex.d(_degree(q)))
                row0 = offsets[n - 1][p]
                for (r, c), v in block.entries.items():
                    entries[(row0 + r, col0 + c)] = \
                        entries.get((row0 + r, col0 + c), 0) + sign * v
        differential[_degree(n)] = SparseMatrix(len(basis[_degree(n - 1)]),
                                                len(basis[_degree(n)]), entries)
    total = TruncatedComplex(f"Tot({X.name})", basis, differential,
                             lower_bounded=False, upper_bounded=True)
    return EilenbergZilber(X, NA, NB, ND, total, offsets)


def _aw_raw(ez: EilenbergZilber, n: int) -> SparseMatrix:
    """Alexander-Whitney from ``A_n (x) B_n`` into ``Tot_n``; kills degenerate simplices."""
    A, B = ez.bisimplicial.first, ez.bisimplicial.second
    blocks = [(ez.first.projections[p] @ _front(A, n, p)).kron(
        ez.second.projections[n - p] @ _back(B, n, p)) for p in range(n + 1)]
    return SparseMatrix.vstack(blocks)


def _shuffle_raw(ez: EilenbergZilber, p: int, q: int) -> SparseMatrix:
    """``sum sign s^(1)_J s^(2)_I``: ``A_p (x) B_q -> A_(p+q) (x) B_(p+q)``."""
    A, B = ez.bisimplicial.first, ez.bisimplicial.second
    total = SparseMatrix(A.dim(p + q) * B.dim(p + q), A.dim(p) * B.dim(q))
    for I, J, sign in shuffles(p, q):
        term = _degeneracy_word(A, p, J).kron(_degeneracy_word(B, q, I))
        total = total + term if sign > 0 else total - term
    return total


def aw_map(ez: EilenbergZilber) -> ChainMap:
    """``f: N(Diag) -> Tot(N)``."""
    maps = {_degree(n): _aw_raw(ez, n) @ ez.diagonal.sections[n]
            for n in range(ez.bisimplicial.top + 1)}
    return ChainMap(ez.diagonal.complex, ez.total, maps)


def shuffle_map(ez: EilenbergZilber) -> ChainMap:
    """``g: Tot(N) -> N(Diag)``."""
    maps: Dict[int, SparseMatrix] = {}
    for n in range(ez.bisimplicial.top + 1):
        blocks = []
        for p in range(n + 1):
            q = n - p
            section = ez.first.sections[p].kron(ez.second.sections[q])
            blocks.append(ez.diagonal.projections[n] @ _shuffle_raw(ez, p, q) @ section)
        maps[_degree(n)] = SparseMatrix.hstack(blocks, ez.diagonal.complex.dim(_degree(n)))
    return ChainMap(ez.total, ez.diagonal.complex, maps)


def _renamed(verdict: Verdict, name: str) -> Verdict:
    return Verdict(name, verdict.passed, verdict.witness, verdict.details)


def eilenberg_zilber_check(A: SimplicialModuleFamily, B: SimplicialModuleFamily) -> Verdict:
    """``f`` and ``g`` are well defined chain maps with ``f g = 1`` on ``Tot``."""
    X = external_tensor(A, B)
    ez = total_complex(X)
    f, g = aw_map(ez), shuffle_map(ez)
    checks = [check_differential(ez.total), _renamed(f.check(), "aw_chain_map"),
              _renamed(g.check(), "shuffle_chain_map")]
    failures: List[Verdict] = []
    for n in range(X.top + 1):
        degenerate = ez.diagonal.family.degenerate_span(n)
        if degenerate and not (_aw_raw(ez, n) @ SparseMatrix.from_columns(
                A.dim(n) * B.dim(n), degenerate)).is_zero():
            failures.append(Verdict("aw_well_defined", False, f"level {n}"))
        for p in range(n + 1):
            q = n - p
            spans = [SparseMatrix.from_columns(A.dim(p), A.degenerate_span(p)).kron(
                         SparseMatrix.identity(B.dim(q))),
                     SparseMatrix.identity(A.dim(p)).kron(
                         SparseMatrix.from_columns(B.dim(q), B.degenerate_span(q)))]
            for span in spans:
                if span.cols and not (ez.diagonal.projections[n] @ _shuffle_raw(ez, p, q)
                                      @ span).is_zero():
                    failures.append(Verdict("shuffle_well_defined", False,
                                            f"bidegree ({p}, {q})"))
        composite = f.at(_degree(n)) @ g.at(_degree(n))
        if composite != SparseMatrix.identity(ez.total.dim(_degree(n))):
            failures.append(Verdict("fg_identity", False, f"total degree {n}"))
    checks.extend(failures or [Verdict("well_defined", True), Verdict("fg_identity", True)])
    if all(c.passed for c in checks):
        diag_h = total_cohomology_dims(ez.diagonal.complex)
        tot_h = total_cohomology_dims(ez.total)
        checks.append(Verdict("ez_homology", diag_h == tot_h,
                              None if diag_h == tot_h else f"{diag_h} vs {tot_h}",
                              {"homology": {str(k): v for k, v in sorted(tot_h.items())}}))
    return combine(f"eilenberg_zilber[{X.name}]", checks, top=X.top)


# -- shuffle product and AW coproduct -----------------------------------------


def _require_algebra(A: SimplicialModuleFamily) -> Tuple[Product, Callable[[int], Vector]]:
    if A.product is None or A.unit is None:
        raise ComplexError(f"{A.name} carries no simplicial algebra structure")
    return A.product, A.unit


def shuffle_raw(A: SimplicialModuleFamily, x: Vector, p: int, y: Vector, q: int) -> Vector:
    """``sum sign (s_J x)(s_I y)`` in ``A_(p+q)``."""
    product, _ = _require_algebra(A)
    out: Vector = {}
    for I, J, sign in shuffles(p, q):
        left = _degeneracy_word(A, p, J).apply(x)
        right = _degeneracy_word(A, q, I).apply(y)
        if left and right:
            out = vector_add(out, product(p + q, left, right), sign)
    return out


@dataclass
class ShuffleAlgebra:
    """Shuffle product on the kernel-form normalization of a simplicial commutative algebra."""

    family: SimplicialModuleFamily
    normalization: KernelForm
    bound: int

    def element(self, n: int, j: int) -> Vector:
        return self.normalization.inclusions[n].column(j)

    def multiply(self, x: Vector, p: int, y: Vector, q: int) -> Optional[Vector]:
        """Product of two kernel-form coordinate vectors; ``None`` if it leaves ``N``."""
        K = self.normalization.inclusions
        raw = shuffle_raw(self.family, K[p].apply(x), p, K[q].apply(y), q)
        columns = solve_columns(K[p + q], [raw])
        return None if columns is None else columns.column(0)

    def unit(self) -> Vector:
        _, unit = _require_algebra(self.family)
        columns = solve_columns(self.normalization.inclusions[0], [unit(0)])
        if columns is None:
            raise ComplexError(f"{self.family.name}: unit outside the normalized chains")
        return columns.column(0)


def shuffle_product(A: SimplicialModuleFamily, bound: Optional[int] = None) -> ShuffleAlgebra:
    _require_algebra(A)
    return ShuffleAlgebra(A, kernel_form(A), A.top if bound is None else min(bound, A.top))


def _units(dimension: int) -> List[Vector]:
    return [{j: Fraction(1)} for j in range(dimension)]


def shuffle_product_check(A: SimplicialModuleFamily, bound: Optional[int] = None,
                          max_weight: Optional[int] = None) -> Verdict:
    """Closure, unit, graded commutativity, associativity and Leibniz on ``N(A)``."""
    algebra = shuffle_product(A, bound)
    N = algebra.normalization.complex
    top = algebra.bound

    def elements(n: int) -> List[Tuple[str, Vector]]:
        return [(lbl, {j: Fraction(1)}) for j, (w, lbl) in enumerate(N.basis[_degree(n)])
                if max_weight is None or w <= max_weight]

    one = algebra.unit()
    checks: List[Verdict] = []
    counts = {"commutativity": 0, "associativity": 0, "leibniz": 0}

    def fail(name: str, witness: str) -> Verdict:
        return combine("shuffle_product", checks + [Verdict(name, False, witness)], **counts)

    for n in range(top + 1):
        for lbl, x in elements(n):
            if algebra.multiply(one, 0, x, n) != x:
                return fail("unit", f"1 * {lbl}")
    for p, q in itertools.product(range(top + 1), repeat=2):
        if p + q > top:
            continue
        for (lx, x), (ly, y) in itertools.product(elements(p), elements(q)):
            xy, yx = algebra.multiply(x, p, y, q), algebra.multiply(y, q, x, p)
            if xy is None or yx is None:
                return fail("closure", f"{lx} * {ly} leaves N")
            sign = -1 if (p * q) % 2 else 1
            counts["commutativity"] += 1
            if xy != {k: sign * v for k, v in yx.items()}:
                return fail("graded_commutativity", f"{lx} * {ly}")
            if p + q >= 1:
                counts["leibniz"] += 1
                lhs = N.d(_degree(p + q)).apply(xy)
                rhs: Vector = {}
                if p:
                    dx = algebra.multiply(N.d(_degree(p)).apply(x), p - 1, y, q)
                    rhs = vector_add(rhs, dx or {})
                if q:
                    dy = algebra.multiply(x, p, N.d(_degree(q)).apply(y), q - 1)
                    rhs = vector_add(rhs, dy or {}, -1 if p % 2 else 1)
                if lhs != rhs:
                    return fail("leibniz", f"d({lx} * {ly})")
            for r in range(top - p - q + 1):
                for lz, z in elements(r):
                    counts["associativity"] += 1
                    left = algebra.multiply(xy, p + q, z, r)
                    yz = algebra.multiply(y, q, z, r)
                    right = algebra.multiply(x, p, yz, q + r) if yz is not None else None
                    if left != right:
                        return fail("associativity", f"({lx} * {ly}) * {lz}")
    checks.append(Verdict("unit", True))
    checks.append(Verdict("graded_commutativity", True))
    checks.append(Verdict("associativity", True))
    checks.append(Verdict("leibniz", True))
    return combine("shuffle_product", checks, **counts)


def aw_coproduct(ez: EilenbergZilber, coproduct: Coproduct, n: int) -> SparseMatrix:
    """``N_n(A) -> Tot_n(N (x) N)``: the levelwise coproduct followed by Alexander-Whitney."""
    A = ez.bisimplicial.first
    raw = SparseMatrix.from_columns(A.dim(n) * A.dim(n),
                                    [coproduct(n, e) for e in _units(A.dim(n))])
    return _aw_raw(ez, n) @ raw @ ez.first.sections[n]


def bialgebra_check(A: SimplicialModuleFamily, bound: Optional[int] = None) -> Verdict:
    """The AW coproduct is multiplicative for the shuffle product on ``A/D``."""
    if A.coproduct is None:
        raise ComplexError(f"{A.name} carries no simplicial coalgebra structure")
    _require_algebra(A)
    ez = total_complex(external_tensor(A, A))
    top = ez.bisimplicial.top if bound is None else min(bound, ez.bisimplicial.top)
    N = ez.first
    coproducts = {n: aw_coproduct(ez, A.coproduct, n) for n in range(top + 1)}

    def multiply(x: Vector, p: int, y: Vector, q: int) -> Vector:
        raw = shuffle_raw(A, N.sections[p].apply(x), p, N.sections[q].apply(y), q)
        return N.projections[p + q].apply(raw)

    def multiply_tensors(u: Vector, n1: int, v: Vector, n2: int) -> Vector:
        """``(a (x) b)(c (x) d) = (-1)^(|b||c|) ac (x) bd`` on ``Tot``."""
        out: Vector = {}
        for p1 in range(n1 + 1):
            for p2 in range(n2 + 1):
                q1, q2 = n1 - p1, n2 - p2
                for a, b, cu in _split(ez, u, n1, p1):
                    for c, d, cv in _split(ez, v, n2, p2):
                        ac = multiply({a: Fraction(1)}, p1, {c: Fraction(1)}, p2)
                        bd = multiply({b: Fraction(1)}, q1, {d: Fraction(1)}, q2)
                        sign = -1 if (q1 * p2) % 2 else 1
                        width = N.complex.dim(_degree(q1 + q2))
                        start = ez.offsets[n1 + n2][p1 + p2]
                        for i, x in ac.items():
                            for j, y in bd.items():
                                term = {start + i * width + j: sign * cu * cv * x * y}
                                out = vector_add(out, term)
        return out

    checked = 0
    for p, q in itertools.product(range(top + 1), repeat=2):
        if p + q > top:
            continue
        for x in _units(N.complex.dim(_degree(p))):
            for y in _units(N.complex.dim(_degree(q))):
                lhs = coproducts[p + q].apply(multiply(x, p, y, q))
                rhs = multiply_tensors(coproducts[p].apply(x), p, coproducts[q].apply(y), q)
                checked += 1
                if lhs != rhs:
                    return Verdict("bialgebra", False,
                                   f"{A.name}: Delta(x * y) for degrees ({p}, {q})",
                                   {"pairs": checked})
    return Verdict("bialgebra", True, details={"pairs": checked})


def _split(ez: EilenbergZilber, u: Vector, n: int, p: int) -> List[Tuple[int, int, Fraction]]:
    """Components of ``u`` in the ``N_p (x) N_(n-p)`` block as ``(a, b, coefficient)``."""
    block = ez.total_block(n, p)
    width = ez.second.complex.dim(_degree(n - p))
    return [((i - block.start) // width, (i - block.start) % width, c)
            for i, c in u.items() if i in block]
