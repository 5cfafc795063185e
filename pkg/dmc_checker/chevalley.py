"""Curvature, the Bianchi identity and the Chevalley-Eilenberg model.

The algebra of functions on the derived Maurer-Cartan locus of ``L_+`` is the
free graded-commutative algebra on coordinates ``t[b]`` of degree ``1 - |b|``.
Its differential is characterised by one requirement: the universal element
``xi = sum_b b (x) t[b]`` is a Maurer-Cartan element of ``L (x) CE(L)``.
Solving ``F(xi) + (d_CE xi) = 0`` componentwise gives

    d t[b] = -(-1)^|b| F(xi)_b

and ``d^2 = 0`` follows from the Bianchi identity.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional

from .complexes import TruncatedComplex, check_differential
from .errors import AlgebraError, ComplexError
from .exact import SparseMatrix
from .graded import GradedAlgebra, GradedPolynomial, Generator, Monomial, apply_derivation
from .lie import LInfinityStructure
from .tensor import (TensorElement, tensor_bracket, tensor_curvature, tensor_differential,
                     universal_element)
from .verdict import Verdict

LOGGER = logging.getLogger(__name__)


def coordinate(name: str) -> str:
    """Name of the coordinate function dual to a basis element."""
    return f"t[{name}]"


def require_positive(L: LInfinityStructure) -> None:
    if not L.is_positive():
        low = [g.name for g in L.basis if g.degree < 1]
        raise AlgebraError(f"{L.name}: structure not concentrated in positive degrees "
                           f"({', '.join(low)}); truncate it first")


def coordinate_algebra(L: LInfinityStructure, name: Optional[str] = None) -> GradedAlgebra:
    """Polynomial algebra on the degree-0 coordinates of ``L^1``."""
    return GradedAlgebra([Generator(coordinate(b), 0) for b in L.names(1)],
                         name or f"O({L.name}^1)")


@dataclass
class CurvatureExpression:
    """``F(mu)`` for the generic degree-one element ``mu = sum_x x (x) t[x]``."""

    structure: LInfinityStructure
    algebra: GradedAlgebra
    components: Dict[str, GradedPolynomial]

    def component(self, name: str) -> GradedPolynomial:
        return self.components.get(name, self.algebra.zero())

    def as_tensor(self) -> TensorElement:
        return TensorElement(self.structure, self.algebra, self.components)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components.values())

    def to_json(self) -> Dict[str, str]:
        return {y: self.component(y).format() for y in self.structure.names(2)}


def curvature(L: LInfinityStructure, arity_signs: Optional[Mapping[int, int]] = None
              ) -> CurvatureExpression:
    """``F(mu) = delta mu + sum_k 1/k! [mu, ..., mu]`` expanded in coordinates."""
    require_positive(L)
    algebra = coordinate_algebra(L)
    mu = universal_element(L, algebra, coordinate)
    F = tensor_curvature(mu, arity_signs=arity_signs)
    for y, p in F.components.items():
        if p.constant_term():
            raise AlgebraError(f"{L.name}: curvature component {y} has a constant term")
    return CurvatureExpression(L, algebra, dict(F.components))


def bianchi_check(L: LInfinityStructure) -> Verdict:
    """Symbolic check of ``delta F(mu) + [mu, F(mu)] = 0``."""
    if not L.is_dgla():
        return Verdict("bianchi", False, f"{L.name} has brackets of arity {L.max_arity}; "
                                         "the check covers DGLAs only")
    F = curvature(L)
    mu = universal_element(L, F.algebra, coordinate)
    F_tensor = F.as_tensor()
    total = tensor_differential(F_tensor)
    if 2 in L.arities():
        total = total + tensor_bracket([mu, F_tensor])
    if total.is_zero():
        return Verdict("bianchi", True)
    name, value = sorted(total.components.items())[0]
    return Verdict("bianchi", False, f"component {name} equals {value.format()}",
                   {"component": name, "value": value.format()})


@dataclass
class ChevalleyEilenberg:
    """The truncated CE model together with the data needed to map out of it."""

    structure: LInfinityStructure
    algebra: GradedAlgebra
    images: Dict[int, GradedPolynomial]
    weight_bound: int
    depth: int
    complex: TruncatedComplex
    monomials: Dict[int, List[Monomial]] = field(default_factory=dict)

    def differential(self, p: GradedPolynomial) -> GradedPolynomial:
        return apply_derivation(p, self.images, 1, self.weight_bound)

    def generator_differential(self, name: str) -> GradedPolynomial:
        return self.images.get(self.algebra.rank(coordinate(name)), self.algebra.zero())

    def index(self, degree: int) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials.get(degree, []))}


def ce_algebra(L: LInfinityStructure) -> GradedAlgebra:
    """Free graded-commutative algebra on ``t[b]`` in degree ``1 - |b|``."""
    require_positive(L)
    return GradedAlgebra([Generator(coordinate(g.name), 1 - g.degree) for g in L.basis],
                         f"CE({L.name})")


def ce_generator_differentials(L: LInfinityStructure, algebra: GradedAlgebra,
                               weight_bound: Optional[int] = None,
                               arity_signs: Optional[Mapping[int, int]] = None
                               ) -> Dict[int, GradedPolynomial]:
    xi = universal_element(L, algebra, coordinate)
    F = tensor_curvature(xi, max_weight=weight_bound, arity_signs=arity_signs)
    images: Dict[int, GradedPolynomial] = {}
    for b, p in F.components.items():
        sign = 1 if L.degree(b) % 2 else -1
        images[algebra.rank(coordinate(b))] = p.scale(sign)
    return images


def ce_model(L: LInfinityStructure, weight_bound: int, depth: int,
             arity_signs: Optional[Mapping[int, int]] = None) -> ChevalleyEilenberg:
    """CE complex in degrees ``-depth-1 .. 0`` and weights ``< weight_bound``.

    The lowest degree only serves as the source of a differential.
    ``arity_signs`` deliberately perturbs the differential for negative
    controls; ``d^2 = 0`` is still enforced.
    """
    if weight_bound < 1 or depth < 0:
        raise ComplexError("CE bounds must satisfy weight >= 1 and depth >= 0")
    algebra = ce_algebra(L)
    images = ce_generator_differentials(L, algebra, weight_bound, arity_signs)
    lo = -depth - 1
    buckets = algebra.monomials(weight_bound, (lo, 0))
    monomials: Dict[int, List[Monomial]] = {n: [] for n in range(lo, 1)}
    for (deg, _), items in sorted(buckets.items()):
        monomials[deg].extend(items)
    for n in monomials:
        monomials[n].sort(key=lambda m: (algebra.monomial_weight(m), m))
    basis = {n: [(algebra.monomial_weight(m), algebra.format_monomial(m)) for m in ms]
             for n, ms in monomials.items()}
    differential: Dict[int, SparseMatrix] = {}
    for n in range(lo, 0):
        target = {m: i for i, m in enumerate(monomials[n + 1])}
        columns = []
        for m in monomials[n]:
            image = apply_derivation(algebra.monomial(m), images, 1, weight_bound)
            columns.append(_coordinates(image, target, L.name))
        differential[n] = SparseMatrix.from_columns(len(monomials[n + 1]), columns)
    complex_ = TruncatedComplex(f"CE({L.name})", basis, differential,
                                lower_bounded=False, upper_bounded=True,
                                weight_bound=weight_bound)
    verdict = check_differential(complex_)
    if not verdict.passed:
        raise ComplexError(f"internal sign fault: CE differential squares to nonzero "
                           f"at {verdict.witness}")
    LOGGER.debug("CE(%s): dims %s", L.name, {n: complex_.dim(n) for n in complex_.degrees()})
    return ChevalleyEilenberg(L, algebra, images, weight_bound, depth, complex_, monomials)


def ce_complex(L: LInfinityStructure, weight_bound: int, depth: int) -> TruncatedComplex:
    return ce_model(L, weight_bound, depth).complex


def _coordinates(p: GradedPolynomial, index: Mapping[Monomial, int], name: str
                 ) -> Dict[int, Fraction]:
    vector: Dict[int, Fraction] = {}
    for m, c in p.terms.items():
        if m not in index:
            raise ComplexError(f"CE({name}): image monomial "
                               f"{p.algebra.format_monomial(m)} outside the stored basis")
        vector[index[m]] = c
    return vector

