"""Elements of ``L (x) A`` for a structure ``L`` and a graded-commutative algebra ``A``.

An element is a map from basis names of ``L`` to polynomials in ``A``,
representing ``sum_b b (x) p_b``. Brackets follow the Koszul rule

    [b1 (x) p1, ..., bk (x) pk] = (-1)^(sum_{i>j} |b_i||p_j|) [b1, ..., bk] (x) p1...pk
"""

import logging
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .graded import GradedAlgebra, GradedPolynomial, poly_multiply
from .lie import LInfinityStructure

LOGGER = logging.getLogger(__name__)

AlgebraDifferential = Callable[[GradedPolynomial], GradedPolynomial]


class TensorElement:
    """Immutable element of ``L (x) A``."""

    __slots__ = ("structure", "algebra", "components")

    def __init__(self, structure: LInfinityStructure, algebra: GradedAlgebra,
                 components: Mapping[str, GradedPolynomial]):
        self.structure = structure
        self.algebra = algebra
        self.components: Dict[str, GradedPolynomial] = {
            b: p for b, p in components.items() if not p.is_zero()}

    @classmethod
    def zero(cls, structure: LInfinityStructure, algebra: GradedAlgebra) -> "TensorElement":
        return cls(structure, algebra, {})

    def component(self, name: str) -> GradedPolynomial:
        return self.components.get(name, self.algebra.zero())

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "TensorElement") -> "TensorElement":
        merged = dict(self.components)
        for b, p in other.components.items():
            merged[b] = merged[b] + p if b in merged else p
        return TensorElement(self.structure, self.algebra, merged)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(-1)

    def scale(self, factor) -> "TensorElement":
        return TensorElement(self.structure, self.algebra,
                             {b: p.scale(factor) for b, p in self.components.items()})

    def truncate(self, max_weight: Optional[int]) -> "TensorElement":
        if max_weight is None:
            return self
        return TensorElement(self.structure, self.algebra,
                             {b: p.truncate(max_weight) for b, p in self.components.items()})

    def map_components(self, fn: Callable[[GradedPolynomial], GradedPolynomial],
                       algebra: Optional[GradedAlgebra] = None) -> "TensorElement":
        return TensorElement(self.structure, algebra or self.algebra,
                             {b: fn(p) for b, p in self.components.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self) -> str:
        return "TensorElement(" + "; ".join(
            f"{b}: {p.format()}" for b, p in sorted(self.components.items())) + ")"


def _parity_parts(p: GradedPolynomial) -> List[Tuple[int, GradedPolynomial]]:
    alg = p.algebra
    even = {m: c for m, c in p.terms.items() if alg.monomial_degree(m) % 2 == 0}
    odd = {m: c for m, c in p.terms.items() if alg.monomial_degree(m) % 2 == 1}
    parts = []
    if even:
        parts.append((0, GradedPolynomial(alg, even)))
    if odd:
        parts.append((1, GradedPolynomial(alg, odd)))
    return parts


def tensor_bracket(elements: Sequence[TensorElement],
                   max_weight: Optional[int] = None) -> TensorElement:
    """The arity-``k`` bracket on ``L (x) A`` for ``k = len(elements) >= 2``."""
    first = elements[0]
    L, alg = first.structure, first.algebra
    k = len(elements)
    split = [{b: _parity_parts(p) for b, p in X.components.items()} for X in elements]
    out: Dict[str, GradedPolynomial] = {}
    for args, value in L.nonzero_tuples(k):
        if any(b not in split[j] for j, b in enumerate(args)):
            continue
        degrees = [L.degree(b) for b in args]
        partial: List[Tuple[int, GradedPolynomial]] = [(0, alg.one())]
        # carry (sum of |b_i| p_j exponents, product) along the argument list
        for j, b in enumerate(args):
            later = sum(degrees[j + 1:])
            extended = []
            for exponent, prod in partial:
                for parity, part in split[j][b]:
                    product = poly_multiply(prod, part, max_weight)
                    if not product.is_zero():
                        extended.append((exponent + later * parity, product))
            partial = extended
            if not partial:
                break
        for exponent, prod in partial:
            sign = -1 if exponent % 2 else 1
            for target, coefficient in value.items():
                term = prod.scale(sign * coefficient)
                out[target] = out[target] + term if target in out else term
    return TensorElement(L, alg, out)


def tensor_differential(X: TensorElement,
                        algebra_differential: Optional[AlgebraDifferential] = None,
                        max_weight: Optional[int] = None) -> TensorElement:
    """``d(b (x) p) = db (x) p + (-1)^|b| b (x) d_A p``."""
    L, alg = X.structure, X.algebra
    out: Dict[str, GradedPolynomial] = {}
    for b, p in X.components.items():
        for target, coefficient in L.bracket((b,)).items():
            term = p.scale(coefficient)
            out[target] = out[target] + term if target in out else term
        if algebra_differential is not None:
            dp = algebra_differential(p).truncate(max_weight)
            if L.degree(b) % 2:
                dp = dp.scale(-1)
            out[b] = out[b] + dp if b in out else dp
    return TensorElement(L, alg, out)


def left_multiply(a: GradedPolynomial, X: TensorElement,
                  max_weight: Optional[int] = None) -> TensorElement:
    """``a . (b (x) p) = (-1)^(|a||b|) b (x) a p``."""
    L = X.structure
    out: Dict[str, GradedPolynomial] = {}
    for parity, part in _parity_parts(a):
        for b, p in X.components.items():
            term = poly_multiply(part, p, max_weight)
            if parity and L.degree(b) % 2:
                term = term.scale(-1)
            out[b] = out[b] + term if b in out else term
    return TensorElement(L, X.algebra, out)


def tensor_curvature(X: TensorElement,
                     algebra_differential: Optional[AlgebraDifferential] = None,
                     max_weight: Optional[int] = None,
                     arity_signs: Optional[Mapping[int, int]] = None) -> TensorElement:
    """``F(X) = dX + sum_k 1/k! [X, ..., X]``.

    ``arity_signs`` multiplies the arity-``k`` contribution by a sign; it
    exists only to build deliberately broken differentials for negative
    controls.
    """
    L = X.structure
    total = tensor_differential(X, algebra_differential, max_weight)
    for k in L.arities():
        if k < 2:
            continue
        term = tensor_bracket([X] * k, max_weight)
        factor = Fraction(1, factorial(k))
        if arity_signs:
            factor *= arity_signs.get(k, 1)
        total = total + term.scale(factor)
    return total.truncate(max_weight)


def universal_element(structure: LInfinityStructure, algebra: GradedAlgebra,
                      coordinate: Callable[[str], str]) -> TensorElement:
    """``sum_b b (x) t_b`` where ``t_b`` is the algebra generator named ``coordinate(b)``."""
    return TensorElement(structure, algebra, {
        b: algebra.gen(coordinate(b)) for b in structure.names() if coordinate(b) in algebra})
