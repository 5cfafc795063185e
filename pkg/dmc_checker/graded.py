"""Free graded-commutative algebras with Koszul signs.

A :class:`GradedAlgebra` is the free graded-commutative algebra on a finite
list of :class:`Generator` objects. Odd generators anticommute and square to
zero; even generators commute. Monomials are tuples of ``(rank, exponent)``
pairs sorted by the global order ``(degree, declaration index)``.

The same machinery houses the Chevalley-Eilenberg algebra, the coordinate
rings of the Maurer-Cartan levels and the exterior algebras of simplices.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import AlgebraError
from .exact import format_scalar

LOGGER = logging.getLogger(__name__)

Monomial = Tuple[Tuple[int, int], ...]
UNIT: Monomial = ()


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def parity(self) -> int:
        return self.degree % 2


class GradedAlgebra:
    """Free graded-commutative algebra on declared generators."""

    def __init__(self, generators: Sequence[Generator], name: str = ""):
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate generator names in algebra {name!r}")
        order = sorted(range(len(generators)), key=lambda i: (generators[i].degree, i))
        self.name = name
        self.generators: Tuple[Generator, ...] = tuple(generators[i] for i in order)
        self._rank: Dict[str, int] = {g.name: r for r, g in enumerate(self.generators)}
        self._odd = tuple(g.parity == 1 for g in self.generators)
        self._products: Dict[Tuple[Monomial, Monomial], Tuple[int, Optional[Monomial]]] = {}

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, name: str) -> bool:
        return name in self._rank

    def __repr__(self) -> str:
        return f"GradedAlgebra({self.name!r}, {len(self.generators)} generators)"

    def rank(self, name: str) -> int:
        try:
            return self._rank[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r} in algebra {self.name!r}") from None

    def generator(self, rank: int) -> Generator:
        return self.generators[rank]

    def is_odd(self, rank: int) -> bool:
        return self._odd[rank]

    def monomial_degree(self, m: Monomial) -> int:
        return sum(self.generators[r].degree * e for r, e in m)

    @staticmethod
    def monomial_weight(m: Monomial) -> int:
        return sum(e for _, e in m)

    def canonical_monomial(self, factors: Iterable[Tuple[Union[str, int], int]]
                           ) -> Tuple[int, Optional[Monomial]]:
        """Sort a product of generator powers; returns ``(sign, monomial)`` or ``(0, None)``."""
        letters: List[int] = []
        exps: Dict[int, int] = {}
        for gen, exponent in factors:
            r = self.rank(gen) if isinstance(gen, str) else gen
            if not 0 <= r < len(self.generators):
                raise AlgebraError(f"unknown generator rank {r} in algebra {self.name!r}")
            if exponent < 1:
                raise AlgebraError(f"exponent must be positive, got {exponent}")
            if self._odd[r]:
                if exponent > 1 or r in exps:
                    return 0, None
                letters.append(r)
            exps[r] = exps.get(r, 0) + exponent
        inversions = sum(1 for i, j in itertools.combinations(range(len(letters)), 2)
                         if letters[i] > letters[j])
        return (-1 if inversions % 2 else 1), tuple(sorted(exps.items()))

    def multiply_monomials(self, m: Monomial, n: Monomial) -> Tuple[int, Optional[Monomial]]:
        key = (m, n)
        cached = self._products.get(key)
        if cached is not None:
            return cached
        sign = 1
        odd_m = [r for r, _ in m if self._odd[r]]
        for r, _ in n:
            if self._odd[r]:
                if sum(1 for s in odd_m if s > r) % 2:
                    sign = -sign
        merged = dict(m)
        result: Tuple[int, Optional[Monomial]]
        for r, e in n:
            if r in merged and self._odd[r]:
                result = (0, None)
                break
            merged[r] = merged.get(r, 0) + e
        else:
            result = (sign, tuple(sorted(merged.items())))
        if len(self._products) < 200_000:
            self._products[key] = result
        return result

    # -- constructors -----------------------------------------------------

    def zero(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {})

    def one(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {UNIT: Fraction(1)})

    def scalar(self, value: Union[Fraction, int]) -> "GradedPolynomial":
        return GradedPolynomial(self, {UNIT: Fraction(value)})

    def gen(self, name: str) -> "GradedPolynomial":
        return GradedPolynomial(self, {((self.rank(name), 1),): Fraction(1)})

    def monomial(self, m: Monomial, coefficient: Union[Fraction, int] = 1) -> "GradedPolynomial":
        return GradedPolynomial(self, {m: Fraction(coefficient)})

    def from_factors(self, factors: Iterable[Tuple[Union[str, int], int]],
                     coefficient: Union[Fraction, int] = 1) -> "GradedPolynomial":
        sign, m = self.canonical_monomial(factors)
        if m is None:
            return self.zero()
        return GradedPolynomial(self, {m: Fraction(coefficient) * sign})

    # -- enumeration ------------------------------------------------------

    def monomials(self, max_weight: int, degree_range: Optional[Tuple[int, int]] = None
                  ) -> Dict[Tuple[int, int], List[Monomial]]:
        """All monomials of weight ``< max_weight`` bucketed by ``(degree, weight)``.

        Buckets are listed in a deterministic order (weight, then lexicographic
        in the generator order). ``degree_range`` is inclusive.
        """
        buckets: Dict[Tuple[int, int], List[Monomial]] = {}
        n = len(self.generators)

        def extend(start: int, weight: int, current: List[Tuple[int, int]]) -> Iterator[Monomial]:
            yield tuple(current)
            if weight + 1 >= max_weight:
                return
            for r in range(start, n):
                top = 1 if self._odd[r] else max_weight - 1 - weight
                for e in range(1, top + 1):
                    current.append((r, e))
                    yield from extend(r + 1, weight + e, current)
                    current.pop()

        if max_weight < 1:
            return buckets
        for m in extend(0, 0, []):
            deg = self.monomial_degree(m)
            if degree_range is not None and not degree_range[0] <= deg <= degree_range[1]:
                continue
            buckets.setdefault((deg, self.monomial_weight(m)), []).append(m)
        for key in buckets:
            buckets[key].sort(key=lambda m: (self.monomial_weight(m), m))
        return buckets

    def format_monomial(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for r, e in m:
            name = self.generators[r].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


class GradedPolynomial:
    """Element of a :class:`GradedAlgebra`; immutable, zero coefficients never stored."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Monomial, Fraction]):
        self.algebra = algebra
        self.terms: Dict[Monomial, Fraction] = {m: Fraction(c) for m, c in terms.items() if c}

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def degrees(self) -> List[int]:
        return sorted({self.algebra.monomial_degree(m) for m in self.terms})

    def weights(self) -> List[int]:
        return sorted({self.algebra.monomial_weight(m) for m in self.terms})

    def constant_term(self) -> Fraction:
        return self.terms.get(UNIT, Fraction(0))

    def homogeneous_part(self, degree: Optional[int] = None,
                         weight: Optional[int] = None) -> "GradedPolynomial":
        alg = self.algebra
        return GradedPolynomial(alg, {
            m: c for m, c in self.terms.items()
            if (degree is None or alg.monomial_degree(m) == degree)
            and (weight is None or alg.monomial_weight(m) == weight)})

    def truncate(self, max_weight: Optional[int]) -> "GradedPolynomial":
        if max_weight is None:
            return self
        return GradedPolynomial(self.algebra, {
            m: c for m, c in self.terms.items() if self.algebra.monomial_weight(m) < max_weight})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "GradedPolynomial") -> None:
        if other.algebra is not self.algebra:
            raise AlgebraError(
                f"mixed ambient algebras {self.algebra.name!r} and {other.algebra.name!r}")

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return GradedPolynomial(self.algebra, terms)

    def __sub__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self + other.scale(-1)

    def __neg__(self) -> "GradedPolynomial":
        return self.scale(-1)

    def scale(self, factor: Union[Fraction, int]) -> "GradedPolynomial":
        factor = Fraction(factor)
        return GradedPolynomial(self.algebra, {m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other: Union["GradedPolynomial", Fraction, int]) -> "GradedPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return poly_multiply(self, other)

    def __rmul__(self, other: Union[Fraction, int]) -> "GradedPolynomial":
        return self.scale(other)

    def __repr__(self) -> str:
        return f"GradedPolynomial({self.format()})"

    def format(self) -> str:
        if not self.terms:
            return "0"
        alg = self.algebra
        ordered = sorted(self.terms.items(), key=lambda t: (alg.monomial_weight(t[0]), t[0]))
        parts = []
        for m, c in ordered:
            mono = alg.format_monomial(m)
            if mono == "1":
                parts.append(format_scalar(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{format_scalar(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_multiply(p: GradedPolynomial, q: GradedPolynomial,
                  max_weight: Optional[int] = None) -> GradedPolynomial:
    """Graded-commutative product, optionally dropping terms of weight ``>= max_weight``."""
    p._check(q)
    alg = p.algebra
    terms: Dict[Monomial, Fraction] = {}
    for m, a in p.terms.items():
        wm = alg.monomial_weight(m)
        for n, b in q.terms.items():
            if max_weight is not None and wm + alg.monomial_weight(n) >= max_weight:
                continue
            sign, mn = alg.multiply_monomials(m, n)
            if mn is None:
                continue
            terms[mn] = terms.get(mn, 0) + sign * a * b
    return GradedPolynomial(alg, terms)


def poly_power(p: GradedPolynomial, exponent: int,
               max_weight: Optional[int] = None) -> GradedPolynomial:
    result = p.algebra.one()
    for _ in range(exponent):
        result = poly_multiply(result, p, max_weight)
    return result


def _resolve_assignment(source: GradedAlgebra, target: GradedAlgebra,
                        assignment: Mapping[Union[str, int], GradedPolynomial]
                        ) -> Dict[int, GradedPolynomial]:
    images: Dict[int, GradedPolynomial] = {}
    for key, image in assignment.items():
        r = source.rank(key) if isinstance(key, str) else key
        if image.algebra is not target:
            raise AlgebraError(f"image of {source.generator(r).name!r} lives in the wrong algebra")
        degree = source.generator(r).degree
        if any(d != degree for d in image.degrees()):
            raise AlgebraError(
                f"image of {source.generator(r).name!r} is not homogeneous of degree {degree}")
        images[r] = image
    for r, g in enumerate(source.generators):
        if r not in images:
            if target is source:
                images[r] = source.gen(g.name)
            else:
                raise AlgebraError(f"no image given for generator {g.name!r}")
    return images


def substitute(p: GradedPolynomial, assignment: Mapping[Union[str, int], GradedPolynomial],
               target: Optional[GradedAlgebra] = None,
               max_weight: Optional[int] = None) -> GradedPolynomial:
    """Apply the algebra homomorphism determined by ``assignment`` to ``p``.

    Generators missing from the assignment map to themselves when the target
    is the source algebra. Terms of weight ``>= max_weight`` are dropped.
    """
    target = target or p.algebra
    images = _resolve_assignment(p.algebra, target, assignment)
    powers: Dict[Tuple[int, int], GradedPolynomial] = {}

    def power(r: int, e: int) -> GradedPolynomial:
        key = (r, e)
        if key not in powers:
            powers[key] = poly_power(images[r], e, max_weight)
        return powers[key]

    result = target.zero()
    for m, c in p.terms.items():
        term = target.scalar(c)
        for r, e in m:
            term = poly_multiply(term, power(r, e), max_weight)
            if term.is_zero():
                break
        result = result + term
    return result.truncate(max_weight)


def apply_derivation(p: GradedPolynomial, images: Mapping[int, GradedPolynomial], degree: int,
                     max_weight: Optional[int] = None) -> GradedPolynomial:
    """Extend generator images to a derivation of the given degree and apply it.

    The sign rule is ``D(xy) = D(x) y + (-1)^(degree*|x|) x D(y)``; generators
    absent from ``images`` are sent to zero.
    """
    alg = p.algebra
    result = alg.zero()
    for m, c in p.terms.items():
        for i, (r, e) in enumerate(m):
            image = images.get(r)
            if image is None or image.is_zero():
                continue
            prefix: Monomial = m[:i]
            suffix: Monomial = m[i + 1:]
            sign = -1 if (degree * alg.monomial_degree(prefix)) % 2 else 1
            head = alg.monomial(prefix, c * sign * e)
            if e > 1:
                head = poly_multiply(head, alg.monomial(((r, e - 1),)), max_weight)
            term = poly_multiply(poly_multiply(head, image, max_weight),
                                 alg.monomial(suffix), max_weight)
            result = result + term
    return result.truncate(max_weight)
