"""The simplex category: monotone maps ``[n] -> [m]``."""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from .errors import SimplexMapError
from .verdict import Verdict

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimplexMap:
    """Monotone map ``[source] -> [target]`` given by its values on ``0..source``."""

    source: int
    target: int
    values: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.source < 0 or self.target < 0:
            raise SimplexMapError(f"negative simplex level in {self}")
        if len(self.values) != self.source + 1:
            raise SimplexMapError(
                f"map from [{self.source}] needs {self.source + 1} values, got {len(self.values)}")
        for v in self.values:
            if not 0 <= v <= self.target:
                raise SimplexMapError(f"value {v} outside [{self.target}]")
        for a, b in zip(self.values, self.values[1:]):
            if a > b:
                raise SimplexMapError(f"non-monotone simplex map {list(self.values)}")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __str__(self) -> str:
        return f"[{self.source}]->[{self.target}] {list(self.values)}"

    def __mul__(self, inner: "SimplexMap") -> "SimplexMap":
        return compose(self, inner)

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target + 1))

    def image(self) -> List[int]:
        return sorted(set(self.values))

    def preimage_sizes(self) -> Tuple[int, ...]:
        """``(|f^-1(0)|, ..., |f^-1(target)|)``."""
        sizes = [0] * (self.target + 1)
        for v in self.values:
            sizes[v] += 1
        return tuple(sizes)

    def factor(self) -> Tuple["SimplexMap", "SimplexMap"]:
        """Epi-mono factorization ``self = mono * epi``."""
        image = self.image()
        position = {v: i for i, v in enumerate(image)}
        epi = SimplexMap(self.source, len(image) - 1, tuple(position[v] for v in self.values))
        mono = SimplexMap(len(image) - 1, self.target, tuple(image))
        return epi, mono

    def elementary_word(self) -> List["SimplexMap"]:
        """Cofaces after codegeneracies whose composite (left to right) is ``self``."""
        epi, mono = self.factor()
        missing = [v for v in range(self.target + 1) if v not in set(mono.values)]
        word: List[SimplexMap] = []
        level = self.target
        for c in reversed(missing):
            word.append(coface(level, c))
            level -= 1
        repeats = [j for j in range(epi.source) if epi.values[j] == epi.values[j + 1]]
        level = epi.target
        for j in repeats:
            word.append(codegeneracy(level, j))
            level += 1
        return word or [identity(self.source)]


def compose(outer: SimplexMap, inner: SimplexMap) -> SimplexMap:
    """``outer o inner``."""
    if inner.target != outer.source:
        raise SimplexMapError(f"cannot compose {outer} after {inner}")
    return SimplexMap(inner.source, outer.target, tuple(outer(v) for v in inner.values))


def compose_all(maps: Sequence[SimplexMap]) -> SimplexMap:
    """Composite of a word read left to right as ``maps[0] o maps[1] o ...``."""
    result = maps[-1]
    for f in reversed(maps[:-1]):
        result = compose(f, result)
    return result


def identity(n: int) -> SimplexMap:
    return SimplexMap(n, n, tuple(range(n + 1)))


@lru_cache(maxsize=None)
def coface(n: int, i: int) -> SimplexMap:
    """``d^i: [n-1] -> [n]``, the injection missing ``i``."""
    if not 0 <= i <= n or n < 1:
        raise SimplexMapError(f"no coface d^{i} into [{n}]")
    return SimplexMap(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))


@lru_cache(maxsize=None)
def codegeneracy(n: int, i: int) -> SimplexMap:
    """``s^i: [n+1] -> [n]``, the surjection hitting ``i`` twice."""
    if not 0 <= i <= n:
        raise SimplexMapError(f"no codegeneracy s^{i} onto [{n}]")
    return SimplexMap(n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 2)))


def all_maps(source: int, target: int) -> Iterator[SimplexMap]:
    """Every monotone map ``[source] -> [target]`` in lexicographic order."""
    for values in itertools.combinations_with_replacement(range(target + 1), source + 1):
        yield SimplexMap(source, target, values)


def surjection(sizes: Sequence[int]) -> SimplexMap:
    """The monotone map with the given preimage sizes (zeros allowed)."""
    values: List[int] = []
    for j, size in enumerate(sizes):
        if size < 0:
            raise SimplexMapError(f"negative preimage size in {list(sizes)}")
        values.extend([j] * size)
    return SimplexMap(len(values) - 1, len(sizes) - 1, tuple(values))


def shuffles(p: int, q: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...], int]]:
    """``(p, q)``-shuffles ``I | J`` of ``0..p+q-1`` with sign ``(-1)^(sum_l (i_l - l))``."""
    for I in itertools.combinations(range(p + q), p):
        J = tuple(x for x in range(p + q) if x not in I)
        sign = -1 if sum(i - l for l, i in enumerate(I)) % 2 else 1
        yield I, J, sign


def cosimplicial_identities(bound: int) -> Verdict:
    """The relations between cofaces and codegeneracies for levels up to ``bound``."""
    checked = 0
    for n in range(2, bound + 1):
        for i, j in itertools.product(range(n + 1), repeat=2):
            if i < j <= n:
                lhs, rhs = coface(n, j) * coface(n - 1, i), coface(n, i) * coface(n - 1, j - 1)
                checked += 1
                if lhs != rhs:
                    return Verdict("cosimplicial_identities", False, f"d^{j}d^{i} at level {n}")
    for n in range(0, bound):
        for i, j in itertools.product(range(n + 1), repeat=2):
            if i <= j:
                lhs = codegeneracy(n, j) * codegeneracy(n + 1, i)
                rhs = codegeneracy(n, i) * codegeneracy(n + 1, j + 1)
                checked += 1
                if lhs != rhs:
                    return Verdict("cosimplicial_identities", False, f"s^{j}s^{i} at level {n}")
    for n in range(0, bound):
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = codegeneracy(n, j) * coface(n + 1, i)
                if i < j:
                    rhs = coface(n, i) * codegeneracy(n - 1, j - 1)
                elif i in (j, j + 1):
                    rhs = identity(n)
                else:
                    rhs = coface(n, i - 1) * codegeneracy(n - 1, j)
                checked += 1
                if lhs != rhs:
                    return Verdict("cosimplicial_identities", False,
                                   f"s^{j}d^{i} at level {n}")
    return Verdict("cosimplicial_identities", True, details={"relations": checked})
