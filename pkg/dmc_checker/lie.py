"""Finite-type DGLAs and nilpotent L-infinity algebras.

Structure constants are kept for one ordering of each argument multiset (the
order of declaration of the basis); every other ordering is recovered by the
graded antisymmetry rule

    [..., a, b, ...] = -(-1)^(|a||b|) [..., b, a, ...]

Validation transports the brackets to the shifted space L[1], where they
become graded symmetric operations of degree 1, and checks the quadratic
relations there with plain Koszul signs. For arities one and two this is
equivalent to ``d^2 = 0``, the Leibniz rule and the graded Jacobi identity.
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import AxiomError, SpecFormatError
from .exact import format_scalar, parse_scalar
from .graded import Generator

LOGGER = logging.getLogger(__name__)

FIXTURE_DIR = Path(__file__).parent / "fixtures"

LinearCombination = Dict[str, Fraction]
# monomial ((variable, exponent), ...) -> coefficient
PolynomialTerms = Mapping[Tuple[Tuple[str, int], ...], Fraction]


def _add_into(target: Dict[str, Fraction], source: Mapping[str, Fraction], factor) -> None:
    for key, value in source.items():
        s = target.get(key, 0) + factor * value
        if s:
            target[key] = s
        else:
            target.pop(key, None)


@dataclass
class LInfinityStructure:
    """Finite-dimensional graded vector space with brackets of arity ``1..max_arity``.

    ``brackets`` maps an argument tuple in canonical (basis) order to the
    value of the bracket on it.
    """

    name: str
    basis: Tuple[Generator, ...]
    brackets: Dict[Tuple[str, ...], LinearCombination] = field(default_factory=dict)
    max_arity: int = 2

    def __post_init__(self) -> None:
        self._index = {g.name: i for i, g in enumerate(self.basis)}
        self._degree = {g.name: g.degree for g in self.basis}
        if len(self._index) != len(self.basis):
            raise SpecFormatError(f"{self.name}: duplicate generator names")
        self._tuples: Dict[int, List[Tuple[Tuple[str, ...], LinearCombination]]] = {}

    # -- basic queries ----------------------------------------------------

    def degree(self, name: str) -> int:
        try:
            return self._degree[name]
        except KeyError:
            raise SpecFormatError(f"{self.name}: unknown generator {name!r}") from None

    def names(self, degree: Optional[int] = None) -> List[str]:
        return [g.name for g in self.basis if degree is None or g.degree == degree]

    def degrees(self) -> List[int]:
        return sorted({g.degree for g in self.basis})

    def dim(self, degree: int) -> int:
        return sum(1 for g in self.basis if g.degree == degree)

    @property
    def top_degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_positive(self) -> bool:
        return all(g.degree >= 1 for g in self.basis)

    def arities(self) -> List[int]:
        return sorted({len(args) for args in self.brackets})

    def is_abelian(self) -> bool:
        return all(len(args) == 1 for args in self.brackets)

    def is_dgla(self) -> bool:
        return self.max_arity <= 2

    # -- brackets ---------------------------------------------------------

    def canonical_order(self, args: Sequence[str]) -> Tuple[int, Tuple[str, ...]]:
        """Sign and canonical ordering of a bracket's arguments (0 if forced to vanish)."""
        items = list(args)
        sign = 1
        for i in range(len(items)):
            for j in range(len(items) - 1 - i):
                a, b = items[j], items[j + 1]
                if self._index[a] > self._index[b]:
                    items[j], items[j + 1] = b, a
                    if (self.degree(a) * self.degree(b)) % 2 == 0:
                        sign = -sign
        for a, b in zip(items, items[1:]):
            if a == b and self.degree(a) % 2 == 0:
                return 0, tuple(items)
        return sign, tuple(items)

    def bracket(self, args: Sequence[str]) -> LinearCombination:
        """Value of the bracket on basis elements in any order."""
        for a in args:
            if a not in self._index:
                raise SpecFormatError(f"{self.name}: unknown generator {a!r}")
        if len(args) == 1:
            return dict(self.brackets.get(tuple(args), {}))
        sign, key = self.canonical_order(args)
        if not sign:
            return {}
        value = self.brackets.get(key)
        if not value:
            return {}
        return {k: sign * v for k, v in value.items()}

    def nonzero_tuples(self, arity: int) -> List[Tuple[Tuple[str, ...], LinearCombination]]:
        """Every ordered argument tuple of the given arity with a nonzero bracket."""
        if arity not in self._tuples:
            found: Dict[Tuple[str, ...], LinearCombination] = {}
            for key in self.brackets:
                if len(key) != arity:
                    continue
                for perm in set(itertools.permutations(key)):
                    value = self.bracket(perm)
                    if value:
                        found[perm] = value
            self._tuples[arity] = sorted(found.items())
        return self._tuples[arity]

    def apply(self, vectors: Sequence[Mapping[str, Fraction]]) -> LinearCombination:
        """Multilinear extension of the bracket to linear combinations."""
        result: LinearCombination = {}
        for combo in itertools.product(*[list(v.items()) for v in vectors]):
            coefficient = Fraction(1)
            for _, c in combo:
                coefficient *= c
            _add_into(result, self.bracket([name for name, _ in combo]), coefficient)
        return result

    # -- derived structures -----------------------------------------------

    def restricted(self, keep: Iterable[str], name: Optional[str] = None) -> "LInfinityStructure":
        keep_set = set(keep)
        basis = tuple(g for g in self.basis if g.name in keep_set)
        brackets = {}
        for args, value in self.brackets.items():
            if not set(args) <= keep_set:
                continue
            value = {k: v for k, v in value.items() if k in keep_set}
            if value:
                brackets[args] = value
        return LInfinityStructure(name or self.name, basis, brackets, self.max_arity)

    def truncate_positive(self) -> "LInfinityStructure":
        """The truncation in positive degrees, with brackets restricted."""
        return self.restricted(self.names_at_least(1), f"{self.name}+")

    def names_at_least(self, degree: int) -> List[str]:
        return [g.name for g in self.basis if g.degree >= degree]

    def underlying_complex(self) -> "LInfinityStructure":
        """The bracket-stripped structure: same differential, no higher brackets."""
        brackets = {args: dict(v) for args, v in self.brackets.items() if len(args) == 1}
        return LInfinityStructure(f"{self.name}-natural", self.basis, brackets, 1)

    def with_bracket(self, args: Sequence[str], value: Mapping[str, Fraction]
                     ) -> "LInfinityStructure":
        """A copy with one bracket replaced; used for negative controls."""
        sign, key = self.canonical_order(args) if len(args) > 1 else (1, tuple(args))
        brackets = {k: dict(v) for k, v in self.brackets.items()}
        brackets[key] = {k: sign * Fraction(v) for k, v in value.items() if v}
        if not brackets[key]:
            del brackets[key]
        arity = max(self.max_arity, len(args))
        return LInfinityStructure(self.name, self.basis, brackets, arity)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "generators": [{"name": g.name, "degree": g.degree} for g in self.basis],
            "brackets": [
                {"args": list(args),
                 "value": [{"gen": k, "coef": format_scalar(v)} for k, v in sorted(
                     value.items(), key=lambda kv: self._index[kv[0]])]}
                for args, value in sorted(self.brackets.items(),
                                          key=lambda kv: (len(kv[0]),
                                                          [self._index[a] for a in kv[0]]))
            ],
            "max_arity": self.max_arity,
        }


def parse_structure(data: Mapping[str, object]) -> LInfinityStructure:
    """Build a structure from the JSON schema; checks shape and degrees only.

    A spec may instead carry a ``recipe`` object naming a generator
    (``koszul`` or ``harrison``) and its parameters.
    """
    if not isinstance(data, Mapping):
        raise SpecFormatError("algebra spec must be a JSON object")
    if "recipe" in data:
        return _from_recipe(str(data.get("name", "")), data["recipe"])
    try:
        name = str(data.get("name", "unnamed"))
        gens = data["generators"]
        basis = tuple(Generator(str(g["name"]), int(g["degree"])) for g in gens)
    except (KeyError, TypeError, ValueError) as e:
        raise SpecFormatError(f"malformed generator list: {e}") from e
    names = {g.name for g in basis}
    if len(names) != len(basis):
        raise SpecFormatError(f"{name}: duplicate generator names")
    degree = {g.name: g.degree for g in basis}
    raw = data.get("brackets", [])
    if not isinstance(raw, list):
        raise SpecFormatError(f"{name}: 'brackets' must be a list")
    declared_arity = data.get("max_arity")
    if declared_arity is not None and (isinstance(declared_arity, bool)
                                       or not isinstance(declared_arity, int)
                                       or declared_arity < 1):
        raise SpecFormatError(f"{name}: max_arity must be a positive integer")
    structure = LInfinityStructure(name, basis, {}, int(declared_arity or 1))
    seen = set()
    for entry in raw:
        try:
            args = [str(a) for a in entry["args"]]
            value_entries = entry.get("value", [])
            value = {}
            for item in value_entries:
                gen = str(item["gen"])
                if gen not in names:
                    raise SpecFormatError(f"{name}: unknown generator {gen!r} in bracket value")
                value[gen] = value.get(gen, 0) + parse_scalar(item["coef"])
        except (KeyError, TypeError) as e:
            raise SpecFormatError(f"{name}: malformed bracket entry {entry!r}") from e
        if not args:
            raise SpecFormatError(f"{name}: bracket with no arguments")
        for a in args:
            if a not in names:
                raise SpecFormatError(f"{name}: unknown generator {a!r} in bracket arguments")
        label = f"[{', '.join(args)}]"
        expected = sum(degree[a] for a in args) + 2 - len(args)
        for gen, coef in value.items():
            if coef and degree[gen] != expected:
                raise AxiomError(f"{name}: bracket degree mismatch",
                                 f"{label} has degree {expected} but value names {gen} "
                                 f"of degree {degree[gen]}")
        if declared_arity is not None and len(args) > declared_arity:
            raise SpecFormatError(f"{name}: bracket {label} exceeds max_arity {declared_arity}")
        if len(args) == 1:
            sign, key = 1, tuple(args)
        else:
            sign, key = structure.canonical_order(args)
        if key in seen:
            raise SpecFormatError(f"{name}: bracket on {label} declared twice")
        seen.add(key)
        value = {k: v for k, v in value.items() if v}
        if sign == 0:
            if value:
                raise AxiomError(f"{name}: antisymmetry violation",
                                 f"{label} repeats an even element but is nonzero")
            continue
        if value:
            structure.brackets[key] = {k: sign * v for k, v in value.items()}
    if declared_arity is None:
        structure.max_arity = max([len(k) for k in structure.brackets] + [1])
    return structure


def _from_recipe(name: str, recipe: object) -> LInfinityStructure:
    if not isinstance(recipe, Mapping) or "kind" not in recipe:
        raise SpecFormatError(f"{name}: recipe must be an object with a 'kind'")
    kind = recipe["kind"]
    try:
        if kind == "harrison":
            from .harrison import harrison_fixture

            return harrison_fixture(int(recipe["dimension"]), int(recipe["bound"]), name)
        if kind == "koszul":
            components = {
                str(w): {tuple((str(v), int(e)) for v, e in term["monomial"].items()):
                         parse_scalar(term["coef"]) for term in terms}
                for w, terms in recipe["components"].items()}
            return koszul_from_polynomial([str(v) for v in recipe["source"]],
                                          [str(w) for w in recipe["target"]],
                                          components, name or "koszul")
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise SpecFormatError(f"{name}: malformed {kind} recipe: {e}") from e
    raise SpecFormatError(f"{name}: unknown recipe kind {kind!r}")


def load_structure(source: Union[str, Path, Mapping[str, object]]) -> LInfinityStructure:
    """Load a structure from a mapping, a JSON file path, or ``fixture:NAME``."""
    if isinstance(source, Mapping):
        return parse_structure(source)
    text_source = str(source)
    if text_source.startswith("fixture:"):
        path = FIXTURE_DIR / f"{text_source.split(':', 1)[1]}.json"
        if not path.exists():
            raise SpecFormatError(f"no bundled fixture named {text_source.split(':', 1)[1]!r}")
    else:
        path = Path(text_source)
    try:
        data = json.loads(path.read_text())
    except OSError as e:
        raise SpecFormatError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"{path} is not valid JSON: {e}") from e
    return parse_structure(data)


def list_fixtures() -> List[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


# -- validation in the shifted picture -------------------------------------


def koszul_sign(degrees: Sequence[int], permutation: Sequence[int]) -> int:
    """Sign of reordering elements of the given degrees into ``permutation`` order."""
    sign = 1
    for i, j in itertools.combinations(range(len(permutation)), 2):
        a, b = permutation[i], permutation[j]
        if a > b and degrees[a] % 2 and degrees[b] % 2:
            sign = -sign
    return sign


def shifted_bracket(L: LInfinityStructure, args: Sequence[str]) -> LinearCombination:
    """The symmetric bracket on ``L[1]``.

    ``l_k(sx_1..sx_k) = (-1)^(sum (k-i)|x_i|) s[x_1..x_k]``.
    """
    k = len(args)
    exponent = sum((k - i) * L.degree(a) for i, a in enumerate(args, start=1))
    value = L.bracket(args)
    if exponent % 2:
        return {name: -c for name, c in value.items()}
    return value


def _shifted_apply(L: LInfinityStructure, first: Mapping[str, Fraction],
                   rest: Sequence[str]) -> LinearCombination:
    out: LinearCombination = {}
    for name, c in first.items():
        _add_into(out, shifted_bracket(L, [name, *rest]), c)
    return out


def _unshuffles(n: int, i: int) -> Iterable[Tuple[int, ...]]:
    for head in itertools.combinations(range(n), i):
        tail = tuple(x for x in range(n) if x not in head)
        yield head + tail


def relation_value(L: LInfinityStructure, args: Sequence[str]) -> LinearCombination:
    """Left side of the quadratic L-infinity relation on a tuple of basis elements."""
    n = len(args)
    shifted = [L.degree(a) - 1 for a in args]
    arities = set(L.arities())
    total: LinearCombination = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        if i not in arities or j not in arities:
            continue
        for perm in _unshuffles(n, i):
            inner = shifted_bracket(L, [args[p] for p in perm[:i]])
            if not inner:
                continue
            outer = _shifted_apply(L, inner, [args[p] for p in perm[i:]])
            if outer:
                _add_into(total, outer, koszul_sign(shifted, perm))
    return total


def relation_failures(L: LInfinityStructure, limit: int = 1
                      ) -> List[Tuple[Tuple[str, ...], LinearCombination]]:
    """Basis tuples on which some quadratic relation fails (at most ``limit``)."""
    degrees = set(L.degrees())
    failures = []
    names = L.names()
    top = 2 * max(L.arities(), default=1) - 1
    for n in range(1, top + 1):
        for combo in itertools.combinations_with_replacement(names, n):
            if sum(L.degree(a) for a in combo) + 3 - n not in degrees:
                continue
            value = relation_value(L, combo)
            if value:
                failures.append((combo, value))
                if len(failures) >= limit:
                    return failures
    return failures


def validate(spec: Union[LInfinityStructure, Mapping[str, object], str, Path]
             ) -> LInfinityStructure:
    """Parse if needed and verify every axiom; raises :class:`AxiomError` with a witness."""
    L = spec if isinstance(spec, LInfinityStructure) else load_structure(spec)
    for args, value in L.brackets.items():
        expected = sum(L.degree(a) for a in args) + 2 - len(args)
        for gen in value:
            if L.degree(gen) != expected:
                raise AxiomError(f"{L.name}: bracket degree mismatch", f"[{', '.join(args)}]")
        if len(args) > 1:
            sign, key = L.canonical_order(args)
            if key != args:
                raise AxiomError(f"{L.name}: bracket stored in non-canonical order",
                                 f"[{', '.join(args)}]")
            if sign == 0:
                raise AxiomError(f"{L.name}: antisymmetry violation", f"[{', '.join(args)}]")
    if max(L.arities(), default=1) > L.max_arity:
        raise AxiomError(f"{L.name}: bracket arity exceeds max_arity {L.max_arity}")
    failures = relation_failures(L)
    if failures:
        combo, value = failures[0]
        shown = ", ".join(f"{format_scalar(c)}*{k}" for k, c in sorted(value.items()))
        raise AxiomError(f"{L.name}: L-infinity relation fails",
                         f"arguments ({', '.join(combo)}) give {shown}")
    LOGGER.debug("validated %s: %d generators, arities %s", L.name, len(L.basis), L.arities())
    return L


def truncate_positive(L: LInfinityStructure) -> LInfinityStructure:
    return L.truncate_positive()


def koszul_from_polynomial(source: Sequence[str], target: Sequence[str],
                           components: Mapping[str, PolynomialTerms],
                           name: str = "koszul") -> LInfinityStructure:
    """L-infinity structure on ``V[-1] + W[-2]`` whose curvature is the polynomial map ``F``.

    ``components[w]`` maps monomials ``((v, exponent), ...)`` in the source
    coordinates to coefficients. The k-bracket is the polarization of the
    degree-k part normalized so that ``[v, ..., v] = k! F_k(v)``.
    """
    basis = tuple([Generator(v, 1) for v in source] + [Generator(w, 2) for w in target])
    order = {v: i for i, v in enumerate(source)}
    brackets: Dict[Tuple[str, ...], LinearCombination] = {}
    max_arity = 1
    for w, poly in components.items():
        if w not in target:
            raise SpecFormatError(f"{name}: component {w!r} is not a target coordinate")
        for monomial, coefficient in poly.items():
            coefficient = Fraction(coefficient)
            if not coefficient:
                continue
            if not monomial:
                raise SpecFormatError(f"{name}: polynomial map has a nonzero constant term")
            args: List[str] = []
            multiplicity = 1
            unknown = [v for v, _ in monomial if v not in order]
            if unknown:
                raise SpecFormatError(f"{name}: unknown source coordinate {unknown[0]!r}")
            for v, e in sorted(monomial, key=lambda ve: order[ve[0]]):
                args.extend([v] * e)
                multiplicity *= factorial(e)
            key = tuple(args)
            value = brackets.setdefault(key, {})
            value[w] = value.get(w, 0) + coefficient * multiplicity
            max_arity = max(max_arity, len(args))
    brackets = {k: {w: c for w, c in v.items() if c} for k, v in brackets.items()}
    brackets = {k: v for k, v in brackets.items() if v}
    return LInfinityStructure(name, basis, brackets, max_arity)
