"""Check runner: resolves inputs, dispatches checks and assembles reports.

Structure checks run against one algebra spec (a path or ``fixture:NAME``);
self-test checks need no input. Every check is a pure function of its
arguments, so ``jobs > 1`` hands them to a process pool and the report is
re-ordered by check name afterwards.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from .chevalley import bianchi_check, ce_model
from .complexes import check_differential
from .config import RunConfig
from .errors import AxiomError
from .lambda_algebra import (append_convention_report, append_isomorphism, check_lambda_map,
                             coproduct_duality, epsilon_basis_check, equivariance_check,
                             lambda_pairing)
from .lie import LInfinityStructure, load_structure, validate
from .mc_locus import (MaurerCartanTower, classical_locus, cosimplicial_scheme_check,
                       embedding_check, explicit_formula_oracle, frame_change_check,
                       functions_algebra, low_level_oracle, matching_check)
from .phi import (abelian_dold_kan_check, chain_map_check, freeness_hilbert,
                  graded_independence_check, phi_map, quasi_iso_report, random_abelian,
                  shifted_complex)
from .simplex import codegeneracy, coface, cosimplicial_identities
from .simplicial import (bialgebra_check, compare_normalizations, eilenberg_zilber_check,
                         k_functor_family, random_family, shuffle_product_check)
from .verdict import Verdict, combine

LOGGER = logging.getLogger(__name__)

STRUCTURE_CHECKS = ("validate", "ce", "mc", "normalize", "phi", "quasi-iso", "dold-kan",
                    "matching", "freeness")
SELFTEST_CHECKS = ("ez-selftest", "pairing", "normalize", "dold-kan")

# Fixture whose function algebra feeds the structural Eilenberg-Zilber checks.
SELFTEST_FIXTURE = "fixture:odd-square"
RANDOM_FAMILIES = 20

Extras = Dict[str, Any]
Outcome = Tuple[Verdict, Extras]


@dataclass
class Report:
    """Verdicts of one run plus the payload sections some checks contribute."""

    command: str
    subject: Optional[str]
    config: RunConfig
    results: List[Tuple[str, Verdict]] = field(default_factory=list)
    sections: Extras = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for _, v in self.results)

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "command": self.command,
            "fixture": self.subject,
            "bounds": {"levels": self.config.levels, "weight": self.config.weight,
                       "depth": self.config.depth, "frame": self.config.frame},
            "passed": self.passed,
            "checks": {name: v.to_json() for name, v in self.results},
        }
        data.update(self.sections)
        return data

    def to_text(self) -> str:
        cfg = self.config
        lines = [f"{self.command} {self.subject or ''}".rstrip()
                 + f" (levels {cfg.levels}, weight {cfg.weight}, depth {cfg.depth}, "
                   f"frame {cfg.frame})"]
        for name, verdict in self.results:
            status = "PASS" if verdict.passed else "FAIL"
            lines.append(f"  {status} {name}" + ("" if verdict.passed else f": {verdict.witness}"))
            for sub in verdict.details.get("checks", []):
                if sub.get("informational") and not sub["passed"]:
                    lines.append(f"    note {sub['name']}: {sub.get('witness')}")
        for row in self.sections.get("cohomology", []):
            weight = f", weight {row['weight']}" if "weight" in row else ""
            lines.append(f"  H^{row['degree']}{weight}: {row['dim_source']} -> "
                         f"{row['dim_target']} ({row['induced']})")
        lines.append(f"Overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


# -- structure checks ---------------------------------------------------------


def _check_validate(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    validate(L)
    return Verdict("validate", True, details={"generators": len(L.basis),
                                              "arities": L.arities()}), {}


def _check_ce(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    ce = ce_model(L, cfg.weight, cfg.depth)
    checks = [check_differential(ce.complex)]
    if L.is_dgla():
        checks.append(bianchi_check(L))
    dims = {str(n): ce.complex.dim(n) for n in ce.complex.degrees()}
    return combine("ce", checks, dims=dims), {}


def _check_mc(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    checks = [cosimplicial_scheme_check(L, cfg.levels, cfg.frame),
              embedding_check(L, cfg.levels, cfg.frame)]
    checks += [frame_change_check(L, n) for n in range(1, cfg.levels + 1)]
    checks += [explicit_formula_oracle(L, min(cfg.levels, 3)), low_level_oracle(L)]
    locus = classical_locus(L)
    checks.append(locus.verdict)
    return combine("mc", checks), {"classical_locus": locus.to_json()}


def _check_normalize(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    A = functions_algebra(L, cfg.levels, cfg.weight, cfg.frame)
    checks = [A.check_identities(), compare_normalizations(A), shuffle_product_check(A),
              graded_independence_check(L, cfg.levels, cfg.weight, cfg.frame)]
    if A.coproduct is not None:
        checks.append(bialgebra_check(A, min(cfg.levels, 2)))
    return combine("normalize", checks), {}


def _check_phi(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    phi = phi_map(L, cfg.depth, cfg.weight, cfg.frame)
    verdict = chain_map_check(phi)
    oracles = {sub["name"]: sub for sub in verdict.details["checks"] if sub.get("informational")}
    return verdict, {"chain_map": phi.chain_map.check().to_json(), "oracles": oracles}


def _check_quasi_iso(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    report = quasi_iso_report(L, cfg.depth, cfg.weight, cfg.frame)
    payload = report.to_json()
    return report.verdict, {"cohomology": payload["cohomology"], "stable": payload["stable"]}


def _check_dold_kan(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    if not L.is_abelian():
        skipped = {"skipped": "brackets beyond the differential"}
        return Verdict("dold_kan", True, details=skipped), {}
    return abelian_dold_kan_check(L, cfg.levels, cfg.frame), {}


def _check_matching(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    checks = [matching_check(L, n, cfg.frame) for n in range(1, cfg.levels + 1)]
    return combine("matching", checks), {}


def _check_freeness(L: LInfinityStructure, cfg: RunConfig) -> Outcome:
    report = freeness_hilbert(L, cfg.levels, cfg.weight, cfg.frame)
    return report.verdict, {"freeness": report.to_json()}


STRUCTURE_RUNNERS: Dict[str, Callable[[LInfinityStructure, RunConfig], Outcome]] = {
    "ce": _check_ce,
    "mc": _check_mc,
    "normalize": _check_normalize,
    "phi": _check_phi,
    "quasi-iso": _check_quasi_iso,
    "dold-kan": _check_dold_kan,
    "matching": _check_matching,
    "freeness": _check_freeness,
}


# -- self-tests ---------------------------------------------------------------


def _selftest_ez(cfg: RunConfig) -> Outcome:
    bound = min(cfg.levels, 3)
    K = k_functor_family(shifted_complex(random_abelian(cfg.seed)), bound)
    A = functions_algebra(load_structure(SELFTEST_FIXTURE), bound, 2)
    checks = [cosimplicial_identities(4), eilenberg_zilber_check(K, K),
              eilenberg_zilber_check(A, A), shuffle_product_check(A), bialgebra_check(A, 2)]
    return combine("ez-selftest", checks), {}


def _selftest_pairing(cfg: RunConfig) -> Outcome:
    checks = [lambda_pairing(n) for n in range(1, 6)]
    checks += [coproduct_duality(n, 2) for n in range(1, 4)]
    checks += [epsilon_basis_check(n) for n in range(1, 5)]
    checks += [equivariance_check(3), append_isomorphism(3), append_convention_report(3)]
    elementary = [coface(n, i) for n in range(1, 4) for i in range(n + 1)]
    elementary += [codegeneracy(n, i) for n in range(3) for i in range(n + 1)]
    checks += [check_lambda_map(theta) for theta in elementary]
    return combine("pairing", checks), {}


def _selftest_normalize(cfg: RunConfig) -> Outcome:
    checks = [compare_normalizations(random_family(cfg.seed + i, 4))
              for i in range(RANDOM_FAMILIES)]
    return combine("normalize", checks, families=RANDOM_FAMILIES), {}


def _selftest_dold_kan(cfg: RunConfig) -> Outcome:
    return abelian_dold_kan_check(random_abelian(cfg.seed), min(cfg.levels, 3)), {}


SELFTEST_RUNNERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "ez-selftest": _selftest_ez,
    "pairing": _selftest_pairing,
    "normalize": _selftest_normalize,
    "dold-kan": _selftest_dold_kan,
}


# -- dispatch -----------------------------------------------------------------


def positive_part(L: LInfinityStructure) -> LInfinityStructure:
    """``L`` itself when concentrated in degrees >= 1, else its positive truncation."""
    if L.is_positive():
        return L
    LOGGER.info("%s has generators in degree <= 0; using its positive truncation", L.name)
    return L.truncate_positive()


def run_check(check: str, source: Optional[str], settings: Dict[str, Any]) -> Outcome:
    """Run one check in the current process; the unit of work for the pool."""
    cfg = RunConfig(**settings)
    started = time.perf_counter()
    if source is None:
        outcome = SELFTEST_RUNNERS[check](cfg)
    else:
        outcome = STRUCTURE_RUNNERS[check](positive_part(load_structure(source)), cfg)
    LOGGER.info("check %s on %s: %s in %.2fs", check, source or "selftest",
                "pass" if outcome[0].passed else "fail", time.perf_counter() - started)
    return outcome


def _dispatch(checks: List[str], source: Optional[str], cfg: RunConfig) -> List[Outcome]:
    settings = cfg.to_dict()
    if cfg.jobs > 1 and len(checks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(run_check, c, source, settings) for c in checks]
            return [f.result() for f in futures]
    return [run_check(c, source, settings) for c in checks]


def _assemble(command: str, subject: Optional[str], cfg: RunConfig, checks: List[str],
              outcomes: List[Outcome]) -> Report:
    report = Report(command, subject, cfg)
    for name, (verdict, extras) in sorted(zip(checks, outcomes), key=lambda item: item[0]):
        report.results.append((name, verdict))
        report.sections.update(extras)
    return report


def validate_structure(source: str, cfg: RunConfig) -> Report:
    """Parse and validate; axiom failures become a failing ``validate`` verdict."""
    try:
        L = validate(load_structure(source))
    except AxiomError as e:
        report = Report("validate", source, cfg)
        report.results.append(("validate", Verdict("validate", False, str(e))))
        return report
    outcome = _check_validate(L, cfg)
    return _assemble("validate", L.name, cfg, ["validate"], [outcome])


def verify(source: str, cfg: RunConfig) -> Report:
    """Validate, then run the selected structure checks."""
    validated = validate_structure(source, cfg)
    if not validated.passed:
        validated.command = "verify"
        return validated
    name = validated.subject
    checks = [c for c in STRUCTURE_CHECKS if c in cfg.checks and c != "validate"]
    skipped = sorted(set(cfg.checks) - set(STRUCTURE_CHECKS))
    if skipped:
        LOGGER.debug("verify skips structure-free checks: %s", ", ".join(skipped))
    report = _assemble("verify", name, cfg, checks, _dispatch(checks, source, cfg))
    if "validate" in cfg.checks:
        report.results = sorted(report.results + validated.results, key=lambda item: item[0])
    return report


def selftest(cfg: RunConfig) -> Report:
    """Structural identities that need no user algebra."""
    checks = [c for c in SELFTEST_CHECKS if c in cfg.checks]
    return _assemble("selftest", None, cfg, checks, _dispatch(checks, None, cfg))


def mc_locus_report(source: str, cfg: RunConfig) -> Dict[str, Any]:
    """Coordinates, structure-map polynomials, oracle verdicts and the classical locus."""
    L = positive_part(validate(load_structure(source)))
    tower = MaurerCartanTower(L, cfg.frame)
    elementary = [coface(n, i) for n in range(1, cfg.levels + 1) for i in range(n + 1)]
    elementary += [codegeneracy(n, i) for n in range(cfg.levels) for i in range(n + 1)]
    return {
        "fixture": L.name,
        "frame": cfg.frame,
        "coordinates": [tower.coordinates(n).to_json() for n in range(cfg.levels + 1)],
        "structure_maps": [{"map": str(theta), "images": tower.structure_map(theta).to_json()}
                           for theta in elementary],
        "oracles": [explicit_formula_oracle(L, min(cfg.levels, 3)).to_json(),
                    low_level_oracle(L).to_json()],
        "classical_locus": classical_locus(L).to_json(),
    }
