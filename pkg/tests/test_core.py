"""
Tests for the check runner and its reports.
"""

import json

import pytest

from dmc_checker.config import RunConfig
from dmc_checker.core import (Report, mc_locus_report, positive_part, selftest,
                              validate_structure, verify)
from dmc_checker.lie import load_structure
from dmc_checker.verdict import Verdict


def config(*checks, **bounds):
    settings = {"levels": 2, "weight": 2, "depth": 1}
    settings.update(bounds)
    if checks:
        settings["checks"] = list(checks)
    return RunConfig(**settings)


@pytest.fixture
def mismatch_spec(tmp_path):
    """A spec whose bracket has the wrong degree."""
    path = tmp_path / "mismatch.json"
    path.write_text(json.dumps({
        "name": "mismatch",
        "generators": [{"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
        "brackets": [{"args": ["x", "x"], "value": [{"gen": "x", "coef": "1"}]}],
    }))
    return path


class TestValidate:
    """Test the validate command."""

    def test_fixture(self, small_config):
        report = validate_structure("fixture:odd-square", small_config)
        assert report.passed
        assert [name for name, _ in report.results] == ["validate"]
        assert report.subject == "odd-square"

    def test_degree_mismatch_fails(self, mismatch_spec, small_config):
        report = validate_structure(str(mismatch_spec), small_config)
        assert not report.passed
        assert "[x, x]" in report.results[0][1].witness


class TestVerify:
    """Test the verify command on small bounds."""

    def test_selected_checks_sorted(self):
        report = verify("fixture:odd-square", config("validate", "phi", "ce"))
        assert [name for name, _ in report.results] == ["ce", "phi", "validate"]
        assert report.passed
        assert "chain_map" in report.sections
        assert set(report.sections["oracles"]) == {"product_formula", "d_phi_formula"}

    def test_selftest_checks_are_ignored(self):
        report = verify("fixture:abelian2", config("ce", "pairing"))
        assert [name for name, _ in report.results] == ["ce"]

    def test_quasi_iso_section(self):
        report = verify("fixture:abelian2", config("quasi-iso", weight=3))
        assert report.passed
        assert report.sections["cohomology"]
        assert "H^0" in report.to_text()

    def test_non_abelian_dold_kan_is_skipped(self):
        report = verify("fixture:heis", config("dold-kan"))
        verdict = dict(report.results)["dold-kan"]
        assert verdict.passed
        assert "skipped" in verdict.details

    def test_harrison_uses_positive_truncation(self):
        report = verify("fixture:harrison-d2", config("validate", "ce"))
        assert report.passed

    def test_invalid_spec_stops_early(self, mismatch_spec):
        report = verify(str(mismatch_spec), config("ce", "phi"))
        assert report.command == "verify"
        assert not report.passed
        assert [name for name, _ in report.results] == ["validate"]

    @pytest.mark.slow
    def test_worker_pool_matches_serial_run(self):
        serial = verify("fixture:heis", config("ce", "mc", "matching"))
        pooled = verify("fixture:heis", config("ce", "mc", "matching", jobs=2))
        assert serial.to_json() == pooled.to_json()

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["abelian2", "odd-square", "heis", "koszul-x2"])
    def test_default_bounds(self, name):
        report = verify(f"fixture:{name}", RunConfig())
        assert report.passed, report.to_text()


class TestSelftest:
    """Test the structure-free checks."""

    def test_normalize_and_dold_kan(self):
        report = selftest(config("normalize", "dold-kan"))
        assert report.passed
        assert [name for name, _ in report.results] == ["dold-kan", "normalize"]

    def test_structure_checks_are_ignored(self):
        report = selftest(config("ce", "dold-kan"))
        assert [name for name, _ in report.results] == ["dold-kan"]

    @pytest.mark.slow
    def test_all(self):
        assert selftest(RunConfig()).passed


class TestMcLocus:
    """Test the mc-locus payload."""

    def test_payload(self, small_config):
        data = mc_locus_report("fixture:odd-square", small_config)
        assert data["fixture"] == "odd-square"
        assert [level["level"] for level in data["coordinates"]] == [0, 1, 2]
        assert len(data["structure_maps"]) == 8
        assert data["classical_locus"]["verdict"]["passed"]
        json.dumps(data)


class TestReport:
    """Test report rendering."""

    def test_text_and_json(self, small_config):
        report = Report("verify", "demo", small_config,
                        [("ce", Verdict("ce", True)),
                         ("phi", Verdict("phi", False,
                                         "degree -1, weight 2, basis element t[y]"))])
        text = report.to_text()
        assert "  PASS ce" in text
        assert "  FAIL phi: degree -1" in text
        assert text.endswith("Overall: FAIL")
        data = report.to_json()
        assert data["passed"] is False
        assert data["bounds"]["weight"] == 2

    def test_informational_notes(self, small_config):
        oracle = Verdict("d_phi_formula", False, "formula differs", informational=True)
        verdict = Verdict("phi", True, details={"checks": [oracle.to_json()]})
        text = Report("verify", "demo", small_config, [("phi", verdict)]).to_text()
        assert "note d_phi_formula: formula differs" in text
        assert "Overall: PASS" in text

    def test_positive_part(self):
        L = load_structure("fixture:harrison-d2")
        assert positive_part(L).is_positive()
        odd = load_structure("fixture:odd-square")
        assert positive_part(odd) is odd
