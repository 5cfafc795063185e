"""
Tests for run configuration loading.
"""

import pytest

from dmc_checker.config import CHECKS, RunConfig, load_config
from dmc_checker.errors import ConfigError


class TestDefaults:
    """Test the bundled defaults."""

    def test_defaults_match_dataclass(self):
        assert load_config(environ={}) == RunConfig()

    def test_all_checks_enabled(self):
        assert load_config(environ={}).checks == list(CHECKS)


class TestLayering:
    """Test precedence: defaults < YAML < environment < overrides."""

    def test_yaml_file(self, tmp_path):
        path = tmp_path / "dmc.yml"
        path.write_text("levels: 2\nchecks: [ce, phi]\n")
        cfg = load_config(path, environ={})
        assert cfg.levels == 2
        assert cfg.checks == ["ce", "phi"]
        assert cfg.weight == 3

    def test_environment_beats_yaml(self, tmp_path):
        path = tmp_path / "dmc.yml"
        path.write_text("weight: 2\n")
        cfg = load_config(path, environ={"DMC_WEIGHT": "4", "DMC_CHECKS": "ce, mc"})
        assert cfg.weight == 4
        assert cfg.checks == ["ce", "mc"]

    def test_overrides_beat_environment(self):
        cfg = load_config(overrides={"weight": 5, "depth": None},
                          environ={"DMC_WEIGHT": "4", "DMC_DEPTH": "2"})
        assert cfg.weight == 5
        assert cfg.depth == 2

    def test_process_environment_is_read(self, monkeypatch):
        monkeypatch.setenv("DMC_JOBS", "3")
        assert load_config().jobs == 3


class TestErrors:
    """Test rejection of bad settings."""

    @pytest.mark.parametrize("overrides", [{"levels": 0}, {"weight": -1}, {"jobs": True},
                                           {"format": "xml"}, {"frame": "polar"},
                                           {"checks": "ce,bogus"}, {"checks": ""}])
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            load_config(overrides=overrides, environ={})

    def test_unknown_yaml_key(self, tmp_path):
        path = tmp_path / "dmc.yml"
        path.write_text("colour: blue\n")
        with pytest.raises(ConfigError):
            load_config(path, environ={})

    def test_yaml_must_be_mapping(self, tmp_path):
        path = tmp_path / "dmc.yml"
        path.write_text("- levels\n")
        with pytest.raises(ConfigError):
            load_config(path, environ={})

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "dmc.yml"
        path.write_text("levels: [\n")
        with pytest.raises(ConfigError):
            load_config(path, environ={})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.yml", environ={})

    def test_non_integer_environment(self):
        with pytest.raises(ConfigError):
            load_config(environ={"DMC_LEVELS": "three"})

    def test_config_error_exit_code(self):
        assert ConfigError("x").exit_code == 2
