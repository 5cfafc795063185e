"""Run configuration: bundled defaults, YAML files, ``DMC_*`` variables, flags."""

import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import yaml

from .errors import ConfigError
from .mc_locus import FRAMES

LOGGER = logging.getLogger(__name__)

DEFAULTS_FILE = Path(__file__).parent / "defaults.yml"

CHECKS: Tuple[str, ...] = ("validate", "ce", "mc", "normalize", "phi", "quasi-iso",
                           "ez-selftest", "dold-kan", "pairing", "matching", "freeness")
FORMATS = ("text", "json")
INTEGER_FIELDS = ("levels", "weight", "depth", "jobs")
ENV_PREFIX = "DMC_"


@dataclass
class RunConfig:
    levels: int = 3
    weight: int = 3
    depth: int = 3
    checks: List[str] = field(default_factory=lambda: list(CHECKS))
    format: str = "text"
    jobs: int = 1
    seed: int = 0
    frame: str = "difference"

    def validate(self) -> "RunConfig":
        for name in INTEGER_FIELDS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {value!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown check names: {', '.join(unknown)} "
                              f"(choose from {', '.join(CHECKS)})")
        if not self.checks:
            raise ConfigError("no checks selected")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {self.format!r}")
        if self.frame not in FRAMES:
            raise ConfigError(f"frame must be one of {', '.join(FRAMES)}, got {self.frame!r}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path} is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping of settings")
    unknown = sorted(set(data) - set(RunConfig.__dataclass_fields__))
    if unknown:
        raise ConfigError(f"{path}: unknown settings {', '.join(unknown)}")
    return data


def _split_checks(value: Any) -> List[str]:
    if isinstance(value, str):
        return [c.strip() for c in value.split(",") if c.strip()]
    if isinstance(value, (list, tuple)):
        return [str(c) for c in value]
    raise ConfigError(f"checks must be a list or a comma-separated string, got {value!r}")


def _from_environment(environ: Mapping[str, str]) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for name in RunConfig.__dataclass_fields__:
        raw = environ.get(ENV_PREFIX + name.upper(), "").strip()
        if not raw:
            continue
        if name in INTEGER_FIELDS or name == "seed":
            try:
                values[name] = int(raw)
            except ValueError as e:
                raise ConfigError(f"{ENV_PREFIX}{name.upper()} must be an integer, "
                                  f"got {raw!r}") from e
        else:
            values[name] = raw
    return values


def load_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None,
                environ: Optional[Mapping[str, str]] = None) -> RunConfig:
    """Layer defaults < YAML file < environment < explicit overrides and validate."""
    settings = _read_yaml(DEFAULTS_FILE)
    if path is not None:
        settings.update(_read_yaml(Path(path)))
        LOGGER.debug("loaded configuration from %s", path)
    settings.update(_from_environment(os.environ if environ is None else environ))
    settings.update({k: v for k, v in (overrides or {}).items() if v is not None})
    settings["checks"] = _split_checks(settings.get("checks", list(CHECKS)))
    return RunConfig(**settings).validate()
