"""
Pytest configuration and fixtures for dmc-checker tests.
"""

import pytest

from dmc_checker.config import RunConfig
from dmc_checker.lie import load_structure


@pytest.fixture
def abelian2():
    return load_structure("fixture:abelian2")


@pytest.fixture
def odd_square():
    return load_structure("fixture:odd-square")


@pytest.fixture
def heis():
    return load_structure("fixture:heis")


@pytest.fixture
def koszul_x2():
    return load_structure("fixture:koszul-x2")


@pytest.fixture
def harrison_positive():
    """The Harrison fixture truncated to degrees >= 1."""
    return load_structure("fixture:harrison-d2").truncate_positive()


@pytest.fixture
def small_config():
    """Bounds small enough for unit-level runs of the full pipeline."""
    return RunConfig(levels=2, weight=2, depth=1)


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    """Keep DMC_* variables from the developer's shell out of every test."""
    import os

    for name in list(os.environ):
        if name.startswith("DMC_"):
            monkeypatch.delenv(name, raising=False)
