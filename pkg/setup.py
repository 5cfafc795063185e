"""Setup script for dmc-checker package."""

from setuptools import setup

# Use pyproject.toml for configuration
setup()
