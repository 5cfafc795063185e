"""Exception hierarchy for dmc-checker.

Library code raises these; the command-line front-end maps them to exit codes.
Mathematical check failures are reported as verdicts, not raised.
"""

from typing import Optional


class DmcError(Exception):
    """Base class for all dmc-checker errors."""

    exit_code = 2


class SpecFormatError(DmcError):
    """Malformed algebra specification or scalar literal."""


class ConfigError(DmcError):
    """Invalid run configuration (bounds, check names, formats)."""


class AxiomError(DmcError):
    """An algebra specification violates an L-infinity axiom."""

    exit_code = 1

    def __init__(self, message: str, witness: Optional[str] = None):
        super().__init__(message if witness is None else f"{message} (witness: {witness})")
        self.witness = witness


class AlgebraError(DmcError):
    """Misuse of a graded algebra: unknown generators, mixed ambients, bad degrees."""


class SimplexMapError(DmcError):
    """A map of finite ordinals that is not monotone or leaves its target."""


class ComplexError(DmcError):
    """Queries outside the stored range of a complex or inconsistent chain data."""
