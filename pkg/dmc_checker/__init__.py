"""
dmc-checker - exact verification of the Maurer-Cartan comparison theorem.

Builds the Chevalley-Eilenberg model of a positively graded L-infinity algebra,
the cosimplicial scheme of twisted Maurer-Cartan elements, the normalized
functions on it, and checks the comparison map between them on finite
truncations with exact rational arithmetic.
"""

__version__ = "0.1.0"

from .config import RunConfig, load_config
from .core import Report, mc_locus_report, selftest, validate_structure, verify
from .lie import LInfinityStructure, list_fixtures, load_structure, validate
from .phi import phi_map, quasi_iso_report

__all__ = [
    "LInfinityStructure",
    "Report",
    "RunConfig",
    "list_fixtures",
    "load_config",
    "load_structure",
    "mc_locus_report",
    "phi_map",
    "quasi_iso_report",
    "selftest",
    "validate",
    "validate_structure",
    "verify",
]
