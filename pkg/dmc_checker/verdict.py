"""Verdict records shared by every check."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass
class Verdict:
    """Outcome of one mathematical check.

    ``informational`` verdicts record disagreements with closed-form
    formulas; they never make a run fail.
    """

    name: str
    passed: bool
    witness: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)
    informational: bool = False

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            data["witness"] = self.witness
        if self.informational:
            data["informational"] = True
        if self.details:
            data["details"] = self.details
        return data


def combine(name: str, verdicts, **details: Any) -> Verdict:
    """Fold several verdicts into one; the first failing witness is kept."""
    verdicts = list(verdicts)
    failing = [v for v in verdicts if not v.passed and not v.informational]
    witness = None
    if failing:
        first = failing[0]
        witness = f"{first.name}: {first.witness}" if first.witness else first.name
    merged = dict(details)
    merged.setdefault("checks", [v.to_json() for v in verdicts])
    return Verdict(name, not failing, witness, merged)
