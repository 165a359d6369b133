"""
Data models shared by the checks.

Every check in the package returns a ``CheckResult``; the CLI wraps those
into report records.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .constants import Anchor, CheckStatus


def complex_pair(z: complex) -> List[float]:
    """[re, im] pair used for complex numbers in every serialized form."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


@dataclass
class CheckResult:
    """
    Outcome of one check.

    Attributes:
        name: Check identifier, unique within a scenario
        anchor: Identity or property the check is anchored to
        status: pass/fail for asserted checks, diagnostic otherwise
        residuals: Named real residuals
        tolerance: Tolerance the residuals were held to (None for diagnostics)
        details: JSON-compatible extra information
    """
    name: str
    anchor: Anchor
    status: CheckStatus
    residuals: Dict[str, float] = field(default_factory=dict)
    tolerance: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def asserted(
        cls,
        name: str,
        anchor: Anchor,
        residuals: Dict[str, float],
        tolerance: float,
        details: Optional[Dict[str, Any]] = None,
    ) -> "CheckResult":
        """Pass iff every residual is within ``tolerance``."""
        passed = all(float(r) <= tolerance for r in residuals.values())
        return cls(
            name=name,
            anchor=anchor,
            status=CheckStatus.from_bool(passed),
            residuals={k: float(v) for k, v in residuals.items()},
            tolerance=tolerance,
            details=details or {},
        )

    @classmethod
    def diagnostic(
        cls,
        name: str,
        anchor: Anchor,
        residuals: Optional[Dict[str, float]] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> "CheckResult":
        return cls(
            name=name,
            anchor=anchor,
            status=CheckStatus.DIAGNOSTIC,
            residuals={k: float(v) for k, v in (residuals or {}).items()},
            details=details or {},
        )

    @property
    def passed(self) -> bool:
        """False only for asserted checks that failed."""
        return self.status is not CheckStatus.FAIL

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "anchor": self.anchor.label,
            "status": self.status.label,
            "residuals": dict(sorted(self.residuals.items())),
            "tolerance": self.tolerance,
            "details": self.details,
        }
