"""
Numerical constants and configuration.

Every tolerance, margin and default used by the peg calculus is centralized
here so that checks, reports and the CLI agree on them.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional


# Structural predicates (projector, Hermitian, leq, orthogonal, ...)
STRUCTURAL_TOL = 1e-10

# Dynamics and random unitaries
UNITARY_TOL = 1e-12

# Scenario density operators
DENSITY_TOL = 1e-10

# Rank decisions in meet/join are taken at RANK_TOL * dim
RANK_TOL = 1e-10

# Gleason operator conditions (a) and (b)
THEOREM_TOL = 1e-9

# Division cutoff for conditional pegs
CONDITIONING_EPS = 1e-12

# Eigenvalue margin used when shifting Re/Im parts to states
STATE_SHIFT_DELTA = 1e-6

# Circle membership in the flux order
ORDER_TOL = 1e-9

DEFAULT_K_S = 1.0
DEFAULT_ORDER = "flux"
DEFAULT_SAMPLES = 200
RECONSTRUCTION_VALIDATION_SAMPLES = 100
RECONSTRUCTION_VALIDATION_SEED = 20240917

SMALL_DIMENSION = 2  # Gleason hypothesis needs dim V > 2


@dataclass(frozen=True)
class Tolerances:
    """Tolerances of the asserted checks in a run."""
    additivity: float = 1e-10
    conjugation: float = 1e-10
    normalisation: float = 1e-12
    trace_identity: float = 1e-10
    y_form: float = 1e-10
    theorem: float = THEOREM_TOL
    reconstruction: float = 1e-8
    decomposition: float = 1e-9
    entropy: float = 1e-9
    classical: float = 1e-9
    born: float = 1e-12

    def overridden(self, tol: Optional[float]) -> "Tolerances":
        """Return a copy with every tolerance set to ``tol`` (no-op for None)."""
        if tol is None:
            return self
        return replace(self, **{name: tol for name in self.__dataclass_fields__})


DEFAULT_TOLERANCES = Tolerances()


class CheckStatus(Enum):
    """Outcome of a single check record."""
    PASS = ("pass", "Asserted check held within tolerance")
    FAIL = ("fail", "Asserted check exceeded tolerance")
    DIAGNOSTIC = ("diagnostic", "Reported only; never affects the exit code")

    def __init__(self, label: str, description: str):
        self.label = label
        self.description = description

    @classmethod
    def from_bool(cls, passed: Optional[bool]) -> "CheckStatus":
        """PASS/FAIL for asserted results, DIAGNOSTIC when nothing was asserted."""
        if passed is None:
            return cls.DIAGNOSTIC
        return cls.PASS if passed else cls.FAIL


class Verdict(Enum):
    """Result of comparing two complex values under a partial order."""
    HOLDS = "holds"
    FAILS = "fails"
    INCOMPARABLE = "incomparable"


class Anchor(Enum):
    """Equation each report record is anchored to, with the check family it labels."""
    NORMALISATION = ("Eq24-normalisation", "normalisation")
    ADDITIVITY = ("Eq22-additivity", "additivity")
    CONJUGATION = ("Eq9-conjugation", "conjugation")
    BORN_RULE = ("Eq5-born-rule", "born-rule")
    TRACE_IDENTITY = ("Eq10-trace-identity", "trace-identity")
    SHIFTED_DYNAMICS = ("Eq12-shifted-dynamics", "shifted-dynamics")
    Y_FORM = ("Eq17-Y-form", "y-form")
    Z_FORM = ("Eq16-Z-form", "z-form")
    THEOREM_CONDITIONS = ("Eq22-theorem-conditions", "theorem-conditions")
    CONJUGATION_CONSEQUENCE = ("Eq23-conjugation-consequence", "conjugation-consequence")
    RECONSTRUCTION = ("Eq22-reconstruction", "reconstruction")
    DECOMPOSITION = ("Eq25-state-decomposition", "state-decomposition")
    STATE_AXIOMS = ("Eq32-state-axioms", "state-axioms")
    PEG = ("Eq5-peg", "peg")
    ENTROPY = ("Eq34-peg-entropy", "peg-entropy")
    GROUPING = ("Eq47-grouping", "grouping")
    CONDITIONAL_ENTROPY = ("Eq49-conditional-entropy", "conditional-entropy")
    STRONG_ADDITIVITY = ("Eq51-strong-additivity", "strong-additivity")
    CONCAVITY = ("Eq52-concavity", "concavity")
    ORDER_LAWS = ("Fig1-order-laws", "order-laws")
    UNIT_CONSTRAINT = ("Eq33-unit-constraint", "unit-constraint")
    MONOTONICITY = ("Eq3-monotonicity", "monotonicity")
    DECOHERENCE = ("Sec3-decoherence-functional", "decoherence-functional")
    LINEAR_POSITIVITY = ("Sec3-linear-positivity", "linear-positivity")
    CLASSICAL_REDUCTION = ("Sec3-classical-reduction", "classical-reduction")

    def __init__(self, label: str, check: str):
        self.label = label
        self.check = check

    @classmethod
    def for_check(cls, name: str) -> "Anchor":
        """Anchor of a check name such as ``grouping[first-time]``."""
        family = name.split("[", 1)[0]
        for anchor in cls:
            if anchor.check == family:
                return anchor
        raise KeyError(f"no anchor for check {name!r}")
