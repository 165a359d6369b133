"""
Bridges to consistent histories and linearly positive histories.

The decoherence functional is d(α, β) = tr(C_α ρ C_β†). A family is weakly
consistent when the real parts of its off-diagonal entries vanish, and
linearly positive when the real parts of its pegs are non-negative.
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .algebra import Dynamics, HistoryProjector, HomogeneousHistory, history_projector
from .constants import Anchor
from .errors import DimensionMismatchError, IncompleteFamilyError, PreconditionError
from .hilbert import ComplexMatrix
from .models import CheckResult, complex_pair
from .pegs import Scenario, class_operator, peg

logger = structlog.get_logger(__name__)

FAMILY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HistoryFamily:
    """
    A set of homogeneous histories on one time grid.

    Attributes:
        members: the histories
        complete: members are disjoint and exhaustive (projectors sum to 1)
        name: identifier used in reports
    """
    members: Tuple[HomogeneousHistory, ...]
    complete: bool = False
    name: str = ""

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise PreconditionError("a history family needs at least one member")
        first = members[0]
        for h in members[1:]:
            if h.base_dim != first.base_dim or h.times != first.times:
                raise DimensionMismatchError(f"family {self.name!r} mixes time grids or dimensions")
        object.__setattr__(self, "members", members)
        if self.complete and not self.is_resolution():
            raise IncompleteFamilyError(f"family {self.name!r} does not resolve the identity")

    @classmethod
    def product(
        cls,
        resolutions: Sequence[Sequence[ComplexMatrix]],
        times: Sequence[float],
        name: str = "",
    ) -> "HistoryFamily":
        """
        All histories choosing one projector per time, earliest first.

        Complete whenever every per-time list resolves the identity.
        """
        if len(resolutions) != len(times):
            raise DimensionMismatchError("one resolution per time is required")
        members = []
        for choice in itertools.product(*(range(len(r)) for r in resolutions)):
            projectors = [resolutions[m][k] for m, k in enumerate(choice)]
            label = "-".join(str(k) for k in choice)
            members.append(HomogeneousHistory.from_projectors(projectors, times, label=label))
        complete = all(
            np.allclose(sum(r), np.eye(np.asarray(r[0]).shape[0]), atol=FAMILY_TOL) for r in resolutions
        )
        return cls(tuple(members), complete=complete, name=name)

    @property
    def labels(self) -> List[str]:
        return [h.label or str(i) for i, h in enumerate(self.members)]

    def __len__(self) -> int:
        return len(self.members)

    def projectors(self, dynamics: Optional[Dynamics] = None) -> List[HistoryProjector]:
        return [history_projector(h, dynamics) for h in self.members]

    def is_resolution(self, tol: float = FAMILY_TOL) -> bool:
        """Projectors (either picture) sum to the identity on V."""
        projectors = self.projectors()
        total = sum(p.matrix for p in projectors)
        return float(np.linalg.norm(total - np.eye(projectors[0].dims.total))) <= tol

    def require_complete(self) -> None:
        if not (self.complete or self.is_resolution()):
            raise IncompleteFamilyError(f"family {self.name!r} does not resolve the identity")


def decoherence_functional(a: HomogeneousHistory, b: HomogeneousHistory, s: Scenario) -> complex:
    """d(α, β) = tr(C_α ρ C_β†)."""
    s.require_on_grid(a)
    s.require_on_grid(b)
    c_a = class_operator(a, s.dynamics)
    c_b = class_operator(b, s.dynamics)
    return complex(np.trace(c_a @ s.rho @ c_b.conj().T))


def decoherence_matrix(f: HistoryFamily, s: Scenario) -> ComplexMatrix:
    """Matrix of d(α^i, α^j) over a family, Hermitian with a non-negative diagonal."""
    classes = [class_operator(h, s.dynamics) for h in f.members]
    for h in f.members:
        s.require_on_grid(h)
    size = len(classes)
    d = np.empty((size, size), dtype=np.complex128)
    for i, j in itertools.product(range(size), repeat=2):
        d[i, j] = np.trace(classes[i] @ s.rho @ classes[j].conj().T)
    return d


def is_linearly_positive(f: HistoryFamily, s: Scenario, tol: float = FAMILY_TOL) -> bool:
    """Re p(α|I) >= −tol for every member."""
    return all(peg(h, s).real >= -tol for h in f.members)


def is_consistent(f: HistoryFamily, s: Scenario, tol: float = FAMILY_TOL) -> bool:
    """|Re d(α^i, α^j)| <= tol for all i != j (weak consistency)."""
    d = decoherence_matrix(f, s)
    off_diagonal = d.real - np.diag(np.diag(d.real))
    return bool(np.max(np.abs(off_diagonal), initial=0.0) <= tol)


def classical_reduction_check(
    f: HistoryFamily,
    s: Scenario,
    tol: float = FAMILY_TOL,
    name: str = "classical-reduction",
) -> CheckResult:
    """
    Compare real parts of pegs with the diagonal of the decoherence functional.

    Asserted only for consistent families; inconsistent families get a
    diagnostic record with the same residuals.

    Raises:
        IncompleteFamilyError: family is not complete
    """
    f.require_complete()
    pegs = [peg(h, s).value for h in f.members]
    d = decoherence_matrix(f, s)
    residuals = {
        "diagonal": max(abs(p.real - d[i, i].real) for i, p in enumerate(pegs)),
        "sum": abs(sum(p.real for p in pegs) - 1.0),
    }
    consistent = is_consistent(f, s, tol)
    details = {
        "family": f.name,
        "consistent": consistent,
        "linearly_positive": is_linearly_positive(f, s, tol),
        "pegs": [complex_pair(p) for p in pegs],
    }
    if not consistent:
        logger.info("classical reduction reported only", family=f.name)
        return CheckResult.diagnostic(name, Anchor.CLASSICAL_REDUCTION, residuals, details)
    return CheckResult.asserted(name, Anchor.CLASSICAL_REDUCTION, residuals, tol, details)
