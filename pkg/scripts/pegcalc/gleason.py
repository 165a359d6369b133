"""
Constructive side of the Gleason-type correspondence.

A complex assignment l on P(V) that is additive and normalized is of the
form l(P) = tr(P Y). ``reconstruct_Y`` recovers Y from a black-box
assignment by linear inversion over a frame of rank-1 projectors, and
``decompose_states`` splits an admissible Y into two Gleason states.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg
import structlog

from .algebra import HistoryProjector, reversal_operator_M
from .constants import (
    DEFAULT_SAMPLES,
    RECONSTRUCTION_VALIDATION_SAMPLES,
    RECONSTRUCTION_VALIDATION_SEED,
    SMALL_DIMENSION,
    STATE_SHIFT_DELTA,
    THEOREM_TOL,
    Anchor,
)
from .errors import (
    DimensionMismatchError,
    GleasonHypothesisWarning,
    PreconditionError,
    ReconstructionError,
)
from .hilbert import (
    ComplexMatrix,
    SeedLike,
    SubsystemDims,
    as_complex_matrix,
    hermitian_part,
    ket_projector,
    make_rng,
    random_hermitian,
    random_projector,
    random_resolution,
)
from .models import CheckResult
from .pegs import GleasonOperator

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class AssignmentOracle:
    """
    Black-box complex assignment l: P(V) -> ℂ.

    Additivity and normalisation are not assumed; reconstruction checks
    the result against fresh samples.

    Attributes:
        evaluate: the assignment
        dims: factorization of V
    """
    evaluate: Callable[[HistoryProjector], complex]
    dims: SubsystemDims

    @property
    def dim(self) -> int:
        return self.dims.total

    def __call__(self, p: HistoryProjector) -> complex:
        return complex(self.evaluate(p))

    @classmethod
    def from_operator(cls, g: GleasonOperator) -> "AssignmentOracle":
        """Trace-form assignment P -> tr(P G)."""
        return cls(evaluate=lambda p: g.evaluate(p.matrix), dims=g.dims)


@dataclass(frozen=True, eq=False)
class StateDecomposition:
    """
    Y = (ρ1/μ − r·1) + i(ρ2/ν − s·1) with ρ1, ρ2 density operators on V.

    Attributes:
        rho1, rho2: states built from the shifted real and imaginary parts
        mu, nu: normalizations of the shifted parts
        r, s: eigenvalue shifts
        y1, y2: Hermitian parts (Y + Y†)/2 and (Y − Y†)/2i
    """
    rho1: ComplexMatrix
    rho2: ComplexMatrix
    mu: float
    nu: float
    r: float
    s: float
    y1: ComplexMatrix
    y2: ComplexMatrix

    def recompose(self) -> ComplexMatrix:
        eye = np.eye(self.rho1.shape[0])
        return (self.rho1 / self.mu - self.r * eye) + 1j * (self.rho2 / self.nu - self.s * eye)

    def kappa_r(self, p: ComplexMatrix) -> float:
        """κ_r(P) = r·tr P, a real additive function of P."""
        return self.r * float(np.trace(p).real)

    def kappa_s(self, p: ComplexMatrix) -> float:
        return self.s * float(np.trace(p).real)

    def state_values(self, p: ComplexMatrix, y: ComplexMatrix) -> Tuple[float, float]:
        """μ(Re l + κ_r)(P) and ν(Im l + κ_s)(P) for l(P) = tr(P Y)."""
        l = complex(np.trace(p @ y))
        return (
            self.mu * (l.real + self.kappa_r(p)),
            self.nu * (l.imag + self.kappa_s(p)),
        )

    def invariant_residuals(self) -> Dict[str, float]:
        eye = np.eye(self.rho1.shape[0])
        return {
            "rho1_min_eigenvalue": max(0.0, -float(scipy.linalg.eigvalsh(hermitian_part(self.rho1)).min())),
            "rho2_min_eigenvalue": max(0.0, -float(scipy.linalg.eigvalsh(hermitian_part(self.rho2)).min())),
            "rho1_trace": abs(np.trace(self.rho1) - 1.0),
            "rho2_trace": abs(np.trace(self.rho2) - 1.0),
            "y1_form": float(np.linalg.norm(self.y1 - (self.rho1 / self.mu - self.r * eye))),
            "y2_form": float(np.linalg.norm(self.y2 - (self.rho2 / self.nu - self.s * eye))),
        }


# --------------------------------------------------------------------------- #
# Reconstruction                                                              #
# --------------------------------------------------------------------------- #

def frame_projectors(dim: int) -> List[ComplexMatrix]:
    """
    dim² rank-1 projectors spanning the operators on a dim-dimensional space.

    Basis kets e_i, then (e_i + e_j)/√2 and (e_i + i·e_j)/√2 for i < j.
    """
    eye = np.eye(dim, dtype=np.complex128)
    frame = [ket_projector(eye[i]) for i in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            frame.append(ket_projector(eye[i] + eye[j]))
            frame.append(ket_projector(eye[i] + 1j * eye[j]))
    return frame


def _random_validation_projectors(dim: int, count: int, seed: SeedLike) -> List[ComplexMatrix]:
    rng = make_rng(seed)
    return [random_projector(dim, int(rng.integers(1, dim + 1)), rng) for _ in range(count)]


def reconstruct_Y(
    oracle: AssignmentOracle,
    dims: SubsystemDims,
    tol: float = 1e-8,
    reversal: Optional[ComplexMatrix] = None,
) -> GleasonOperator:
    """
    Recover Y with l(P) = tr(P Y) from evaluations of l on a projector frame.

    Args:
        oracle: assignment to invert
        dims: factorization of V
        tol: largest tolerated mismatch on the validation projectors
        reversal: reversal of the returned operator (M when omitted)

    Returns:
        The reconstructed operator

    Raises:
        DimensionMismatchError: oracle and dims disagree on V
        ReconstructionError: singular frame system, or the assignment is
            not of trace form (residual on fresh projectors above ``tol``)
    """
    if oracle.dim != dims.total:
        raise DimensionMismatchError(f"oracle acts on dimension {oracle.dim}, dims give {dims.total}")
    dim = dims.total
    if dim <= SMALL_DIMENSION:
        warnings.warn(
            f"dim V = {dim}: Gleason's hypothesis dim V > 2 does not hold",
            GleasonHypothesisWarning,
            stacklevel=2,
        )
        logger.warning("gleason hypothesis violated", dim=dim)

    frame = frame_projectors(dim)
    values = np.array([oracle(HistoryProjector(p, dims)) for p in frame], dtype=np.complex128)
    # tr(P Y) = vec(P^T) · vec(Y)
    system = np.array([p.T.ravel() for p in frame])
    solution, _, rank, _ = scipy.linalg.lstsq(system, values)
    if rank < dim * dim:
        residual = float(np.linalg.norm(system @ solution - values))
        raise ReconstructionError(f"frame system has rank {rank} < {dim * dim}", residual)
    y = solution.reshape(dim, dim)

    residual = 0.0
    for p in _random_validation_projectors(dim, RECONSTRUCTION_VALIDATION_SAMPLES, RECONSTRUCTION_VALIDATION_SEED):
        expected = oracle(HistoryProjector(p, dims))
        residual = max(residual, abs(expected - complex(np.trace(p @ y))))
    logger.info("reconstructed gleason operator", dim=dim, residual=residual)
    if residual > tol:
        raise ReconstructionError("assignment is not of trace form", residual)
    return GleasonOperator(y, dims, reversal=reversal)


def random_admissible_operator(dims: SubsystemDims, seed: SeedLike = None) -> GleasonOperator:
    """Random Y with Y† = M Y M and tr Y = 1."""
    rng = make_rng(seed)
    dim = dims.total
    x = random_hermitian(dim, rng) + 1j * random_hermitian(dim, rng)
    m = reversal_operator_M(dims)
    y = (x + m @ x.conj().T @ m) / 2
    # tr Y is real here, so the shift keeps Y† = MYM
    y = y - (np.trace(y).real - 1.0) / dim * np.eye(dim)
    return GleasonOperator(y, dims, reversal=m)


# --------------------------------------------------------------------------- #
# Checks                                                                      #
# --------------------------------------------------------------------------- #

def verify_theorem_conditions(y: GleasonOperator, tol: float = THEOREM_TOL, name: str = "theorem-conditions") -> CheckResult:
    """Residuals of Y† = R Y R and tr Y = 1."""
    return CheckResult.asserted(
        name,
        Anchor.THEOREM_CONDITIONS,
        {"conjugation": y.conjugation_residual, "trace": y.trace_residual},
        tol,
        details={"dim": y.dims.total},
    )


def check_conjugation_consequence(
    y: GleasonOperator,
    samples: int = DEFAULT_SAMPLES,
    seed: SeedLike = None,
    tol: float = THEOREM_TOL,
    name: str = "conjugation-consequence",
) -> CheckResult:
    """Sampled |conj(tr(P Y)) − tr(R P R Y)| over random projectors P."""
    dim = y.dims.total
    r = y.reversal
    residual = 0.0
    for p in _random_validation_projectors(dim, samples, seed):
        forward = y.evaluate(p)
        reversed_value = y.evaluate(r @ p @ r)
        residual = max(residual, abs(forward.conjugate() - reversed_value))
    return CheckResult.asserted(
        name, Anchor.CONJUGATION_CONSEQUENCE, {"conjugation": residual}, tol, details={"samples": samples}
    )


def decompose_states(y: GleasonOperator, delta: float = STATE_SHIFT_DELTA) -> StateDecomposition:
    """
    Split Y into two states on P(V).

    Raises:
        PreconditionError: a shifted part has non-positive trace
    """
    matrix = y.matrix
    dim = matrix.shape[0]
    eye = np.eye(dim)
    y1 = hermitian_part(matrix)
    y2 = hermitian_part((matrix - matrix.conj().T) / 2j)

    def shift_to_state(part: ComplexMatrix):
        shift = max(0.0, -float(scipy.linalg.eigvalsh(part).min())) + delta
        shifted = part + shift * eye
        trace = float(np.trace(shifted).real)
        if trace <= 0:
            raise PreconditionError(f"shifted part has trace {trace:.3e}, cannot normalize")
        return shift, 1.0 / trace, shifted / trace

    r, mu, rho1 = shift_to_state(y1)
    s, nu, rho2 = shift_to_state(y2)
    return StateDecomposition(rho1=rho1, rho2=rho2, mu=mu, nu=nu, r=r, s=s, y1=y1, y2=y2)


def check_state_axioms(
    rho: ComplexMatrix,
    dims: SubsystemDims,
    samples: int = DEFAULT_SAMPLES,
    seed: SeedLike = None,
    tol: float = 1e-9,
    name: str = "state-axioms",
) -> CheckResult:
    """
    Sampled check that P -> tr(ρ P) is a state on P(V).

    Positivity and the unit bound on random projectors, additivity on
    orthogonal pairs and normalisation on 1.
    """
    rho = as_complex_matrix(rho)
    dims.require_matches(rho)
    dim = dims.total
    rng = make_rng(seed)
    lower = upper = additivity = reality = 0.0
    for _ in range(samples):
        ranks = [int(rng.integers(0, dim + 1))]
        ranks.append(int(rng.integers(0, dim - ranks[0] + 1)))
        p, q = random_resolution(dim, ranks, rng)
        values = [complex(np.trace(rho @ m)) for m in (p, q, p + q)]
        reality = max(reality, *(abs(v.imag) for v in values))
        lower = max(lower, *(-v.real for v in values))
        upper = max(upper, *(v.real - 1.0 for v in values))
        additivity = max(additivity, abs(values[2] - values[0] - values[1]))
    residuals = {
        "positivity": max(0.0, lower),
        "upper_bound": max(0.0, upper),
        "additivity": additivity,
        "reality": reality,
        "normalisation": abs(np.trace(rho) - 1.0),
    }
    return CheckResult.asserted(name, Anchor.STATE_AXIOMS, residuals, tol, details={"samples": samples})
