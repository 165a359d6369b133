"""
Peg engine: class operators, complex pegs and the absorbed operators Y and Z.

A peg is p(α|I) = tr_H(C_α ρ), where the class operator C_α is the product
of the history's Heisenberg projectors with the latest time leftmost. Y
absorbs the initial state so that p(α|I) = tr_V(α̃ Y) for the Heisenberg
history projector α̃; Z also absorbs the dynamics and is paired with
Schrödinger-picture projectors.

Usage:
    s = Scenario(base_dim=2, times=(0.0, 1.0), dynamics=d, rho=rho)
    value = peg(h, s).value
    y = build_Y(s)
    assert abs(peg_via_Y(history_projector(h, d), y).value - value) < 1e-10
"""

from dataclasses import dataclass, field
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .algebra import (
    Dynamics,
    HistoryProjector,
    HomogeneousHistory,
    commute,
    heisenberg_projectors,
    meet,
    reversal_operator_M,
    shift_operator_S,
)
from .constants import CONDITIONING_EPS, DENSITY_TOL
from .errors import (
    DimensionMismatchError,
    NonFiniteMatrixError,
    NotADensityError,
    PreconditionError,
    ZeroPegError,
)
from .hilbert import (
    ComplexMatrix,
    SubsystemDims,
    as_complex_matrix,
    hermitian_part,
    is_density,
    partial_trace,
    tensor,
    tensor_all,
)

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    Initial state, dynamics and time grid shared by a set of histories.

    Attributes:
        base_dim: dimension of the single-time space H
        times: time grid, strictly increasing
        dynamics: step propagators for the grid
        rho: initial density operator on H
        histories: histories evaluated in this scenario
        seed: seed the scenario was drawn or loaded with
        label: scenario name used in reports
    """
    base_dim: int
    times: Tuple[float, ...]
    dynamics: Dynamics
    rho: ComplexMatrix
    histories: Tuple[HomogeneousHistory, ...] = ()
    seed: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if not times:
            raise PreconditionError("a scenario needs at least one time")
        if any(later <= earlier for earlier, later in zip(times, times[1:])):
            raise PreconditionError(f"time labels must increase strictly: {times}")
        rho = as_complex_matrix(self.rho)
        if rho.shape[0] != self.base_dim:
            raise DimensionMismatchError(
                f"rho has dimension {rho.shape[0]}, expected {self.base_dim}"
            )
        if not is_density(rho, DENSITY_TOL):
            raise NotADensityError("rho must be positive semidefinite with unit trace")
        # Validates the propagator count against the grid.
        self.dynamics.step_propagators(len(times), self.base_dim)
        for h in self.histories:
            self._require_on_grid(h, times)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "histories", tuple(self.histories))

    def _require_on_grid(self, h: HomogeneousHistory, times: Tuple[float, ...]) -> None:
        if h.base_dim != self.base_dim:
            raise DimensionMismatchError(
                f"history {h.label!r} has base_dim {h.base_dim}, expected {self.base_dim}"
            )
        if len(h.times) != len(times) or not np.allclose(h.times, times, rtol=0.0, atol=1e-12):
            raise PreconditionError(f"history {h.label!r} is not on the scenario time grid")

    @property
    def n_times(self) -> int:
        return len(self.times)

    @property
    def dims(self) -> SubsystemDims:
        return SubsystemDims.uniform(self.base_dim, self.n_times)

    def require_on_grid(self, h: HomogeneousHistory) -> None:
        """
        Raises:
            DimensionMismatchError: history has another base dimension
            PreconditionError: history uses another time grid
        """
        self._require_on_grid(h, self.times)

    def history(self, projectors: Sequence[ComplexMatrix], label: str = "") -> HomogeneousHistory:
        """Schrödinger-picture history on this scenario's grid."""
        return HomogeneousHistory.from_projectors(projectors, self.times, label=label)

    def identity_history(self) -> HomogeneousHistory:
        return HomogeneousHistory.identity(self.base_dim, self.times)

    def cumulative(self) -> List[ComplexMatrix]:
        return self.dynamics.cumulative(self.n_times, self.base_dim)

    def with_histories(self, histories: Sequence[HomogeneousHistory]) -> "Scenario":
        return Scenario(
            base_dim=self.base_dim,
            times=self.times,
            dynamics=self.dynamics,
            rho=self.rho,
            histories=tuple(histories),
            seed=self.seed,
            label=self.label,
        )


@dataclass(frozen=True)
class PegValue:
    """A complex peg p(α|I)."""
    value: complex

    def __post_init__(self):
        value = complex(self.value)
        if not (np.isfinite(value.real) and np.isfinite(value.imag)):
            raise NonFiniteMatrixError(f"peg is not finite: {value}")
        object.__setattr__(self, "value", value)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def conjugate(self) -> "PegValue":
        return PegValue(self.value.conjugate())


@dataclass(frozen=True, eq=False)
class GleasonOperator:
    """
    Operator G on V with l(P) = tr(P G).

    Admissible operators satisfy G† = R G R for their reversal R and
    tr G = 1. These are not enforced on construction so that violations can
    be represented and reported by ``verify_theorem_conditions``.

    Attributes:
        matrix: operator on V
        dims: factorization of V
        reversal: unitary involution R (M when omitted)
    """
    matrix: ComplexMatrix
    dims: SubsystemDims
    reversal: Optional[ComplexMatrix] = field(default=None, repr=False)

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix)
        self.dims.require_matches(matrix)
        reversal = self.reversal
        if reversal is None:
            reversal = reversal_operator_M(self.dims)
        reversal = as_complex_matrix(reversal)
        self.dims.require_matches(reversal)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "reversal", reversal)

    @property
    def conjugation_residual(self) -> float:
        """‖G† − R G R‖_F, condition (a)."""
        r = self.reversal
        return float(np.linalg.norm(self.matrix.conj().T - r @ self.matrix @ r))

    @property
    def trace_residual(self) -> float:
        """|tr G − 1|, condition (b)."""
        return float(abs(np.trace(self.matrix) - 1.0))

    def evaluate(self, p: ComplexMatrix) -> complex:
        return complex(np.trace(p @ self.matrix))


@dataclass(frozen=True)
class ConditionalPeg:
    """
    p(a|b I) together with how far it can be trusted.

    Attributes:
        value: peg(a ∧ b) / peg(b)
        reliable: False for non-commuting pairs
        commuting: whether a and b commute
    """
    value: complex
    reliable: bool
    commuting: bool


# --------------------------------------------------------------------------- #
# Class operators and pegs                                                    #
# --------------------------------------------------------------------------- #

def class_operator(h: HomogeneousHistory, d: Optional[Dynamics]) -> ComplexMatrix:
    """C_α = α(t_n)(t_n) ... α(t_1)(t_1), latest Heisenberg projector leftmost."""
    projectors = heisenberg_projectors(h, d)
    return reduce(np.matmul, reversed(projectors))


def peg(h: HomogeneousHistory, s: Scenario) -> PegValue:
    """p(α|I) = tr_H(C_α ρ)."""
    s.require_on_grid(h)
    c = class_operator(h, s.dynamics)
    return PegValue(np.trace(c @ s.rho))


def trace_identity_check(matrices: Sequence[ComplexMatrix]) -> float:
    """
    |tr(A_1 ... A_n) − tr((A_1 ⊗ ... ⊗ A_n) S)|.

    Raises:
        DimensionMismatchError: matrices differ in dimension
    """
    matrices = [as_complex_matrix(m) for m in matrices]
    if not matrices:
        raise PreconditionError("at least one matrix is required")
    dim = matrices[0].shape[0]
    if any(m.shape[0] != dim for m in matrices):
        raise DimensionMismatchError("trace identity needs matrices of equal dimension")
    product = np.trace(reduce(np.matmul, matrices))
    dims = SubsystemDims.uniform(dim, len(matrices))
    shifted = np.trace(tensor_all(matrices) @ shift_operator_S(dims))
    return float(abs(product - shifted))


def _frame(cumulative: Sequence[ComplexMatrix]) -> ComplexMatrix:
    """W = U_cum(t_n) ⊗ ... ⊗ U_cum(t_1)."""
    return tensor_all(reversed(list(cumulative)))


def shifted_dynamics_operator(d: Dynamics, n: int, dim: Optional[int] = None) -> ComplexMatrix:
    """
    S^U = W S W†, with W the tensor product of cumulative propagators.

    Schrödinger projectors paired with S^U reproduce the trace of the
    class operator: tr(C_α) = tr((α_{t_n} ⊗ ... ⊗ α_{t_1}) S^U).

    Raises:
        DynamicsMismatchError: ``n`` does not fit the propagator count
    """
    if dim is None:
        if not d.unitaries:
            raise PreconditionError("dimension is required for empty dynamics")
        dim = d.unitaries[0].shape[0]
    w = _frame(d.cumulative(n, dim))
    s = shift_operator_S(SubsystemDims.uniform(dim, n))
    return w @ s @ w.conj().T


def _absorb_state(rho: ComplexMatrix, shift: ComplexMatrix, n: int) -> ComplexMatrix:
    """tr over an appended slot of (1 ⊗ ... ⊗ 1 ⊗ ρ) · shift."""
    dim = rho.shape[0]
    extended = SubsystemDims.uniform(dim, n + 1)
    lifted = tensor(np.eye(dim ** n, dtype=np.complex128), rho)
    return partial_trace(lifted @ shift, extended, n)


def build_Y(s: Scenario) -> GleasonOperator:
    """
    Absorb the initial state into Y_ρ.

    p(α|I) = tr_V(α̃ Y_ρ) for the Heisenberg history projector α̃, and
    Y_ρ† = M Y_ρ M, tr Y_ρ = 1.
    """
    n = s.n_times
    shift = shift_operator_S(SubsystemDims.uniform(s.base_dim, n + 1))
    y = _absorb_state(s.rho, shift, n)
    logger.debug("built Y", n_times=n, dim=s.dims.total)
    return GleasonOperator(y, s.dims)


def build_Z(s: Scenario) -> GleasonOperator:
    """
    Absorb the initial state and the dynamics into Z.

    p(α|I) = tr_V((α_{t_n} ⊗ ... ⊗ α_{t_1}) Z) with Schrödinger projectors.
    Z = W Y W†, so it is conjugation symmetric under R = W M W†.
    """
    n = s.n_times
    w = _frame(s.cumulative())
    w_ext = tensor(w, np.eye(s.base_dim, dtype=np.complex128))
    shift = shift_operator_S(SubsystemDims.uniform(s.base_dim, n + 1))
    shifted = w_ext @ shift @ w_ext.conj().T
    z = _absorb_state(s.rho, shifted, n)
    reversal = w @ reversal_operator_M(s.dims) @ w.conj().T
    return GleasonOperator(z, s.dims, reversal=reversal)


def peg_via_Y(p: HistoryProjector, y: GleasonOperator) -> PegValue:
    """
    l(P) = tr_V(P Y), defined on all of P(V).

    Raises:
        DimensionMismatchError: P and Y act on different spaces
    """
    if p.dims != y.dims:
        raise DimensionMismatchError(f"projector dims {p.dims.dims} vs operator dims {y.dims.dims}")
    return PegValue(y.evaluate(p.matrix))


def conditional_peg(
    a: HistoryProjector,
    b: HistoryProjector,
    y: GleasonOperator,
    eps: float = CONDITIONING_EPS,
) -> ConditionalPeg:
    """
    p(a|b I) = p(a ∧ b|I) / p(b|I).

    Non-commuting pairs still get a value through the lattice meet, marked
    unreliable.

    Raises:
        ZeroPegError: |p(b|I)| <= eps
    """
    denominator = peg_via_Y(b, y).value
    if abs(denominator) <= eps:
        raise ZeroPegError(f"cannot condition on a proposition with peg {denominator:.3e}")
    commuting = commute(a, b)
    if commuting:
        joint = HistoryProjector(hermitian_part(a.matrix @ b.matrix), a.dims)
    else:
        logger.warning("conditioning on a non-commuting proposition", a=a.label, b=b.label)
        joint = meet(a, b)
    value = peg_via_Y(joint, y).value / denominator
    return ConditionalPeg(value=value, reliable=commuting, commuting=commuting)
