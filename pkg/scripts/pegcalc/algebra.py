"""
History propositional algebra P(V) on V = H ⊗ ... ⊗ H.

Homogeneous histories are time-ordered lists of single-time projectors.
Their history projector puts the LATEST time in slot 0, so a history with
projectors a_1 (earliest) ... a_n (latest) maps to a_n ⊗ ... ⊗ a_1.

Usage:
    h = HomogeneousHistory.from_projectors([p, q], times=[0.0, 1.0])
    alpha = history_projector(h, dynamics)
    reversed_alpha = temporal_reverse(alpha)
"""

from dataclasses import dataclass, field
from functools import singledispatch
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .constants import RANK_TOL, STRUCTURAL_TOL, UNITARY_TOL
from .errors import (
    DimensionMismatchError,
    DynamicsMismatchError,
    NotAProjectorError,
    NotUnitaryError,
    PreconditionError,
)
from .hilbert import (
    ComplexMatrix,
    SubsystemDims,
    as_complex_matrix,
    hermitian_part,
    is_projector,
    is_unitary,
    permutation_operator,
    tensor_all,
)


@dataclass(frozen=True, eq=False)
class Dynamics:
    """
    Step propagators of a scenario, earliest interval first.

    Attributes:
        unitaries: U(t_1 - t_0), U(t_2 - t_1), ... in the Schrödinger picture
    """
    unitaries: Tuple[ComplexMatrix, ...]

    def __post_init__(self):
        unitaries = tuple(as_complex_matrix(u) for u in self.unitaries)
        for index, u in enumerate(unitaries):
            if not is_unitary(u, UNITARY_TOL):
                raise NotUnitaryError(f"propagator {index} is not unitary")
        if len({u.shape for u in unitaries}) > 1:
            raise DimensionMismatchError("propagators differ in dimension")
        object.__setattr__(self, "unitaries", unitaries)

    @classmethod
    def identity(cls, dim: int, n_times: int) -> "Dynamics":
        return cls(tuple(np.eye(dim, dtype=np.complex128) for _ in range(n_times)))

    @property
    def is_trivial(self) -> bool:
        return all(np.array_equal(u, np.eye(u.shape[0])) for u in self.unitaries)

    def step_propagators(self, n_times: int, dim: int) -> List[ComplexMatrix]:
        """
        One propagator per time, the initial interval included.

        A list one short of ``n_times`` is read as starting at t_1, so the
        initial interval is the identity.

        Raises:
            DynamicsMismatchError: count fits neither convention
        """
        unitaries = list(self.unitaries)
        if unitaries and unitaries[0].shape[0] != dim:
            raise DimensionMismatchError(
                f"propagators act on dimension {unitaries[0].shape[0]}, expected {dim}"
            )
        if len(unitaries) == n_times - 1:
            unitaries.insert(0, np.eye(dim, dtype=np.complex128))
        if len(unitaries) != n_times:
            raise DynamicsMismatchError(
                f"{len(self.unitaries)} propagators for {n_times} times"
            )
        return unitaries

    def cumulative(self, n_times: int, dim: int) -> List[ComplexMatrix]:
        """U_cum(t_m) = U(t_m - t_{m-1}) ... U(t_1 - t_0), earliest first."""
        cumulative = []
        running = np.eye(dim, dtype=np.complex128)
        for step in self.step_propagators(n_times, dim):
            running = step @ running
            cumulative.append(running)
        return cumulative


@dataclass(frozen=True, eq=False)
class HomogeneousHistory:
    """
    Time-ordered single-time projectors, earliest first.

    Attributes:
        steps: (time label, projector on H) pairs with strictly increasing labels
        base_dim: dimension of H
        heisenberg: projectors already carry the dynamics
        label: optional identifier used in reports
    """
    steps: Tuple[Tuple[float, ComplexMatrix], ...]
    base_dim: int
    heisenberg: bool = False
    label: str = ""

    def __post_init__(self):
        steps = tuple((float(t), as_complex_matrix(p)) for t, p in self.steps)
        if not steps:
            raise PreconditionError("a history needs at least one time step")
        for index, (_, p) in enumerate(steps):
            if p.shape[0] != self.base_dim:
                raise DimensionMismatchError(
                    f"step {index} has dimension {p.shape[0]}, expected {self.base_dim}"
                )
            if not is_projector(p, STRUCTURAL_TOL):
                raise NotAProjectorError(f"step {index} is not a projector")
        times = [t for t, _ in steps]
        if any(later <= earlier for earlier, later in zip(times, times[1:])):
            raise PreconditionError(f"time labels must increase strictly: {times}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_projectors(
        cls,
        projectors: Sequence[ComplexMatrix],
        times: Optional[Sequence[float]] = None,
        heisenberg: bool = False,
        label: str = "",
    ) -> "HomogeneousHistory":
        """Build from earliest-first projectors; times default to 0, 1, 2, ..."""
        projectors = [as_complex_matrix(p) for p in projectors]
        if times is None:
            times = [float(i) for i in range(len(projectors))]
        if len(times) != len(projectors):
            raise DimensionMismatchError("one time label per projector is required")
        return cls(
            steps=tuple(zip(times, projectors)),
            base_dim=projectors[0].shape[0],
            heisenberg=heisenberg,
            label=label,
        )

    @classmethod
    def identity(cls, base_dim: int, times: Sequence[float], label: str = "1") -> "HomogeneousHistory":
        eye = np.eye(base_dim, dtype=np.complex128)
        return cls.from_projectors([eye] * len(times), times, label=label)

    @property
    def times(self) -> Tuple[float, ...]:
        return tuple(t for t, _ in self.steps)

    @property
    def projectors(self) -> Tuple[ComplexMatrix, ...]:
        return tuple(p for _, p in self.steps)

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    @property
    def dims(self) -> SubsystemDims:
        return SubsystemDims.uniform(self.base_dim, self.n_steps)

    def with_step(self, index: int, projector: ComplexMatrix) -> "HomogeneousHistory":
        """Copy with the projector at ``index`` replaced."""
        projectors = list(self.projectors)
        projectors[index] = projector
        return HomogeneousHistory.from_projectors(
            projectors, self.times, heisenberg=self.heisenberg, label=self.label
        )


@dataclass(frozen=True, eq=False)
class HistoryProjector:
    """
    Element of P(V).

    Attributes:
        matrix: projector on V
        dims: factorization of V
    """
    matrix: ComplexMatrix
    dims: SubsystemDims
    label: str = field(default="", compare=False)

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix)
        self.dims.require_matches(matrix)
        if not is_projector(matrix, STRUCTURAL_TOL):
            raise NotAProjectorError("history proposition is not a projector")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, dims: SubsystemDims) -> "HistoryProjector":
        return cls(np.eye(dims.total, dtype=np.complex128), dims, label="1")

    @classmethod
    def zero(cls, dims: SubsystemDims) -> "HistoryProjector":
        return cls(np.zeros((dims.total, dims.total), dtype=np.complex128), dims, label="0")

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))

    def is_zero(self, tol: float = STRUCTURAL_TOL) -> bool:
        return float(np.linalg.norm(self.matrix)) <= tol

    def allclose(self, other: "HistoryProjector", tol: float = STRUCTURAL_TOL) -> bool:
        _require_same_dims(self, other)
        return float(np.linalg.norm(self.matrix - other.matrix)) <= tol


# --------------------------------------------------------------------------- #
# Pictures and history projectors                                             #
# --------------------------------------------------------------------------- #

def heisenberg_projectors(h: HomogeneousHistory, d: Optional[Dynamics]) -> List[ComplexMatrix]:
    """
    Heisenberg-picture projectors U_cum† a U_cum, earliest first.

    Histories already in the Heisenberg picture, and any history evolved by
    ``None`` dynamics, come back unchanged.

    Raises:
        DynamicsMismatchError: propagator count does not fit the history
    """
    if h.heisenberg or d is None:
        return list(h.projectors)
    cumulative = d.cumulative(h.n_steps, h.base_dim)
    return [hermitian_part(u.conj().T @ p @ u) for u, p in zip(cumulative, h.projectors)]


def history_projector(h: HomogeneousHistory, d: Optional[Dynamics] = None) -> HistoryProjector:
    """Tensor product of the history's projectors, latest time in slot 0."""
    projectors = heisenberg_projectors(h, d)
    matrix = tensor_all(reversed(projectors))
    return HistoryProjector(hermitian_part(matrix), h.dims, label=h.label)


# --------------------------------------------------------------------------- #
# Lattice operations                                                          #
# --------------------------------------------------------------------------- #

def _require_same_dims(p: HistoryProjector, q: HistoryProjector) -> None:
    if p.dims != q.dims:
        raise DimensionMismatchError(f"dims {p.dims.dims} and {q.dims.dims} differ")


def _projector_onto(basis: ComplexMatrix) -> ComplexMatrix:
    return hermitian_part(basis @ basis.conj().T)


def _rank_threshold(dim: int) -> float:
    return RANK_TOL * dim


def meet(p: HistoryProjector, q: HistoryProjector) -> HistoryProjector:
    """Projector onto ran(P) ∩ ran(Q), i.e. the common null space of 1-P and 1-Q."""
    _require_same_dims(p, q)
    dim = p.dims.total
    eye = np.eye(dim)
    stacked = np.vstack([eye - p.matrix, eye - q.matrix])
    _, singular, vh = np.linalg.svd(stacked)
    rank = int(np.sum(singular > _rank_threshold(dim)))
    basis = vh[rank:].conj().T
    return HistoryProjector(_projector_onto(basis), p.dims)


def join(p: HistoryProjector, q: HistoryProjector) -> HistoryProjector:
    """Projector onto span(ran(P) ∪ ran(Q))."""
    _require_same_dims(p, q)
    dim = p.dims.total
    u, singular, _ = np.linalg.svd(np.hstack([p.matrix, q.matrix]))
    rank = int(np.sum(singular > _rank_threshold(dim)))
    return HistoryProjector(_projector_onto(u[:, :rank]), p.dims)


def negation(p: HistoryProjector) -> HistoryProjector:
    return HistoryProjector(np.eye(p.dims.total) - p.matrix, p.dims)


def leq(p: HistoryProjector, q: HistoryProjector, tol: float = STRUCTURAL_TOL) -> bool:
    """P ≤ Q iff PQ = P."""
    _require_same_dims(p, q)
    return float(np.linalg.norm(p.matrix @ q.matrix - p.matrix)) <= tol


def disjoint(p: HistoryProjector, q: HistoryProjector, tol: float = STRUCTURAL_TOL) -> bool:
    """P ∧ Q = 0."""
    return meet(p, q).is_zero(tol)


def orthogonal(p: HistoryProjector, q: HistoryProjector, tol: float = STRUCTURAL_TOL) -> bool:
    """PQ = 0."""
    _require_same_dims(p, q)
    return float(np.linalg.norm(p.matrix @ q.matrix)) <= tol


def commute(p: HistoryProjector, q: HistoryProjector, tol: float = STRUCTURAL_TOL) -> bool:
    _require_same_dims(p, q)
    return float(np.linalg.norm(p.matrix @ q.matrix - q.matrix @ p.matrix)) <= tol


# --------------------------------------------------------------------------- #
# Structural operators M and S                                                #
# --------------------------------------------------------------------------- #

def reversal_operator_M(dims: SubsystemDims) -> ComplexMatrix:
    """M(v_1 ⊗ ... ⊗ v_m) = v_m ⊗ ... ⊗ v_1."""
    n = dims.n_slots
    return permutation_operator(dims, list(reversed(range(n))))


def shift_operator_S(dims: SubsystemDims) -> ComplexMatrix:
    """S(v_1 ⊗ v_2 ⊗ ... ⊗ v_n) = v_2 ⊗ ... ⊗ v_n ⊗ v_1."""
    n = dims.n_slots
    return permutation_operator(dims, [(k + 1) % n for k in range(n)])


@singledispatch
def temporal_reverse(proposition, dynamics: Optional[Dynamics] = None):
    """
    Reverse the temporal order of a history proposition.

    Homogeneous histories come back in the Heisenberg picture with their
    Heisenberg projectors reversed across the same time labels; general
    history projectors come back as M P M.
    """
    raise TypeError(f"cannot reverse {type(proposition).__name__}")


@temporal_reverse.register
def _(proposition: HomogeneousHistory, dynamics: Optional[Dynamics] = None) -> HomogeneousHistory:
    projectors = heisenberg_projectors(proposition, dynamics)
    return HomogeneousHistory.from_projectors(
        list(reversed(projectors)),
        proposition.times,
        heisenberg=True,
        label=f"rev({proposition.label})" if proposition.label else "",
    )


@temporal_reverse.register
def _(proposition: HistoryProjector, dynamics: Optional[Dynamics] = None) -> HistoryProjector:
    m = reversal_operator_M(proposition.dims)
    return HistoryProjector(hermitian_part(m @ proposition.matrix @ m), proposition.dims)
