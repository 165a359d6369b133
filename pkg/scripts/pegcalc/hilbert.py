"""
Dense complex linear algebra for desk-scale Hilbert spaces.

Conventions:
- Slot 0 is the leftmost tensor factor and the slowest-varying index.
- Matrices are plain ``numpy.ndarray`` objects of dtype complex128; they
  are never mutated in place by this package.
- Random draws take either an integer seed or a ``numpy.random.Generator``
  (PCG64), so a single seed can drive a whole battery of draws.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .constants import DENSITY_TOL, STRUCTURAL_TOL, UNITARY_TOL
from .errors import (
    DimensionMismatchError,
    InvalidRankError,
    NonFiniteMatrixError,
    SlotOutOfRangeError,
    UnequalSlotDimsError,
)

ComplexMatrix = npt.NDArray[np.complex128]
SeedLike = Union[int, np.random.Generator, None]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Return a PCG64 generator for ``seed`` (a Generator passes through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def as_complex_matrix(m) -> ComplexMatrix:
    """
    Coerce ``m`` to a square, finite complex128 matrix.

    Raises:
        DimensionMismatchError: not a square 2-d array
        NonFiniteMatrixError: NaN or Inf entries
    """
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteMatrixError("matrix has NaN or Inf entries")
    return arr


@dataclass(frozen=True)
class SubsystemDims:
    """
    Per-slot dimensions of a tensor factorization.

    Attributes:
        dims: slot dimensions, slot 0 first
    """
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if any(d <= 0 for d in dims):
            raise DimensionMismatchError(f"slot dimensions must be positive: {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def uniform(cls, dim: int, n: int) -> "SubsystemDims":
        """``n`` slots of dimension ``dim``."""
        return cls((dim,) * n)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.dims else 1

    @property
    def n_slots(self) -> int:
        return len(self.dims)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.dims)) <= 1

    def without(self, slot: int) -> "SubsystemDims":
        """Factorization with ``slot`` removed."""
        return SubsystemDims(self.dims[:slot] + self.dims[slot + 1:])

    def appended(self, dim: int) -> "SubsystemDims":
        """Factorization with one more slot on the right."""
        return SubsystemDims(self.dims + (dim,))

    def require_matches(self, m: ComplexMatrix) -> None:
        if m.shape[0] != self.total:
            raise DimensionMismatchError(
                f"matrix of dimension {m.shape[0]} does not match dims {self.dims}"
            )

    def to_list(self) -> List[int]:
        return list(self.dims)


# --------------------------------------------------------------------------- #
# Tensor products and partial traces                                          #
# --------------------------------------------------------------------------- #

def tensor(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; ``a`` owns the slowest-varying index."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def tensor_all(matrices: Iterable[ComplexMatrix]) -> ComplexMatrix:
    """Kronecker product of a sequence, left to right (empty -> 1x1 identity)."""
    return reduce(np.kron, (as_complex_matrix(m) for m in matrices), np.eye(1, dtype=np.complex128))


def partial_trace(m: ComplexMatrix, dims: SubsystemDims, slot: int) -> ComplexMatrix:
    """
    Trace out one slot of a tensor factorization.

    Args:
        m: operator on the full space
        dims: factorization of the space ``m`` acts on
        slot: index of the slot to remove

    Returns:
        Operator on the remaining slots (1x1 when the last slot is removed)

    Raises:
        SlotOutOfRangeError: slot not in [0, n_slots)
        DimensionMismatchError: ``m`` does not match ``dims``
    """
    m = as_complex_matrix(m)
    n = dims.n_slots
    if not 0 <= slot < n:
        raise SlotOutOfRangeError(f"slot {slot} out of range for {n} slots")
    dims.require_matches(m)

    shaped = m.reshape(dims.dims + dims.dims)
    reduced = np.trace(shaped, axis1=slot, axis2=slot + n)
    rest = dims.without(slot).total
    return np.asarray(reduced).reshape(rest, rest)


def permutation_operator(dims: SubsystemDims, source: Sequence[int]) -> ComplexMatrix:
    """
    Unitary that permutes tensor slots.

    The output slot ``k`` carries the input slot ``source[k]``, i.e.
    P(v_0 ⊗ ... ⊗ v_{n-1}) = v_{source[0]} ⊗ ... ⊗ v_{source[n-1]}.

    Raises:
        UnequalSlotDimsError: slots differ in dimension
    """
    if not dims.is_uniform:
        raise UnequalSlotDimsError(f"slot permutation needs equal slot dims, got {dims.dims}")
    n = dims.n_slots
    if sorted(source) != list(range(n)):
        raise ValueError(f"{list(source)} is not a permutation of {n} slots")

    total = dims.total
    if n == 0:
        return np.eye(1, dtype=np.complex128)
    digits = np.indices(dims.dims).reshape(n, -1)
    targets = np.ravel_multi_index(tuple(digits[list(source)]), dims.dims)
    perm = np.zeros((total, total), dtype=np.complex128)
    perm[targets, np.arange(total)] = 1.0
    return perm


# --------------------------------------------------------------------------- #
# Structural predicates                                                       #
# --------------------------------------------------------------------------- #

def _fro(m: ComplexMatrix) -> float:
    return float(np.linalg.norm(m, "fro"))


def is_hermitian(m: ComplexMatrix, tol: float = STRUCTURAL_TOL) -> bool:
    m = as_complex_matrix(m)
    return _fro(m - m.conj().T) <= tol


def is_projector(m: ComplexMatrix, tol: float = STRUCTURAL_TOL) -> bool:
    """True iff ``m`` is Hermitian and idempotent within ``tol`` (Frobenius)."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    m = as_complex_matrix(m)
    return _fro(m - m.conj().T) <= tol and _fro(m @ m - m) <= tol


def is_unitary(m: ComplexMatrix, tol: float = UNITARY_TOL) -> bool:
    m = as_complex_matrix(m)
    return _fro(m.conj().T @ m - np.eye(m.shape[0])) <= tol


def is_density(m: ComplexMatrix, tol: float = DENSITY_TOL) -> bool:
    """Hermitian, positive semidefinite and unit trace within ``tol``."""
    m = as_complex_matrix(m)
    if not is_hermitian(m, tol):
        return False
    eigenvalues = scipy.linalg.eigvalsh((m + m.conj().T) / 2)
    return bool(eigenvalues.min() >= -tol) and abs(np.trace(m) - 1.0) <= tol


def hermitian_part(m: ComplexMatrix) -> ComplexMatrix:
    return (m + m.conj().T) / 2


# --------------------------------------------------------------------------- #
# Random sampling                                                             #
# --------------------------------------------------------------------------- #

def _ginibre(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)


def random_unitary(dim: int, seed: SeedLike = None) -> ComplexMatrix:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    rng = make_rng(seed)
    q, r = scipy.linalg.qr(_ginibre(dim, rng))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(dim: int, seed: SeedLike = None) -> ComplexMatrix:
    return hermitian_part(_ginibre(dim, make_rng(seed)))


def random_projector(dim: int, rank: int, seed: SeedLike = None) -> ComplexMatrix:
    """
    Rank-``rank`` spectral projector of a random Hermitian matrix.

    Raises:
        InvalidRankError: rank not in [0, dim]
    """
    if not 0 <= rank <= dim:
        raise InvalidRankError(f"rank {rank} not in [0, {dim}]")
    _, vecs = scipy.linalg.eigh(random_hermitian(dim, seed))
    basis = vecs[:, :rank]
    return hermitian_part(basis @ basis.conj().T)


def random_density(dim: int, seed: SeedLike = None) -> ComplexMatrix:
    """Normalized G G† for a complex Gaussian G."""
    g = _ginibre(dim, make_rng(seed))
    rho = hermitian_part(g @ g.conj().T)
    return rho / np.trace(rho).real


def random_resolution(dim: int, ranks: Sequence[int], seed: SeedLike = None) -> List[ComplexMatrix]:
    """
    Mutually orthogonal projectors cut from the columns of one random unitary.

    When ``sum(ranks) == dim`` the projectors resolve the identity.

    Raises:
        InvalidRankError: ranks negative or summing past ``dim``
    """
    if any(r < 0 for r in ranks) or sum(ranks) > dim:
        raise InvalidRankError(f"ranks {list(ranks)} do not fit in dimension {dim}")
    u = random_unitary(dim, seed)
    projectors = []
    start = 0
    for rank in ranks:
        cols = u[:, start:start + rank]
        projectors.append(hermitian_part(cols @ cols.conj().T))
        start += rank
    return projectors


def basis_projector(dim: int, k: int) -> ComplexMatrix:
    """|k><k| in the computational basis."""
    if not 0 <= k < dim:
        raise InvalidRankError(f"basis index {k} not in [0, {dim})")
    p = np.zeros((dim, dim), dtype=np.complex128)
    p[k, k] = 1.0
    return p


def ket_projector(vector: Sequence[complex]) -> ComplexMatrix:
    """Rank-1 projector onto the normalized ``vector``."""
    v = np.asarray(vector, dtype=np.complex128)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
