"""
Exceptions raised by pegcalc.
"""

from typing import Optional


class PegCalcError(Exception):
    """Base exception for pegcalc errors."""

    pass


class DimensionMismatchError(PegCalcError, ValueError):
    """Operands do not share the required dimensions."""

    pass


class SlotOutOfRangeError(PegCalcError, IndexError):
    """A tensor slot index is outside the factorization."""

    pass


class InvalidRankError(PegCalcError, ValueError):
    """Requested rank is not in [0, dim]."""

    pass


class NonFiniteMatrixError(PegCalcError, ValueError):
    """Matrix contains NaN or Inf entries."""

    pass


class NotAProjectorError(PegCalcError, ValueError):
    """Matrix is not an orthogonal projector within tolerance."""

    pass


class NotUnitaryError(PegCalcError, ValueError):
    """Matrix is not unitary within tolerance."""

    pass


class NotADensityError(PegCalcError, ValueError):
    """Matrix is not a positive semidefinite unit-trace operator."""

    pass


class UnequalSlotDimsError(PegCalcError, ValueError):
    """Slot permutations need every slot to have the same dimension."""

    pass


class DynamicsMismatchError(PegCalcError, ValueError):
    """Number of propagators does not match the time grid."""

    pass


class ZeroPegError(PegCalcError, ZeroDivisionError):
    """Conditioning on a proposition (or group) whose peg vanishes."""

    pass


class IncompleteFamilyError(PegCalcError, ValueError):
    """Family or distribution does not resolve the identity."""

    pass


class PreconditionError(PegCalcError, ValueError):
    """Operation called outside its documented precondition."""

    pass


class UnknownOrderError(PegCalcError, KeyError):
    """No partial order registered under the requested name."""

    pass


class ReconstructionError(PegCalcError):
    """Gleason operator could not be reconstructed from an assignment."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class ScenarioFileError(PegCalcError):
    """Scenario file failed to parse or validate."""

    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        where = path or "<root>"
        if line is not None:
            where = f"line {line}: {where}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line


class GleasonHypothesisWarning(UserWarning):
    """Reconstruction requested where dim V <= 2."""

    pass
