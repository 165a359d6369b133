"""
Partial orders on the complex plane.

The default ``flux`` order compares values along the circles through 0
and 1. Each such circle splits into two arcs running from 0 to 1, one per
half-plane; the real axis splits into the segment [0, 1] and the outer
line through infinity. Two values are comparable iff they share an arc or
line (or one of them is an endpoint), and along a line the progress
t(z) = |z| / (|z| + |1 − z|) grows from 0 to 1.
"""

import math
from abc import ABC, abstractmethod
from typing import Dict, List, Sequence, Tuple, Type

import numpy as np
import structlog

from .algebra import HistoryProjector, leq, negation, orthogonal
from .constants import DEFAULT_ORDER, ORDER_TOL, Anchor, Verdict
from .errors import PreconditionError, UnknownOrderError
from .hilbert import SeedLike, make_rng
from .models import CheckResult, complex_pair
from .pegs import GleasonOperator, peg_via_Y

logger = structlog.get_logger(__name__)

FluxLine = Tuple[str, int, float]


class OrderRelation(ABC):
    """
    Partial order ⊑ on ℂ.

    Subclasses set ``name`` and implement ``leq``.
    """

    name: str = ""

    def __init__(self, tol: float = ORDER_TOL):
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        self.tol = tol

    @abstractmethod
    def leq(self, z1: complex, z2: complex) -> bool:
        """Whether z1 ⊑ z2."""
        pass

    def verdict(self, lower: complex, upper: complex) -> Verdict:
        """HOLDS if lower ⊑ upper, FAILS if only upper ⊑ lower, else INCOMPARABLE."""
        if self.leq(lower, upper):
            return Verdict.HOLDS
        if self.leq(upper, lower):
            return Verdict.FAILS
        return Verdict.INCOMPARABLE

    def __repr__(self) -> str:
        return f"{type(self).__name__}(tol={self.tol})"


_ORDERS: Dict[str, Type[OrderRelation]] = {}


def register_order(cls: Type[OrderRelation]) -> Type[OrderRelation]:
    _ORDERS[cls.name] = cls
    return cls


def get_order(name: str = DEFAULT_ORDER, tol: float = ORDER_TOL) -> OrderRelation:
    """
    Instantiate a registered order.

    Raises:
        UnknownOrderError: no order under ``name``
    """
    try:
        return _ORDERS[name](tol)
    except KeyError:
        raise UnknownOrderError(f"unknown order {name!r}; known: {', '.join(sorted(_ORDERS))}") from None


def available_orders() -> List[str]:
    return sorted(_ORDERS)


def progress(z: complex) -> float:
    """t(z) = |z| / (|z| + |1 − z|)."""
    near, far = abs(z), abs(1 - z)
    return near / (near + far)


def flux_line(z: complex, tol: float = ORDER_TOL) -> FluxLine:
    """
    Line through 0 and 1 that carries ``z``.

    Non-real values give ("arc", sign of Im z, c) with 1/2 + ic the centre
    of the circle through 0, 1 and z. The arcs above and below the real
    axis of one circle are distinct lines, so z and z* never compare.
    """
    if abs(z.imag) <= tol:
        inside = -tol <= z.real <= 1 + tol
        return ("segment" if inside else "outer", 0, 0.0)
    offset = (abs(z) ** 2 - z.real) / (2 * z.imag)
    return ("arc", 1 if z.imag > 0 else -1, offset)


def same_flux_line(a: FluxLine, b: FluxLine, tol: float = ORDER_TOL) -> bool:
    if a[:2] != b[:2]:
        return False
    return abs(a[2] - b[2]) <= tol * max(1.0, abs(a[2]), abs(b[2]))


@register_order
class FluxOrder(OrderRelation):
    """Comparability along flux lines from 0 (bottom) to 1 (top)."""

    name = "flux"

    def leq(self, z1: complex, z2: complex) -> bool:
        z1, z2 = complex(z1), complex(z2)
        tol = self.tol
        if abs(z1 - z2) <= tol:
            return True
        if abs(z1) <= tol or abs(z2 - 1) <= tol:
            return True
        if abs(z2) <= tol or abs(z1 - 1) <= tol:
            return False
        if not same_flux_line(flux_line(z1, tol), flux_line(z2, tol), tol):
            return False
        return progress(z1) < progress(z2)


@register_order
class RealTotalOrder(OrderRelation):
    """Numeric ≤ on real values; non-real values are incomparable."""

    name = "real-total"

    def leq(self, z1: complex, z2: complex) -> bool:
        z1, z2 = complex(z1), complex(z2)
        if abs(z1.imag) > self.tol or abs(z2.imag) > self.tol:
            return abs(z1 - z2) <= self.tol
        return z1.real <= z2.real + self.tol


def flux_order_leq(z1: complex, z2: complex, tol: float = ORDER_TOL) -> bool:
    return FluxOrder(tol).leq(z1, z2)


def unit_constraint(z: complex, order: OrderRelation) -> bool:
    """0 ⊑ z ⊑ 1."""
    return order.leq(0j, z) and order.leq(z, 1 + 0j)


# --------------------------------------------------------------------------- #
# Order laws                                                                  #
# --------------------------------------------------------------------------- #

def _arc_point(rng: np.random.Generator, offset: float) -> complex:
    radius = math.hypot(0.5, offset)
    angle = rng.uniform(-math.pi, math.pi)
    return complex(0.5 + radius * math.cos(angle), offset + radius * math.sin(angle))


def sample_points(rng: np.random.Generator, count: int) -> List[complex]:
    """
    Values exercising every comparability case.

    Draws from one shared circle so that comparable non-endpoint pairs
    occur, mixed with free complex values, reals and the endpoints.
    """
    offset = rng.normal()
    points = []
    for _ in range(count):
        kind = rng.integers(0, 4)
        if kind == 0:
            points.append(_arc_point(rng, offset))
        elif kind == 1:
            points.append(complex(rng.normal(0.5, 1.0), rng.normal(0.0, 1.0)))
        elif kind == 2:
            points.append(complex(rng.uniform(-1.0, 2.0), 0.0))
        else:
            points.append(complex(rng.integers(0, 2), 0.0))
    return points


def order_law_check(
    order: OrderRelation,
    samples: int = 1000,
    seed: SeedLike = None,
    name: str = "order-laws",
) -> CheckResult:
    """
    Count violations of the partial-order laws on sampled triples.

    Also counts conjugate pairs that compare and reals in [0, 1] where the
    order disagrees with numeric ≤.
    """
    rng = make_rng(seed)
    violations = {"reflexive": 0, "antisymmetric": 0, "transitive": 0, "conjugate": 0, "real_segment": 0}
    tol = order.tol
    for _ in range(samples):
        a, b, c = sample_points(rng, 3)
        if not order.leq(a, a):
            violations["reflexive"] += 1
        if order.leq(a, b) and order.leq(b, a) and abs(a - b) > tol:
            violations["antisymmetric"] += 1
        if order.leq(a, b) and order.leq(b, c) and not order.leq(a, c):
            violations["transitive"] += 1
        if abs(a.imag) > tol and (order.leq(a, a.conjugate()) or order.leq(a.conjugate(), a)):
            violations["conjugate"] += 1
        x, y = rng.uniform(0.0, 1.0, size=2)
        if abs(x - y) > tol and order.leq(x, y) != (x < y):
            violations["real_segment"] += 1
    residuals = {key: float(count) for key, count in violations.items()}
    return CheckResult.asserted(name, Anchor.ORDER_LAWS, residuals, 0.0, details={"order": order.name, "samples": samples})


# --------------------------------------------------------------------------- #
# Monotonicity of peg assignments                                             #
# --------------------------------------------------------------------------- #

def complement_pairs(projectors: Sequence[HistoryProjector]) -> List[Tuple[HistoryProjector, HistoryProjector]]:
    """(α, ¬β) for every ordered pair of orthogonal members, so α ≤ ¬β."""
    pairs = []
    for i, a in enumerate(projectors):
        for j, b in enumerate(projectors):
            if i != j and orthogonal(a, b):
                pairs.append((a, negation(b)))
    return pairs


def is_classical_value(z: complex, tol: float) -> bool:
    return abs(z.imag) <= tol and -tol <= z.real <= 1 + tol


def monotonicity_audit(
    pairs: Sequence[Tuple[HistoryProjector, HistoryProjector]],
    y: GleasonOperator,
    order: OrderRelation,
    name: str = "monotonicity",
) -> CheckResult:
    """
    Whether P ≤ Q carries over to p(P) ⊑ p(Q).

    Reported only, except when every peg involved is real and in [0, 1];
    there monotonicity must hold and the largest drop p(P) − p(Q) is
    asserted against the order tolerance.

    Raises:
        PreconditionError: a pair is not ordered in P(V)
    """
    counts = {verdict.value: 0 for verdict in Verdict}
    drop = 0.0
    classical = True
    samples = []
    for index, (p, q) in enumerate(pairs):
        if not leq(p, q):
            raise PreconditionError(f"pair {index} is not ordered: P ≤ Q fails")
        lower, upper = peg_via_Y(p, y).value, peg_via_Y(q, y).value
        verdict = order.verdict(lower, upper)
        counts[verdict.value] += 1
        classical = classical and is_classical_value(lower, order.tol) and is_classical_value(upper, order.tol)
        drop = max(drop, lower.real - upper.real)
        if verdict is not Verdict.HOLDS and len(samples) < 5:
            samples.append({"lower": complex_pair(lower), "upper": complex_pair(upper), "verdict": verdict.value})
    details = {"order": order.name, "pairs": len(pairs), "counts": counts, "classical": classical, "examples": samples}
    if classical:
        return CheckResult.asserted(name, Anchor.MONOTONICITY, {"drop": max(0.0, drop)}, order.tol, details)
    return CheckResult.diagnostic(name, Anchor.MONOTONICITY, details=details)
