"""
Complex Shannon entropy over peg distributions.

S[P] = −K_S Σ p_i Log p_i with the principal logarithm (argument in
(−π, π]) and 0·Log 0 = 0. Grouping, conditional entropy and strong
additivity hold up to logarithm branch corrections, which are tracked per
element as integers.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .algebra import HistoryProjector, commute, history_projector, meet
from .compare import HistoryFamily
from .constants import CONDITIONING_EPS, DEFAULT_K_S, Anchor
from .errors import DimensionMismatchError, IncompleteFamilyError, PreconditionError, ZeroPegError
from .hilbert import hermitian_part
from .models import CheckResult, complex_pair
from .order import OrderRelation
from .pegs import GleasonOperator, Scenario, build_Y, peg_via_Y

logger = structlog.get_logger(__name__)

COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True)
class PegDistribution:
    """
    Pegs of a family of propositions.

    Attributes:
        pegs: complex pegs
        labels: proposition identifiers
        complete: family is disjoint and exhaustive (pegs sum to 1)
    """
    pegs: Tuple[complex, ...]
    labels: Tuple[str, ...] = ()
    complete: bool = False

    def __post_init__(self):
        pegs = tuple(complex(p) for p in self.pegs)
        labels = tuple(self.labels) or tuple(str(i) for i in range(len(pegs)))
        if len(labels) != len(pegs):
            raise DimensionMismatchError("one label per peg is required")
        if self.complete and abs(sum(pegs) - 1.0) > COMPLETENESS_TOL:
            raise IncompleteFamilyError(f"complete distribution sums to {sum(pegs)}")
        object.__setattr__(self, "pegs", pegs)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.pegs)

    @property
    def total(self) -> complex:
        return sum(self.pegs, 0j)


@dataclass(frozen=True)
class Grouping:
    """
    Assignment of every element of a distribution to one group.

    Attributes:
        assignment: group index per element
    """
    assignment: Tuple[int, ...]

    def __post_init__(self):
        assignment = tuple(int(g) for g in self.assignment)
        if any(g < 0 for g in assignment):
            raise PreconditionError(f"group indices must be non-negative: {assignment}")
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def single(cls, n: int) -> "Grouping":
        return cls((0,) * n)

    @classmethod
    def singletons(cls, n: int) -> "Grouping":
        return cls(tuple(range(n)))

    @property
    def groups(self) -> List[int]:
        return sorted(set(self.assignment))

    def members(self, group: int) -> List[int]:
        return [i for i, g in enumerate(self.assignment) if g == group]


@dataclass(frozen=True)
class EntropyValue:
    """Complex entropy with the branch counts picked up on the way."""
    value: complex
    K_S: float = DEFAULT_K_S
    branch_corrections: Tuple[int, ...] = ()

    def __post_init__(self):
        value = complex(self.value)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise PreconditionError(f"entropy is not finite: {value}")
        if self.K_S <= 0:
            raise PreconditionError("K_S must be positive")
        object.__setattr__(self, "value", value)


# --------------------------------------------------------------------------- #
# Logarithms                                                                  #
# --------------------------------------------------------------------------- #

def principal_log(z: complex) -> complex:
    """Log z with Arg z in (−π, π]; a negative zero imaginary part counts as +0."""
    return complex(np.log(complex(z) + 0j))


def xlogx(z: complex) -> complex:
    """z·Log z with 0·Log 0 = 0."""
    z = complex(z)
    if z == 0:
        return 0j
    return z * principal_log(z)


def branch_counts(numerators: Sequence[complex], denominators: Sequence[complex]) -> List[int]:
    """
    k with Log(a/b) − Log a + Log b = 2πi·k for each pair (a, b).

    Pairs with a = 0 count as 0.
    """
    counts = []
    for a, b in zip(numerators, denominators):
        a, b = complex(a), complex(b)
        if a == 0:
            counts.append(0)
            continue
        gap = principal_log(a / b) - principal_log(a) + principal_log(b)
        counts.append(int(round(gap.imag / (2 * math.pi))))
    return counts


# --------------------------------------------------------------------------- #
# Entropies                                                                   #
# --------------------------------------------------------------------------- #

def peg_entropy(p: PegDistribution, K_S: float = DEFAULT_K_S) -> EntropyValue:
    return EntropyValue(-K_S * sum((xlogx(z) for z in p.pegs), 0j), K_S)


def group_pegs(p: PegDistribution, g: Grouping) -> PegDistribution:
    """p(g) = Σ_{i in g} p_i, one entry per group in increasing group order."""
    if len(g.assignment) != len(p):
        raise DimensionMismatchError(f"grouping covers {len(g.assignment)} of {len(p)} elements")
    pegs = tuple(sum((p.pegs[i] for i in g.members(group)), 0j) for group in g.groups)
    labels = tuple(f"g{group}" for group in g.groups)
    return PegDistribution(pegs, labels, complete=p.complete)


def _conditional_block(pegs: Sequence[complex], marginal: complex, eps: float) -> PegDistribution:
    if abs(marginal) <= eps:
        raise ZeroPegError(f"conditioning on a group with peg {marginal:.3e}")
    return PegDistribution(tuple(z / marginal for z in pegs))


def conditional_entropy(
    joint: np.ndarray,
    marginals: Optional[Sequence[complex]] = None,
    K_S: float = DEFAULT_K_S,
    eps: float = CONDITIONING_EPS,
) -> EntropyValue:
    """
    S[α|β] = Σ_j p(β^j) S[{p(α^i ∧ β^j) / p(β^j)}_i].

    Args:
        joint: p(α^i ∧ β^j), rows indexed by i and columns by j
        marginals: p(β^j); column sums of ``joint`` when omitted
        K_S: entropy constant
        eps: smallest usable |p(β^j)|

    Raises:
        ZeroPegError: a marginal is below ``eps`` in magnitude
    """
    joint = np.atleast_2d(np.asarray(joint, dtype=np.complex128))
    if marginals is None:
        marginals = joint.sum(axis=0)
    if len(marginals) != joint.shape[1]:
        raise DimensionMismatchError("one marginal per conditioning proposition is required")
    value = 0j
    counts: List[int] = []
    for j, marginal in enumerate(marginals):
        block = _conditional_block(joint[:, j], complex(marginal), eps)
        value += complex(marginal) * peg_entropy(block, K_S).value
        counts.extend(branch_counts(joint[:, j], [marginal] * joint.shape[0]))
    return EntropyValue(value, K_S, tuple(counts))


def _entropy_details(**values: complex) -> Dict[str, List[float]]:
    return {key: complex_pair(value) for key, value in values.items()}


def _is_integer_multiple(weighted: complex, tol: float) -> bool:
    """Whether 2πi·K·weighted is 2πi·K times an integer."""
    return abs(weighted.imag) <= tol and abs(weighted.real - round(weighted.real)) <= tol


def grouping_check(
    p: PegDistribution,
    g: Grouping,
    K_S: float = DEFAULT_K_S,
    tol: float = 1e-9,
    eps: float = CONDITIONING_EPS,
    name: str = "grouping",
) -> CheckResult:
    """
    S[p] = S[p(g)] + Σ_g p(g) S[p(·|g)] up to 2πi·K_S·Σ_j k_j p_j.

    Raises:
        IncompleteFamilyError: ``p`` is not complete
        ZeroPegError: some used group has a vanishing peg
    """
    if not p.complete:
        raise IncompleteFamilyError("grouping needs a complete distribution")
    groups = group_pegs(p, g)
    lhs = peg_entropy(p, K_S).value
    rhs = peg_entropy(groups, K_S).value
    group_peg = dict(zip(g.groups, groups.pegs))
    for group in g.groups:
        block = _conditional_block([p.pegs[i] for i in g.members(group)], group_peg[group], eps)
        rhs += group_peg[group] * peg_entropy(block, K_S).value

    denominators = [group_peg[group] for group in g.assignment]
    counts = branch_counts(p.pegs, denominators)
    weighted = sum((k * z for k, z in zip(counts, p.pegs)), 0j)
    correction = 2j * math.pi * K_S * weighted
    residual = abs(lhs - rhs - correction)
    details = {
        **_entropy_details(lhs=lhs, rhs=rhs, correction=correction),
        "branch_counts": counts,
        "all_branches_principal": not any(counts),
        "integer_multiple": _is_integer_multiple(weighted, tol),
    }
    if any(counts):
        logger.debug("grouping crossed a logarithm branch", counts=counts)
    return CheckResult.asserted(name, Anchor.GROUPING, {"grouping": residual}, tol, details)


# --------------------------------------------------------------------------- #
# Families of histories                                                       #
# --------------------------------------------------------------------------- #

@dataclass(frozen=True, eq=False)
class JointPegs:
    """
    Pegs of α^i ∧ β^j together with the marginals they are checked against.

    Attributes:
        joint: p(α^i ∧ β^j), rows α, columns β
        alpha: p(α^i)
        beta: p(β^j)
        commuting: every α^i commutes with every β^j
    """
    joint: np.ndarray
    alpha: Tuple[complex, ...]
    beta: Tuple[complex, ...]
    commuting: bool


def _joint_projector(a: HistoryProjector, b: HistoryProjector) -> HistoryProjector:
    if commute(a, b):
        return HistoryProjector(hermitian_part(a.matrix @ b.matrix), a.dims)
    return meet(a, b)


def joint_pegs(
    alpha_family: HistoryFamily,
    beta_family: HistoryFamily,
    s: Scenario,
    y: Optional[GleasonOperator] = None,
) -> JointPegs:
    """
    Evaluate the pegs of both families and of their pairwise meets.

    Raises:
        IncompleteFamilyError: either family is not complete
    """
    alpha_family.require_complete()
    beta_family.require_complete()
    y = y or build_Y(s)
    alphas = [history_projector(h, s.dynamics) for h in alpha_family.members]
    betas = [history_projector(h, s.dynamics) for h in beta_family.members]
    commuting = all(commute(a, b) for a in alphas for b in betas)
    joint = np.array(
        [[peg_via_Y(_joint_projector(a, b), y).value for b in betas] for a in alphas],
        dtype=np.complex128,
    )
    return JointPegs(
        joint=joint,
        alpha=tuple(peg_via_Y(a, y).value for a in alphas),
        beta=tuple(peg_via_Y(b, y).value for b in betas),
        commuting=commuting,
    )


def _chain_rule(joint: np.ndarray, marginals: Sequence[complex], K_S: float, eps: float):
    """S[joint], S[marginals] + S[·|marginals] and the predicted branch correction."""
    flat = tuple(joint.ravel())
    lhs = peg_entropy(PegDistribution(flat), K_S).value
    usable = [j for j, m in enumerate(marginals) if abs(m) > eps]
    for j, m in enumerate(marginals):
        if abs(m) <= eps and np.any(np.abs(joint[:, j]) > eps):
            raise ZeroPegError(f"conditioning on a proposition with peg {m:.3e}")
    rhs = peg_entropy(PegDistribution(tuple(marginals)), K_S).value
    if not usable:
        return lhs, rhs, 0j, []
    kept = joint[:, usable]
    conditional = conditional_entropy(kept, [marginals[j] for j in usable], K_S, eps)
    counts = list(conditional.branch_corrections)
    # branch counts run column by column
    weighted = sum((k * z for k, z in zip(counts, kept.T.ravel())), 0j)
    return lhs, rhs + conditional.value, 2j * math.pi * K_S * weighted, counts


def strong_additivity_check(
    alpha_family: HistoryFamily,
    beta_family: HistoryFamily,
    s: Scenario,
    K_S: float = DEFAULT_K_S,
    tol: float = 1e-9,
    eps: float = CONDITIONING_EPS,
    name: str = "strong-additivity",
    y: Optional[GleasonOperator] = None,
) -> CheckResult:
    """
    S[α∧β] against S[β] + S[α|β] and against S[α] + S[β|α].

    Asserted, modulo branch corrections, when the families commute
    elementwise; reported only otherwise.

    Raises:
        IncompleteFamilyError: either family is not complete
        ZeroPegError: a marginal vanishes while its joint pegs do not
    """
    pegs = joint_pegs(alpha_family, beta_family, s, y)
    lhs, rhs_beta, correction_beta, counts_beta = _chain_rule(pegs.joint, pegs.beta, K_S, eps)
    _, rhs_alpha, correction_alpha, counts_alpha = _chain_rule(pegs.joint.T, pegs.alpha, K_S, eps)
    residuals = {
        "given_beta": abs(lhs - rhs_beta - correction_beta),
        "given_alpha": abs(lhs - rhs_alpha - correction_alpha),
    }
    details = {
        **_entropy_details(joint_entropy=lhs, via_beta=rhs_beta, via_alpha=rhs_alpha),
        "alpha": alpha_family.name,
        "beta": beta_family.name,
        "commuting": pegs.commuting,
        "branch_counts_beta": counts_beta,
        "branch_counts_alpha": counts_alpha,
    }
    if not pegs.commuting:
        logger.info("strong additivity reported only", alpha=alpha_family.name, beta=beta_family.name)
        return CheckResult.diagnostic(name, Anchor.STRONG_ADDITIVITY, residuals, details)
    return CheckResult.asserted(name, Anchor.STRONG_ADDITIVITY, residuals, tol, details)


def concavity_check(
    alpha_family: HistoryFamily,
    beta_family: HistoryFamily,
    s: Scenario,
    order: OrderRelation,
    K_S: float = DEFAULT_K_S,
    eps: float = CONDITIONING_EPS,
    name: str = "concavity",
    y: Optional[GleasonOperator] = None,
) -> CheckResult:
    """Diagnostic: does S[α|β] ⊑ S[α] hold under ``order``?"""
    pegs = joint_pegs(alpha_family, beta_family, s, y)
    unconditional = peg_entropy(PegDistribution(pegs.alpha), K_S).value
    usable = [j for j, m in enumerate(pegs.beta) if abs(m) > eps]
    conditional = conditional_entropy(
        pegs.joint[:, usable], [pegs.beta[j] for j in usable], K_S, eps
    ).value if usable else 0j
    verdict = order.verdict(conditional, unconditional)
    details = {
        **_entropy_details(unconditional=unconditional, conditional=conditional),
        "order": order.name,
        "verdict": verdict.value,
        "commuting": pegs.commuting,
    }
    return CheckResult.diagnostic(name, Anchor.CONCAVITY, {"gap": abs(unconditional - conditional)}, details)
