"""
Check batteries run by the CLI.

Each battery evaluates one area (pegs, Gleason operators, entropy,
comparisons, orders) on a loaded scenario and returns check results. The
suite runs all of them. Sampled checks draw from a stream derived from the
scenario seed and the check name, so adding a check never shifts the draws
of another.
"""

import time
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import structlog

from .algebra import (
    HistoryProjector,
    HomogeneousHistory,
    disjoint,
    history_projector,
    join,
    orthogonal,
    temporal_reverse,
)
from .compare import (
    HistoryFamily,
    classical_reduction_check,
    decoherence_matrix,
    is_consistent,
    is_linearly_positive,
)
from .constants import CONDITIONING_EPS, DEFAULT_SAMPLES, DEFAULT_TOLERANCES, Anchor, Tolerances
from .entropy import (
    Grouping,
    PegDistribution,
    concavity_check,
    conditional_entropy,
    grouping_check,
    joint_pegs,
    peg_entropy,
    strong_additivity_check,
)
from .errors import GleasonHypothesisWarning, PegCalcError, ReconstructionError
from .gleason import (
    AssignmentOracle,
    check_conjugation_consequence,
    check_state_axioms,
    decompose_states,
    reconstruct_Y,
    verify_theorem_conditions,
)
from .hilbert import (
    random_hermitian,
    random_projector,
    random_resolution,
)
from .models import CheckResult, complex_pair
from .order import (
    OrderRelation,
    available_orders,
    complement_pairs,
    get_order,
    monotonicity_audit,
    order_law_check,
    unit_constraint,
)
from .pegs import (
    GleasonOperator,
    Scenario,
    build_Y,
    build_Z,
    class_operator,
    peg,
    peg_via_Y,
    shifted_dynamics_operator,
    trace_identity_check,
)
from .report import CheckRecord, Report, scenario_digest
from .scenario import ScenarioSetup

logger = structlog.get_logger(__name__)

MONOTONICITY_MEMBERS = 4


@dataclass(frozen=True)
class RunOptions:
    """
    Per-run settings from the CLI.

    Attributes:
        tolerances: tolerances of asserted checks
        samples: draws per sampled check
        order: order name overriding the scenario's
        seed: seed overriding the scenario's
        timings: record wall time per check
    """
    tolerances: Tolerances = DEFAULT_TOLERANCES
    samples: int = DEFAULT_SAMPLES
    order: Optional[str] = None
    seed: Optional[int] = None
    timings: bool = False


# --------------------------------------------------------------------------- #
# Sampled peg-engine checks                                                   #
# --------------------------------------------------------------------------- #

def random_history(s: Scenario, rng: np.random.Generator) -> HomogeneousHistory:
    """Random Schrödinger history on the grid of ``s`` with ranks in [1, dim]."""
    dim = s.base_dim
    projectors = [random_projector(dim, int(rng.integers(1, dim + 1)), rng) for _ in s.times]
    return s.history(projectors)


def _split_slot(h: HomogeneousHistory, rng: np.random.Generator):
    """Histories differing from ``h`` in one slot by orthogonal P, Q and by P + Q."""
    dim = h.base_dim
    slot = int(rng.integers(0, h.n_steps))
    first = int(rng.integers(1, dim))
    second = int(rng.integers(1, dim - first + 1))
    p, q = random_resolution(dim, [first, second], rng)
    return h.with_step(slot, p), h.with_step(slot, q), h.with_step(slot, p + q)


def additivity_check(s: Scenario, y: GleasonOperator, samples: int, rng: np.random.Generator, tol: float) -> CheckResult:
    """
    Additivity of pegs on histories differing in one slot, and of the
    Y-form on orthogonal history projectors.
    """
    homogeneous = lattice = 0.0
    if s.base_dim >= 2:
        for _ in range(samples):
            a, b, joined = _split_slot(random_history(s, rng), rng)
            homogeneous = max(homogeneous, abs(peg(joined, s).value - peg(a, s).value - peg(b, s).value))
    dims = s.dims
    for _ in range(samples):
        total = dims.total
        first = int(rng.integers(0, total + 1))
        second = int(rng.integers(0, total - first + 1))
        p, q = (HistoryProjector(m, dims) for m in random_resolution(total, [first, second], rng))
        joined = join(p, q)
        lattice = max(lattice, abs(peg_via_Y(joined, y).value - peg_via_Y(p, y).value - peg_via_Y(q, y).value))
    return CheckResult.asserted(
        "additivity", Anchor.ADDITIVITY, {"homogeneous": homogeneous, "lattice": lattice}, tol, {"samples": samples}
    )


def disjoint_additivity_record(y: GleasonOperator, samples: int, rng: np.random.Generator) -> CheckResult:
    """
    Additivity on disjoint but non-orthogonal pairs of rank-1 projectors.

    P ∧ Q = 0 without PQ = 0 is a stronger demand than the orthogonal case,
    so the residual is reported only.
    """
    dims = y.dims
    residual = 0.0
    pairs = 0
    for _ in range(samples if dims.total >= 2 else 0):
        p, q = (HistoryProjector(random_projector(dims.total, 1, rng), dims) for _ in range(2))
        if orthogonal(p, q) or not disjoint(p, q):
            continue
        pairs += 1
        joined = join(p, q)
        residual = max(residual, abs(peg_via_Y(joined, y).value - peg_via_Y(p, y).value - peg_via_Y(q, y).value))
    return CheckResult.diagnostic(
        "additivity[disjoint]", Anchor.ADDITIVITY, {"disjoint": residual}, {"samples": samples, "pairs": pairs}
    )


def conjugation_check(s: Scenario, samples: int, rng: np.random.Generator, tol: float) -> CheckResult:
    """conj(p(α)) against p(◁α)."""
    residual = 0.0
    for h in [*s.histories, *(random_history(s, rng) for _ in range(samples))]:
        mirrored = temporal_reverse(h, s.dynamics)
        residual = max(residual, abs(peg(h, s).value.conjugate() - peg(mirrored, s).value))
    return CheckResult.asserted("conjugation", Anchor.CONJUGATION, {"conjugation": residual}, tol, {"samples": samples})


def normalisation_check(s: Scenario, y: GleasonOperator, tol: float) -> CheckResult:
    unit = s.identity_history()
    residuals = {
        "peg": abs(peg(unit, s).value - 1.0),
        "y_form": abs(peg_via_Y(HistoryProjector.identity(s.dims), y).value - 1.0),
    }
    return CheckResult.asserted("normalisation", Anchor.NORMALISATION, residuals, tol)


def born_rule_check(s: Scenario, samples: int, rng: np.random.Generator, tol: float) -> Optional[CheckResult]:
    """Single-time pegs are real probabilities; None for multi-time scenarios."""
    if s.n_times != 1:
        return None
    imaginary = outside = 0.0
    for h in [*s.histories, *(random_history(s, rng) for _ in range(samples))]:
        value = peg(h, s).value
        imaginary = max(imaginary, abs(value.imag))
        outside = max(outside, -value.real, value.real - 1.0)
    residuals = {"imaginary": imaginary, "outside_unit_interval": max(0.0, outside)}
    return CheckResult.asserted("born-rule", Anchor.BORN_RULE, residuals, tol, {"samples": samples})


def y_form_check(s: Scenario, y: GleasonOperator, samples: int, rng: np.random.Generator, tol: float) -> CheckResult:
    """p(α) against tr(α̃ Y) with Heisenberg history projectors."""
    residual = 0.0
    for h in [*s.histories, *(random_history(s, rng) for _ in range(samples))]:
        via_y = peg_via_Y(history_projector(h, s.dynamics), y).value
        residual = max(residual, abs(peg(h, s).value - via_y))
    return CheckResult.asserted("y-form", Anchor.Y_FORM, {"y_form": residual}, tol, {"samples": samples})


def z_form_check(s: Scenario, z: GleasonOperator, samples: int, rng: np.random.Generator, tol: float) -> CheckResult:
    """p(α) against tr(α Z) with Schrödinger history projectors."""
    residual = 0.0
    schrodinger = [h for h in s.histories if not h.heisenberg]
    for h in [*schrodinger, *(random_history(s, rng) for _ in range(samples))]:
        via_z = peg_via_Y(history_projector(h), z).value
        residual = max(residual, abs(peg(h, s).value - via_z))
    return CheckResult.asserted("z-form", Anchor.Z_FORM, {"z_form": residual}, tol, {"samples": samples})


def shifted_dynamics_check(s: Scenario, samples: int, rng: np.random.Generator, tol: float) -> CheckResult:
    """S^U is unitary and tr(C_α) = tr(α S^U) for Schrödinger α."""
    shifted = shifted_dynamics_operator(s.dynamics, s.n_times, s.base_dim)
    unitarity = float(np.linalg.norm(shifted.conj().T @ shifted - np.eye(shifted.shape[0])))
    trace = 0.0
    for _ in range(samples):
        h = random_history(s, rng)
        lhs = np.trace(class_operator(h, s.dynamics))
        rhs = np.trace(history_projector(h).matrix @ shifted)
        trace = max(trace, abs(lhs - rhs))
    return CheckResult.asserted(
        "shifted-dynamics", Anchor.SHIFTED_DYNAMICS, {"unitarity": unitarity, "trace": trace}, tol, {"samples": samples}
    )


def trace_identity_battery(samples: int, rng: np.random.Generator, tol: float) -> CheckResult:
    """tr(A_1 ... A_n) = tr((A_1 ⊗ ... ⊗ A_n) S) on random Hermitian tuples."""
    residual = 0.0
    for _ in range(samples):
        dim = int(rng.integers(2, 4))
        n = int(rng.integers(2, 5))
        residual = max(residual, trace_identity_check([random_hermitian(dim, rng) for _ in range(n)]))
    return CheckResult.asserted("trace-identity", Anchor.TRACE_IDENTITY, {"trace_identity": residual}, tol, {"samples": samples})


# --------------------------------------------------------------------------- #
# Gleason checks                                                              #
# --------------------------------------------------------------------------- #

def reconstruction_check(g: GleasonOperator, name: str, tol: float) -> CheckResult:
    """Reconstruct ``g`` from its trace-form assignment."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GleasonHypothesisWarning)
        try:
            recovered = reconstruct_Y(AssignmentOracle.from_operator(g), g.dims, tol=tol, reversal=g.reversal)
        except ReconstructionError as exc:
            return CheckResult.asserted(name, Anchor.RECONSTRUCTION, {"validation": exc.residual}, tol, {"error": str(exc)})
    hypothesis = not any(issubclass(w.category, GleasonHypothesisWarning) for w in caught)
    distance = float(np.linalg.norm(recovered.matrix - g.matrix))
    return CheckResult.asserted(
        name, Anchor.RECONSTRUCTION, {"distance": distance}, tol, {"dim": g.dims.total, "gleason_hypothesis": hypothesis}
    )


def decomposition_check(g: GleasonOperator, name: str, samples: int, rng: np.random.Generator, tol: float) -> CheckResult:
    """Decompose into two states and check the round trip and state bounds."""
    decomposition = decompose_states(g)
    residuals = decomposition.invariant_residuals()
    residuals["round_trip"] = float(np.linalg.norm(decomposition.recompose() - g.matrix))
    bound = 0.0
    dim = g.dims.total
    for _ in range(samples):
        p = random_projector(dim, int(rng.integers(1, dim + 1)), rng)
        real_state, imaginary_state = decomposition.state_values(p, g.matrix)
        for value in (real_state, imaginary_state):
            bound = max(bound, -value, value - 1.0)
    residuals["state_bound"] = max(0.0, bound)
    details = {"mu": decomposition.mu, "nu": decomposition.nu, "r": decomposition.r, "s": decomposition.s}
    return CheckResult.asserted(name, Anchor.DECOMPOSITION, residuals, tol, details)


# --------------------------------------------------------------------------- #
# Runner                                                                      #
# --------------------------------------------------------------------------- #

class CheckRunner:
    """
    Runs the batteries for one scenario.

    Y and Z are built once per runner and shared by every battery.
    """

    def __init__(self, setup: ScenarioSetup, options: RunOptions = RunOptions()):
        self.setup = setup
        self.options = options
        self.tol = options.tolerances
        self.samples = options.samples
        self.seed = options.seed if options.seed is not None else setup.seed
        self.digest = scenario_digest(setup)
        self.records: List[CheckRecord] = []

    @property
    def scenario(self) -> Scenario:
        return self.setup.scenario

    @cached_property
    def y(self) -> GleasonOperator:
        return build_Y(self.scenario)

    @cached_property
    def z(self) -> GleasonOperator:
        return build_Z(self.scenario)

    @cached_property
    def order(self) -> OrderRelation:
        return get_order(self.options.order or self.setup.order)

    def stream(self, name: str) -> np.random.Generator:
        """Generator for one named check, derived from the scenario seed."""
        return np.random.Generator(np.random.PCG64([self.seed, zlib.crc32(name.encode("utf-8"))]))

    def run(self, name: str, check: Callable[[], Optional[CheckResult]]) -> None:
        """
        Execute one check and record its result.

        A check that cannot be evaluated on this scenario (a zero-peg
        conditioning, say) is recorded as a diagnostic carrying the error,
        so the remaining checks still reach the report.
        """
        started = time.perf_counter()
        try:
            result = check()
        except PegCalcError as exc:
            logger.warning("check not evaluated", scenario=self.setup.name, check=name, error=str(exc))
            result = CheckResult.diagnostic(
                name,
                Anchor.for_check(name),
                details={"error": str(exc), "error_type": type(exc).__name__},
            )
        if result is None:
            return
        elapsed = time.perf_counter() - started
        logger.debug(
            "check executed",
            scenario=self.setup.name,
            check=result.name,
            status=result.status.label,
            residual=result.max_residual,
        )
        if not result.passed:
            logger.info("check failed", scenario=self.setup.name, check=result.name, residuals=result.residuals)
        self.records.append(
            CheckRecord(
                scenario=self.setup.name,
                result=result,
                seed=self.seed,
                digest=self.digest,
                wall_time=round(elapsed, 6) if self.options.timings else None,
            )
        )

    # -- batteries -------------------------------------------------------- #

    def peg_checks(self) -> None:
        s, tol, n = self.scenario, self.tol, self.samples
        for h in s.histories:
            self.run(f"peg[{h.label}]", lambda h=h: self._peg_record(h))
        self.run("normalisation", lambda: normalisation_check(s, self.y, tol.normalisation))
        self.run("additivity", lambda: additivity_check(s, self.y, n, self.stream("additivity"), tol.additivity))
        self.run("additivity[disjoint]", lambda: disjoint_additivity_record(self.y, n, self.stream("additivity[disjoint]")))
        self.run("conjugation", lambda: conjugation_check(s, n, self.stream("conjugation"), tol.conjugation))
        self.run("born-rule", lambda: born_rule_check(s, n, self.stream("born-rule"), tol.born))
        self.run("trace-identity", lambda: trace_identity_battery(n, self.stream("trace-identity"), tol.trace_identity))
        self.run(
            "shifted-dynamics",
            lambda: shifted_dynamics_check(s, n, self.stream("shifted-dynamics"), tol.trace_identity),
        )

    def _peg_record(self, h: HomogeneousHistory) -> CheckResult:
        value = peg(h, self.scenario).value
        details = {"history": h.label, "value": complex_pair(value), "real": value.real}
        return CheckResult.diagnostic(f"peg[{h.label}]", Anchor.PEG, details=details)

    def gleason_checks(self) -> None:
        s, tol, n = self.scenario, self.tol, self.samples
        self.run("y-form", lambda: y_form_check(s, self.y, n, self.stream("y-form"), tol.y_form))
        self.run("z-form", lambda: z_form_check(s, self.z, n, self.stream("z-form"), tol.y_form))
        operators = {"Y": self.y, "Z": self.z}
        if self.setup.gleason_operator is not None:
            operators["file"] = self.setup.gleason_operator
        for key, g in operators.items():
            self.run(f"theorem-conditions[{key}]", lambda g=g, key=key: verify_theorem_conditions(
                g, tol.theorem, name=f"theorem-conditions[{key}]"))
            self.run(f"conjugation-consequence[{key}]", lambda g=g, key=key: check_conjugation_consequence(
                g, n, self.stream(f"conjugation-consequence[{key}]"), tol.theorem, name=f"conjugation-consequence[{key}]"))
            self.run(f"state-decomposition[{key}]", lambda g=g, key=key: decomposition_check(
                g, f"state-decomposition[{key}]", n, self.stream(f"state-decomposition[{key}]"), tol.decomposition))
        self.run("reconstruction[Y]", lambda: reconstruction_check(self.y, "reconstruction[Y]", tol.reconstruction))
        decomposition = decompose_states(self.y)
        for key, rho in (("rho1", decomposition.rho1), ("rho2", decomposition.rho2)):
            self.run(f"state-axioms[{key}]", lambda key=key, rho=rho: check_state_axioms(
                rho, s.dims, n, self.stream(f"state-axioms[{key}]"), tol.decomposition, name=f"state-axioms[{key}]"))

    def _family_pegs(self, family: HistoryFamily) -> PegDistribution:
        pegs = tuple(peg(h, self.scenario).value for h in family.members)
        return PegDistribution(pegs, tuple(family.labels), complete=family.complete)

    def entropy_checks(self) -> None:
        setup, tol = self.setup, self.tol
        K_S = setup.K_S
        for name, family in sorted(setup.families.items()):
            self.run(f"peg-entropy[{name}]", lambda family=family, name=name: CheckResult.diagnostic(
                f"peg-entropy[{name}]", Anchor.ENTROPY,
                details={"value": complex_pair(peg_entropy(self._family_pegs(family), K_S).value), "K_S": K_S}))
        for g in setup.groupings:
            family = setup.families[g.family]
            self.run(f"grouping[{g.name}]", lambda g=g, family=family: grouping_check(
                self._family_pegs(family), g.grouping, K_S, tol.entropy, name=f"grouping[{g.name}]"))
        self.run("grouping[sampled]", lambda: sampled_grouping_check(self.samples, self.stream("grouping[sampled]"), K_S, tol.entropy))

        alpha = setup.families.get("alpha")
        for other in ("beta", "gamma"):
            partner = setup.families.get(other)
            if alpha is None or partner is None:
                continue
            pair = f"alpha|{other}"
            self.run(f"strong-additivity[{pair}]", lambda partner=partner, pair=pair: strong_additivity_check(
                alpha, partner, self.scenario, K_S, tol.entropy, name=f"strong-additivity[{pair}]", y=self.y))
            self.run(f"concavity[{pair}]", lambda partner=partner, pair=pair: concavity_check(
                alpha, partner, self.scenario, self.order, K_S, name=f"concavity[{pair}]", y=self.y))
            self.run(f"conditional-entropy[{pair}]", lambda partner=partner, pair=pair: self._conditional_record(
                alpha, partner, pair))

    def _conditional_record(self, alpha: HistoryFamily, beta: HistoryFamily, pair: str) -> CheckResult:
        pegs = joint_pegs(alpha, beta, self.scenario, self.y)
        usable = [j for j, m in enumerate(pegs.beta) if abs(m) > CONDITIONING_EPS]
        value = conditional_entropy(pegs.joint[:, usable], [pegs.beta[j] for j in usable], self.setup.K_S)
        details = {
            "value": complex_pair(value.value),
            "branch_counts": list(value.branch_corrections),
            "dropped_conditions": len(pegs.beta) - len(usable),
        }
        return CheckResult.diagnostic(f"conditional-entropy[{pair}]", Anchor.CONDITIONAL_ENTROPY, details=details)

    def compare_checks(self) -> None:
        s, tol = self.scenario, self.tol
        for name, family in sorted(self.setup.families.items()):
            self.run(f"decoherence-functional[{name}]", lambda family=family, name=name: decoherence_record(
                family, s, f"decoherence-functional[{name}]", tol.classical))
            self.run(f"linear-positivity[{name}]", lambda family=family, name=name: linear_positivity_record(
                family, s, f"linear-positivity[{name}]", tol.classical))
            if family.complete:
                self.run(f"classical-reduction[{name}]", lambda family=family, name=name: classical_reduction_check(
                    family, s, tol.classical, name=f"classical-reduction[{name}]"))

    def order_checks(self) -> None:
        for name in available_orders():
            self.run(f"order-laws[{name}]", lambda name=name: order_law_check(
                get_order(name), self.samples, self.stream(f"order-laws[{name}]"), name=f"order-laws[{name}]"))
        self.run("unit-constraint", self._unit_constraint_record)
        self.run("monotonicity", self._monotonicity_record)

    def _unit_constraint_record(self) -> CheckResult:
        values = [peg(h, self.scenario).value for h in self.scenario.histories]
        satisfied = sum(unit_constraint(v, self.order) for v in values)
        details = {"order": self.order.name, "pegs": len(values), "satisfied": satisfied}
        return CheckResult.diagnostic("unit-constraint", Anchor.UNIT_CONSTRAINT, details=details)

    def _monotonicity_record(self) -> CheckResult:
        s = self.scenario
        members = list(s.histories)[:MONOTONICITY_MEMBERS]
        projectors = [history_projector(h, s.dynamics) for h in members]
        pairs = []
        zero, unit = HistoryProjector.zero(s.dims), HistoryProjector.identity(s.dims)
        for i, p in enumerate(projectors):
            pairs.extend([(zero, p), (p, unit)])
            pairs.extend((p, join(p, q)) for q in projectors[i + 1:])
        pairs.extend(complement_pairs(projectors))
        return monotonicity_audit(pairs, self.y, self.order)

    BATTERIES: Dict[str, Sequence[str]] = {
        "peg": ("peg_checks", "order_checks"),
        "gleason": ("gleason_checks",),
        "entropy": ("entropy_checks",),
        "compare": ("compare_checks",),
        "suite": ("peg_checks", "gleason_checks", "entropy_checks", "compare_checks", "order_checks"),
    }

    def run_command(self, command: str) -> List[CheckRecord]:
        for battery in self.BATTERIES[command]:
            getattr(self, battery)()
        return self.records


# --------------------------------------------------------------------------- #
# Module-level records                                                        #
# --------------------------------------------------------------------------- #

def random_peg_set(rng: np.random.Generator, size: int) -> PegDistribution:
    """Complete complex peg set: free draws plus one entry closing the sum to 1."""
    free = rng.normal(size=size - 1) + 1j * rng.normal(size=size - 1)
    free = free * rng.uniform(0.1, 1.0)
    pegs = tuple(free) + (1.0 - complex(free.sum()),)
    return PegDistribution(pegs, complete=True)


def sampled_grouping_check(samples: int, rng: np.random.Generator, K_S: float, tol: float) -> CheckResult:
    """Grouping identity on random complete complex peg sets."""
    residual = 0.0
    crossed = 0
    for _ in range(samples):
        size = int(rng.integers(2, 7))
        p = random_peg_set(rng, size)
        grouping = Grouping(tuple(int(g) for g in rng.integers(0, 3, size=size)))
        result = grouping_check(p, grouping, K_S, tol)
        residual = max(residual, result.residuals["grouping"])
        crossed += int(not result.details["all_branches_principal"])
    return CheckResult.asserted(
        "grouping[sampled]", Anchor.GROUPING, {"grouping": residual}, tol, {"samples": samples, "branch_crossings": crossed}
    )


def decoherence_record(f: HistoryFamily, s: Scenario, name: str, tol: float) -> CheckResult:
    """The decoherence matrix is Hermitian with a non-negative real diagonal."""
    d = decoherence_matrix(f, s)
    diagonal = np.diag(d)
    residuals = {
        "hermiticity": float(np.linalg.norm(d - d.conj().T)),
        "diagonal_imaginary": float(np.max(np.abs(diagonal.imag))),
        "diagonal_negative": max(0.0, float(-diagonal.real.min())),
    }
    return CheckResult.asserted(name, Anchor.DECOHERENCE, residuals, tol, {"family": f.name, "size": len(f)})


def linear_positivity_record(f: HistoryFamily, s: Scenario, name: str, tol: float) -> CheckResult:
    """
    Linear positivity of a family; asserted for complete consistent
    families, where it is implied by consistency.
    """
    consistent = is_consistent(f, s, tol)
    positive = is_linearly_positive(f, s, tol)
    lowest = min(peg(h, s).real for h in f.members)
    details = {"family": f.name, "consistent": consistent, "linearly_positive": positive}
    residuals = {"negative_real_part": max(0.0, -lowest)}
    if consistent and f.complete:
        return CheckResult.asserted(name, Anchor.LINEAR_POSITIVITY, residuals, len(f) * tol, details)
    return CheckResult.diagnostic(name, Anchor.LINEAR_POSITIVITY, residuals, details)


def run_setups(
    command: str,
    setups: Sequence[ScenarioSetup],
    options: RunOptions,
    version: str,
    jobs: int = 1,
    seed: Optional[int] = None,
) -> Report:
    """
    Run ``command`` over every scenario and assemble one report.

    ``seed`` is the run seed recorded in the report; it defaults to the
    seed override in ``options``.

    Scenarios run concurrently when ``jobs`` > 1; record order does not
    depend on completion order.
    """
    def run_one(setup: ScenarioSetup) -> List[CheckRecord]:
        return CheckRunner(setup, options).run_command(command)

    report = Report(command=command, version=version, seed=seed if seed is not None else options.seed)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for records in pool.map(run_one, setups):
                report.extend(records)
    else:
        for setup in setups:
            report.extend(run_one(setup))
    logger.info("run finished", command=command, scenarios=len(setups), **report.summary())
    return report
