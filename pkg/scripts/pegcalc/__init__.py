"""
pegcalc - complex peg calculus for quantum history propositions

Histories are tensor-product projectors on V = H ⊗ ... ⊗ H, one factor per
time. Their pegs are complex generalized probabilities; this package
computes them, builds the operators Y and Z that turn pegs into a trace
form, reconstructs such operators from black-box assignments, and checks
the entropy and order identities the pegs obey.

Usage:
    from pegcalc import Scenario, Dynamics, peg

    s = Scenario(base_dim=2, times=(0.0, 1.0), dynamics=Dynamics.identity(2, 2), rho=rho)
    value = peg(s.history([p0, plus]), s).value
"""

__version__ = "1.0.0"

from .algebra import (
    Dynamics,
    HistoryProjector,
    HomogeneousHistory,
    history_projector,
    join,
    meet,
    negation,
    reversal_operator_M,
    shift_operator_S,
    temporal_reverse,
)
from .compare import (
    HistoryFamily,
    classical_reduction_check,
    decoherence_functional,
    decoherence_matrix,
    is_consistent,
    is_linearly_positive,
)
from .constants import DEFAULT_TOLERANCES, Anchor, CheckStatus, Tolerances, Verdict
from .entropy import (
    EntropyValue,
    Grouping,
    PegDistribution,
    concavity_check,
    conditional_entropy,
    grouping_check,
    peg_entropy,
    strong_additivity_check,
)
from .errors import GleasonHypothesisWarning, PegCalcError
from .gleason import (
    AssignmentOracle,
    StateDecomposition,
    decompose_states,
    reconstruct_Y,
    verify_theorem_conditions,
)
from .hilbert import SubsystemDims, partial_trace, permutation_operator, tensor, tensor_all
from .models import CheckResult
from .order import FluxOrder, OrderRelation, RealTotalOrder, get_order, order_law_check
from .pegs import (
    GleasonOperator,
    PegValue,
    Scenario,
    build_Y,
    build_Z,
    class_operator,
    conditional_peg,
    peg,
    peg_via_Y,
    trace_identity_check,
)
from .report import Report
from .scenario import ScenarioSetup, load_scenario, random_scenarios

__all__ = [
    "Anchor",
    "AssignmentOracle",
    "CheckResult",
    "CheckStatus",
    "DEFAULT_TOLERANCES",
    "Dynamics",
    "EntropyValue",
    "FluxOrder",
    "GleasonHypothesisWarning",
    "GleasonOperator",
    "Grouping",
    "HistoryFamily",
    "HistoryProjector",
    "HomogeneousHistory",
    "OrderRelation",
    "PegCalcError",
    "PegDistribution",
    "PegValue",
    "RealTotalOrder",
    "Report",
    "Scenario",
    "ScenarioSetup",
    "StateDecomposition",
    "SubsystemDims",
    "Tolerances",
    "Verdict",
    "build_Y",
    "build_Z",
    "class_operator",
    "classical_reduction_check",
    "concavity_check",
    "conditional_entropy",
    "conditional_peg",
    "decoherence_functional",
    "decoherence_matrix",
    "decompose_states",
    "get_order",
    "grouping_check",
    "history_projector",
    "is_consistent",
    "is_linearly_positive",
    "join",
    "load_scenario",
    "meet",
    "negation",
    "order_law_check",
    "partial_trace",
    "peg",
    "peg_entropy",
    "peg_via_Y",
    "permutation_operator",
    "random_scenarios",
    "reconstruct_Y",
    "reversal_operator_M",
    "shift_operator_S",
    "strong_additivity_check",
    "temporal_reverse",
    "tensor",
    "tensor_all",
    "trace_identity_check",
    "verify_theorem_conditions",
]
