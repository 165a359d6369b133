"""
Tests for reconstruction and decomposition of Gleason operators.

Run with: pytest scripts/pegcalc/tests/test_gleason.py -v
"""

import numpy as np
import pytest

from pegcalc.algebra import HistoryProjector
from pegcalc.constants import CheckStatus
from pegcalc.errors import DimensionMismatchError, GleasonHypothesisWarning, ReconstructionError
from pegcalc.gleason import (
    AssignmentOracle,
    check_conjugation_consequence,
    check_state_axioms,
    decompose_states,
    frame_projectors,
    random_admissible_operator,
    reconstruct_Y,
    verify_theorem_conditions,
)
from pegcalc.hilbert import SubsystemDims, is_density, make_rng, random_projector
from pegcalc.pegs import GleasonOperator, build_Y

PLANTED_EPSILON = 0.01
DIMS_BY_TOTAL = {4: SubsystemDims.uniform(2, 2), 8: SubsystemDims.uniform(2, 3), 9: SubsystemDims.uniform(3, 2)}


def planted_operator(epsilon: float = PLANTED_EPSILON) -> GleasonOperator:
    matrix = np.eye(4) / 4 + 1j * epsilon * np.diag([1, 0, 0, -1])
    return GleasonOperator(matrix, SubsystemDims.uniform(2, 2))


class TestFrame:
    """Test the reconstruction frame."""

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_frame_size_and_span(self, dim):
        frame = frame_projectors(dim)
        assert len(frame) == dim * dim
        system = np.array([p.ravel() for p in frame])
        assert np.linalg.matrix_rank(system) == dim * dim


class TestReconstruction:
    """Test recovering Y from a black-box assignment."""

    def test_planted_round_trip(self):
        worst = 0.0
        for seed in range(100):
            dims = DIMS_BY_TOTAL[(4, 8, 9)[seed % 3]]
            y = random_admissible_operator(dims, seed)
            recovered = reconstruct_Y(AssignmentOracle.from_operator(y), dims)
            worst = max(worst, float(np.linalg.norm(recovered.matrix - y.matrix)))
        assert worst <= 1e-8

    def test_planted_operators_are_admissible(self):
        for seed in range(10):
            y = random_admissible_operator(DIMS_BY_TOTAL[8], seed)
            assert y.conjugation_residual <= 1e-12
            assert y.trace_residual <= 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_build_y(self, scenario_factory, seed):
        s = scenario_factory(seed, 3, 2)
        y = build_Y(s)
        recovered = reconstruct_Y(AssignmentOracle.from_operator(y), s.dims)
        assert np.linalg.norm(recovered.matrix - y.matrix) <= 1e-8

    def test_black_box_oracle(self, scenario_factory):
        s = scenario_factory(2, 2, 2)
        y = build_Y(s)
        oracle = AssignmentOracle(evaluate=lambda p: np.trace(p.matrix @ y.matrix), dims=s.dims)
        assert oracle.dim == 4
        assert np.allclose(reconstruct_Y(oracle, s.dims).matrix, y.matrix, atol=1e-10)

    def test_non_trace_form_rejected(self):
        dims = DIMS_BY_TOTAL[4]
        y = random_admissible_operator(dims, 1)
        squared = AssignmentOracle(evaluate=lambda p: y.evaluate(p.matrix) ** 2, dims=dims)
        with pytest.raises(ReconstructionError) as info:
            reconstruct_Y(squared, dims)
        assert info.value.residual > 1e-8

    def test_small_dimension_warns(self):
        dims = SubsystemDims((2,))
        y = GleasonOperator(np.diag([0.3, 0.7]).astype(complex), dims)
        with pytest.warns(GleasonHypothesisWarning):
            recovered = reconstruct_Y(AssignmentOracle.from_operator(y), dims)
        assert np.allclose(recovered.matrix, y.matrix)

    def test_dims_mismatch(self):
        y = random_admissible_operator(DIMS_BY_TOTAL[4], 0)
        with pytest.raises(DimensionMismatchError):
            reconstruct_Y(AssignmentOracle.from_operator(y), DIMS_BY_TOTAL[8])


class TestTheoremConditions:
    """Test conditions (a) and (b) and their consequence."""

    def test_built_operators_pass(self, scenario_factory):
        s = scenario_factory(6, 2, 3)
        result = verify_theorem_conditions(build_Y(s))
        assert result.status is CheckStatus.PASS

    def test_planted_violation(self):
        result = verify_theorem_conditions(planted_operator())
        assert result.status is CheckStatus.FAIL
        assert result.residuals["conjugation"] == pytest.approx(2 * PLANTED_EPSILON * np.sqrt(2))
        assert result.residuals["trace"] == pytest.approx(0.0, abs=1e-15)

    def test_conjugation_consequence(self, scenario_factory):
        s = scenario_factory(7, 2, 2)
        assert check_conjugation_consequence(build_Y(s), samples=200, seed=3).passed
        assert not check_conjugation_consequence(planted_operator(), samples=200, seed=3).passed


class TestStateDecomposition:
    """Test Y = (ρ1/μ − r) + i(ρ2/ν − s)."""

    @pytest.mark.parametrize("seed", range(10))
    def test_states_and_round_trip(self, seed):
        y = random_admissible_operator(DIMS_BY_TOTAL[(4, 8, 9)[seed % 3]], seed)
        decomposition = decompose_states(y)
        assert is_density(decomposition.rho1)
        assert is_density(decomposition.rho2)
        assert np.linalg.norm(decomposition.recompose() - y.matrix) <= 1e-9
        assert max(decomposition.invariant_residuals().values()) <= 1e-9

    def test_sampled_state_bounds(self):
        dims = DIMS_BY_TOTAL[8]
        y = random_admissible_operator(dims, 42)
        decomposition = decompose_states(y)
        rng = make_rng(42)
        for _ in range(1000):
            p = random_projector(8, int(rng.integers(0, 9)), rng)
            first, second = decomposition.state_values(p, y.matrix)
            assert -1e-9 <= first <= 1 + 1e-9
            assert -1e-9 <= second <= 1 + 1e-9

    def test_halves_are_states(self):
        dims = DIMS_BY_TOTAL[4]
        decomposition = decompose_states(random_admissible_operator(dims, 5))
        for rho in (decomposition.rho1, decomposition.rho2):
            assert check_state_axioms(rho, dims, samples=200, seed=9).status is CheckStatus.PASS

    def test_non_state_fails_axioms(self):
        dims = SubsystemDims((2,))
        result = check_state_axioms(np.diag([1.2, -0.2]), dims, samples=200, seed=1)
        assert result.status is CheckStatus.FAIL
        assert result.residuals["positivity"] > 0.1 or result.residuals["upper_bound"] > 0.1

    def test_history_oracle_from_projectors(self, scenario_factory):
        s = scenario_factory(11, 2, 2)
        y = build_Y(s)
        oracle = AssignmentOracle.from_operator(y)
        p = HistoryProjector.identity(s.dims)
        assert oracle(p) == pytest.approx(1.0)
