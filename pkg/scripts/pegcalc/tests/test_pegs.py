"""
Tests for the peg engine: class operators, pegs, Y and Z.

Run with: pytest scripts/pegcalc/tests/test_pegs.py -v
"""

import numpy as np
import pytest

from pegcalc.algebra import Dynamics, HistoryProjector, HomogeneousHistory, history_projector, temporal_reverse
from pegcalc.errors import (
    DimensionMismatchError,
    DynamicsMismatchError,
    NotADensityError,
    PreconditionError,
    ZeroPegError,
)
from pegcalc.hilbert import (
    SubsystemDims,
    is_unitary,
    ket_projector,
    make_rng,
    random_hermitian,
    random_projector,
    random_resolution,
    tensor,
)
from pegcalc.pegs import (
    GleasonOperator,
    PegValue,
    Scenario,
    build_Y,
    build_Z,
    class_operator,
    conditional_peg,
    peg,
    peg_via_Y,
    shifted_dynamics_operator,
    trace_identity_check,
)

from .conftest import KET0, KET1, PLUS, make_scenario

PLUS_I = ket_projector([1, 1j])


def _random_history(s: Scenario, rng) -> HomogeneousHistory:
    return s.history([random_projector(s.base_dim, int(rng.integers(1, s.base_dim + 1)), rng) for _ in s.times])


def _sizes(seed: int):
    rng = make_rng(seed)
    return int(rng.choice([2, 3])), int(rng.choice([2, 3]))


class TestScenario:
    """Test scenario validation."""

    def test_rejects_non_density(self):
        with pytest.raises(NotADensityError):
            Scenario(2, (0.0, 1.0), Dynamics.identity(2, 2), np.diag([1.5, -0.5]))

    def test_rejects_unordered_times(self):
        with pytest.raises(PreconditionError):
            Scenario(2, (1.0, 0.0), Dynamics.identity(2, 2), KET0)

    def test_rejects_wrong_propagator_count(self):
        with pytest.raises(DynamicsMismatchError):
            Scenario(2, (0.0, 1.0, 2.0), Dynamics.identity(2, 1), KET0)

    def test_rejects_off_grid_history(self, qubit_scenario):
        h = HomogeneousHistory.from_projectors([KET0, PLUS], times=[0.0, 2.0])
        with pytest.raises(PreconditionError):
            qubit_scenario.with_histories([h])
        with pytest.raises(PreconditionError):
            peg(h, qubit_scenario)

    def test_rejects_other_dimension(self, qubit_scenario):
        h = HomogeneousHistory.from_projectors([np.eye(3), np.eye(3)])
        with pytest.raises(DimensionMismatchError):
            peg(h, qubit_scenario)


class TestPeg:
    """Test complex pegs p(α|I) = tr(C_α ρ)."""

    def test_qubit_example(self, qubit_scenario):
        value = peg(qubit_scenario.history([KET0, PLUS]), qubit_scenario)
        assert value.value == pytest.approx(0.5)
        assert value.imag == pytest.approx(0.0)

    def test_genuinely_complex(self, qubit_scenario):
        value = peg(qubit_scenario.history([PLUS, PLUS_I]), qubit_scenario).value
        assert value == pytest.approx(0.25 - 0.25j)

    def test_orthogonal_steps_give_zero(self, qubit_scenario):
        assert peg(qubit_scenario.history([KET0, KET1]), qubit_scenario).value == 0

    def test_class_operator_order(self, qubit_scenario):
        c = class_operator(qubit_scenario.history([KET0, PLUS]), qubit_scenario.dynamics)
        assert np.allclose(c, PLUS @ KET0)

    @pytest.mark.parametrize("seed", range(20))
    def test_normalisation(self, seed):
        dim, n = _sizes(seed)
        s = make_scenario(seed, dim, n)
        assert abs(peg(s.identity_history(), s).value - 1.0) <= 1e-12

    def test_additivity(self):
        worst = 0.0
        for seed in range(1000):
            dim, n = _sizes(seed)
            s = make_scenario(seed, dim, n)
            rng = make_rng(seed + 10_000)
            h = _random_history(s, rng)
            slot = int(rng.integers(0, n))
            p, q = random_resolution(dim, [1, 1], rng)
            joined = peg(h.with_step(slot, p + q), s).value
            parts = peg(h.with_step(slot, p), s).value + peg(h.with_step(slot, q), s).value
            worst = max(worst, abs(joined - parts))
        assert worst <= 1e-10

    def test_conjugation(self):
        worst = 0.0
        for seed in range(1000):
            dim, n = _sizes(seed)
            s = make_scenario(seed, dim, n)
            h = _random_history(s, make_rng(seed + 20_000))
            mirrored = temporal_reverse(h, s.dynamics)
            worst = max(worst, abs(peg(h, s).value.conjugate() - peg(mirrored, s).value))
        assert worst <= 1e-10

    def test_single_time_is_born_rule(self, rng):
        s = Scenario(3, (0.0,), Dynamics(()), make_scenario(3, 3, 2).rho)
        for _ in range(50):
            p = random_projector(3, int(rng.integers(0, 4)), rng)
            value = peg(s.history([p]), s).value
            assert value.imag == pytest.approx(0.0, abs=1e-12)
            assert value.real == pytest.approx(np.trace(p @ s.rho).real, abs=1e-12)
            assert -1e-12 <= value.real <= 1 + 1e-12

    def test_non_finite_peg(self):
        with pytest.raises(ValueError):
            PegValue(complex("nan"))


class TestTraceIdentity:
    """Test tr(A_1 ... A_n) = tr((A_1 ⊗ ... ⊗ A_n) S)."""

    def test_random_tuples(self, rng):
        worst = 0.0
        for _ in range(1000):
            dim = int(rng.integers(2, 4))
            n = int(rng.integers(2, 5))
            worst = max(worst, trace_identity_check([random_hermitian(dim, rng) for _ in range(n)]))
        assert worst <= 1e-10

    def test_single_matrix(self, rng):
        assert trace_identity_check([random_hermitian(3, rng)]) <= 1e-12

    def test_mixed_dimensions(self):
        with pytest.raises(DimensionMismatchError):
            trace_identity_check([np.eye(2), np.eye(3)])

    def test_empty(self):
        with pytest.raises(PreconditionError):
            trace_identity_check([])


class TestShiftedDynamics:
    """Test S^U."""

    def test_unitary(self, scenario_factory):
        s = scenario_factory(4, 3, 3)
        assert is_unitary(shifted_dynamics_operator(s.dynamics, 3, 3), tol=1e-10)

    def test_class_operator_trace(self, scenario_factory, rng):
        for seed in range(50):
            s = scenario_factory(seed, 2, 3)
            shifted = shifted_dynamics_operator(s.dynamics, 3, 2)
            h = _random_history(s, rng)
            lhs = np.trace(class_operator(h, s.dynamics))
            rhs = np.trace(history_projector(h).matrix @ shifted)
            assert abs(lhs - rhs) <= 1e-10

    def test_dimension_required_for_empty_dynamics(self):
        with pytest.raises(PreconditionError):
            shifted_dynamics_operator(Dynamics(()), 1)


class TestGleasonOperators:
    """Test the absorbed operators Y and Z."""

    def test_y_form(self):
        worst = 0.0
        for seed in range(1000):
            dim, n = _sizes(seed)
            s = make_scenario(seed % 50, dim, n)
            y = build_Y(s)
            h = _random_history(s, make_rng(seed + 30_000))
            worst = max(worst, abs(peg(h, s).value - peg_via_Y(history_projector(h, s.dynamics), y).value))
        assert worst <= 1e-10

    def test_z_form(self):
        worst = 0.0
        for seed in range(1000):
            dim, n = _sizes(seed)
            s = make_scenario(seed % 50, dim, n)
            z = build_Z(s)
            h = _random_history(s, make_rng(seed + 40_000))
            worst = max(worst, abs(peg(h, s).value - peg_via_Y(history_projector(h), z).value))
        assert worst <= 1e-10

    @pytest.mark.parametrize("seed", range(10))
    def test_theorem_conditions(self, seed):
        dim, n = _sizes(seed)
        s = make_scenario(seed, dim, n)
        for g in (build_Y(s), build_Z(s)):
            assert g.conjugation_residual <= 1e-9
            assert g.trace_residual <= 1e-9

    def test_z_is_y_in_the_moving_frame(self, scenario_factory):
        s = scenario_factory(8, 2, 2)
        u = s.cumulative()[1]
        w = tensor(u, np.eye(2))
        assert np.allclose(build_Z(s).matrix, w @ build_Y(s).matrix @ w.conj().T)

    def test_trivial_dynamics_y_equals_z(self, qubit_scenario):
        assert np.allclose(build_Y(qubit_scenario).matrix, build_Z(qubit_scenario).matrix)

    def test_peg_via_y_dims(self, qubit_scenario):
        y = build_Y(qubit_scenario)
        with pytest.raises(DimensionMismatchError):
            peg_via_Y(HistoryProjector.identity(SubsystemDims((2,))), y)

    def test_operator_dims(self):
        with pytest.raises(DimensionMismatchError):
            GleasonOperator(np.eye(3), SubsystemDims((2, 2)))

    def test_planted_asymmetry_residual(self):
        epsilon = 0.01
        matrix = np.eye(4) / 4 + 1j * epsilon * np.diag([1, 0, 0, -1])
        g = GleasonOperator(matrix, SubsystemDims.uniform(2, 2))
        assert g.conjugation_residual == pytest.approx(2 * epsilon * np.sqrt(2))
        assert g.trace_residual == pytest.approx(0.0)


class TestConditionalPeg:
    """Test p(a|b I)."""

    @pytest.fixture
    def y(self, qubit_scenario):
        return build_Y(qubit_scenario)

    def test_commuting(self, y):
        dims = SubsystemDims.uniform(2, 2)
        a = HistoryProjector(tensor(PLUS, np.eye(2)), dims)
        b = HistoryProjector(tensor(np.eye(2), KET0), dims)
        result = conditional_peg(a, b, y)
        assert result.reliable and result.commuting
        assert result.value == pytest.approx(0.5)

    def test_zero_denominator(self, y):
        dims = SubsystemDims.uniform(2, 2)
        b = HistoryProjector(tensor(np.eye(2), KET1), dims)
        with pytest.raises(ZeroPegError):
            conditional_peg(HistoryProjector.identity(dims), b, y)

    def test_non_commuting_is_unreliable(self, y):
        dims = SubsystemDims.uniform(2, 2)
        a = HistoryProjector(tensor(PLUS, np.eye(2)), dims)
        b = HistoryProjector(tensor(KET0, np.eye(2)), dims)
        result = conditional_peg(a, b, y)
        assert not result.commuting
        assert not result.reliable
        assert result.value == pytest.approx(0.0)

    def test_quotient_below_condition(self):
        s = Scenario(2, (0.0, 1.0), Dynamics.identity(2, 2), np.eye(2) / 2)
        y = build_Y(s)
        dims = SubsystemDims.uniform(2, 2)
        a = HistoryProjector(tensor(PLUS, KET0), dims)
        b = HistoryProjector(tensor(PLUS, np.eye(2)), dims)
        assert peg_via_Y(a, y).value == pytest.approx(0.25)
        assert peg_via_Y(b, y).value == pytest.approx(0.5)
        result = conditional_peg(a, b, y)
        assert result.commuting
        assert result.value == pytest.approx(0.5)

    def test_unit_condition(self, scenario_factory):
        s = scenario_factory(17)
        y = build_Y(s)
        a = HistoryProjector(tensor(random_projector(2, 1, make_rng(4)), np.eye(2)), s.dims)
        result = conditional_peg(a, HistoryProjector.identity(s.dims), y)
        assert result.value == pytest.approx(peg_via_Y(a, y).value, abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_complete_commuting_family_sums_to_one(self, scenario_factory, seed):
        s = scenario_factory(seed)
        y = build_Y(s)
        rng = make_rng(seed + 900)
        b = HistoryProjector(tensor(random_projector(2, 1, rng), np.eye(2)), s.dims)
        family = [HistoryProjector(tensor(np.eye(2), p), s.dims) for p in random_resolution(2, [1, 1], rng)]
        total = sum(conditional_peg(a, b, y).value for a in family)
        assert all(conditional_peg(a, b, y).commuting for a in family)
        assert total == pytest.approx(1.0, abs=1e-10)
