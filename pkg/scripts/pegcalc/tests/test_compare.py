"""
Tests for the decoherence functional and the classical reduction.

Run with: pytest scripts/pegcalc/tests/test_compare.py -v
"""

import numpy as np
import pytest

from pegcalc.algebra import Dynamics
from pegcalc.compare import (
    HistoryFamily,
    classical_reduction_check,
    decoherence_functional,
    decoherence_matrix,
    is_consistent,
    is_linearly_positive,
)
from pegcalc.constants import CheckStatus
from pegcalc.errors import DimensionMismatchError, IncompleteFamilyError
from pegcalc.hilbert import ket_projector, make_rng, random_density, random_resolution, random_unitary
from pegcalc.pegs import Scenario, peg
from pegcalc.scenario import classical_scenario, random_scenarios

from .conftest import KET0, KET1, MINUS, PLUS

TIMES = (0.0, 1.0)


@pytest.fixture
def interference_family():
    """|+>/|-> at the first time, computational basis at the second."""
    return HistoryFamily.product([[PLUS, MINUS], [KET0, KET1]], TIMES, name="interference")


def decohered_family(s, rng):
    """Eigenprojectors of ρ evolved to the first time, then a random basis."""
    u_first = s.dynamics.unitaries[0]
    _, vectors = np.linalg.eigh(u_first @ s.rho @ u_first.conj().T)
    first = [ket_projector(vectors[:, k]) for k in range(s.base_dim)]
    return HistoryFamily.product([first, random_resolution(s.base_dim, [1, 1], rng)], TIMES, name="decohered")


class TestHistoryFamily:
    """Test family construction."""

    def test_product_labels_and_completeness(self, interference_family):
        assert interference_family.labels == ["0-0", "0-1", "1-0", "1-1"]
        assert interference_family.complete
        assert interference_family.is_resolution()

    def test_partial_product_not_complete(self):
        family = HistoryFamily.product([[PLUS], [KET0, KET1]], TIMES)
        assert not family.complete
        with pytest.raises(IncompleteFamilyError):
            family.require_complete()

    def test_complete_flag_checked(self):
        members = HistoryFamily.product([[KET0], [KET0]], TIMES).members
        with pytest.raises(IncompleteFamilyError):
            HistoryFamily(members, complete=True)

    def test_resolution_per_time_required(self):
        with pytest.raises(DimensionMismatchError):
            HistoryFamily.product([[KET0, KET1]], TIMES)


class TestDecoherenceFunctional:
    """Test d(α, β) = tr(C_α ρ C_β†)."""

    def test_hermitian_with_nonnegative_diagonal(self):
        setup = random_scenarios(1, seed=21)[0]
        d = decoherence_matrix(setup.families["histories"], setup.scenario)
        assert np.allclose(d, d.conj().T, atol=1e-12)
        assert np.all(np.diag(d).real >= -1e-12)
        assert np.allclose(np.diag(d).imag, 0.0, atol=1e-12)

    def test_entries_match_pairwise(self):
        setup = random_scenarios(1, seed=22)[0]
        family = setup.families["histories"]
        d = decoherence_matrix(family, setup.scenario)
        a, b = family.members[0], family.members[-1]
        assert decoherence_functional(a, b, setup.scenario) == pytest.approx(d[0, -1], abs=1e-12)

    def test_total_is_one(self):
        setup = random_scenarios(1, seed=23)[0]
        d = decoherence_matrix(setup.families["histories"], setup.scenario)
        assert d.sum() == pytest.approx(1.0, abs=1e-10)


class TestConsistency:
    """Test weak consistency against linear positivity."""

    def test_interference_family(self, interference_family):
        s = Scenario(2, TIMES, Dynamics.identity(2, 2), KET0)
        d = decoherence_matrix(interference_family, s)
        assert d[0, 2].real == pytest.approx(0.25)
        assert np.allclose(np.diag(d).real, [0.25, 0.25, 0.25, 0.25])
        assert not is_consistent(interference_family, s)
        assert is_linearly_positive(interference_family, s)
        values = [peg(h, s).value for h in interference_family.members]
        assert np.allclose(values, [0.5, 0.0, 0.5, 0.0])

    def test_single_time_family_consistent(self):
        setup = random_scenarios(1, seed=24)[0]
        assert is_consistent(setup.families["alpha"], setup.scenario)
        assert is_consistent(setup.families["beta"], setup.scenario)

    def test_negative_real_peg_not_linearly_positive(self, interference_family):
        s = Scenario(2, TIMES, Dynamics.identity(2, 2), ket_projector([1.0, 2.0]))
        values = [peg(h, s).value for h in interference_family.members]
        assert np.allclose(values, [0.3, 0.6, -0.1, 0.2], atol=1e-12)
        assert not is_linearly_positive(interference_family, s)
        assert not is_consistent(interference_family, s)

    def test_decohered_two_time_family_consistent(self):
        rng = make_rng(31)
        dynamics = Dynamics((random_unitary(2, rng), random_unitary(2, rng)))
        s = Scenario(2, TIMES, dynamics, random_density(2, rng))
        family = decohered_family(s, rng)
        assert is_consistent(family, s)
        assert is_linearly_positive(family, s)
        assert classical_reduction_check(family, s).status is CheckStatus.PASS

    @pytest.mark.parametrize("seed", range(40))
    def test_consistency_implies_linear_positivity(self, seed):
        rng = make_rng(seed)
        dynamics = Dynamics((random_unitary(2, rng), random_unitary(2, rng)))
        s = Scenario(2, TIMES, dynamics, random_density(2, rng))
        decohered = decohered_family(s, rng)
        generic = HistoryFamily.product([random_resolution(2, [1, 1], rng) for _ in TIMES], TIMES)
        assert is_consistent(decohered, s)
        for family in (decohered, generic):
            assert is_linearly_positive(family, s) or not is_consistent(family, s)


class TestClassicalReduction:
    """Test that consistent families reproduce decoherence-functional probabilities."""

    def test_classical_scenario(self):
        setup = classical_scenario(dim=2, n=2, seed=9)
        result = classical_reduction_check(setup.families["histories"], setup.scenario)
        assert result.status is CheckStatus.PASS
        assert result.details["consistent"]
        assert result.details["linearly_positive"]

    def test_random_single_time_family(self):
        setup = random_scenarios(1, seed=25)[0]
        result = classical_reduction_check(setup.families["alpha"], setup.scenario)
        assert result.status is CheckStatus.PASS

    def test_inconsistent_family_reported(self, interference_family):
        s = Scenario(2, TIMES, Dynamics.identity(2, 2), KET0)
        result = classical_reduction_check(interference_family, s)
        assert result.status is CheckStatus.DIAGNOSTIC
        assert not result.details["consistent"]
        assert result.residuals["diagonal"] == pytest.approx(0.25)
        assert result.residuals["sum"] == pytest.approx(0.0, abs=1e-12)

    def test_incomplete_family_rejected(self):
        family = HistoryFamily.product([[PLUS], [KET0, KET1]], TIMES)
        s = Scenario(2, TIMES, Dynamics.identity(2, 2), KET0)
        with pytest.raises(IncompleteFamilyError):
            classical_reduction_check(family, s)
