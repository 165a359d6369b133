"""
Shared fixtures for the pegcalc tests.

Run with: pytest scripts/pegcalc/tests -v
"""

from pathlib import Path

import numpy as np
import pytest

from pegcalc.algebra import Dynamics
from pegcalc.hilbert import basis_projector, ket_projector, make_rng, random_density, random_unitary
from pegcalc.pegs import Scenario

FIXTURES = Path(__file__).parent / "fixtures"

KET0 = basis_projector(2, 0)
KET1 = basis_projector(2, 1)
PLUS = ket_projector([1, 1])
MINUS = ket_projector([1, -1])


def make_scenario(seed: int, dim: int = 2, n: int = 2) -> Scenario:
    """Random state and dynamics on the grid 0, 1, ..., n-1."""
    rng = make_rng(seed)
    dynamics = Dynamics(tuple(random_unitary(dim, rng) for _ in range(n - 1)))
    return Scenario(dim, tuple(float(t) for t in range(n)), dynamics, random_density(dim, rng), seed=seed)


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240501)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def qubit_scenario() -> Scenario:
    """|0><0| initial state, trivial dynamics, two times."""
    return Scenario(2, (0.0, 1.0), Dynamics.identity(2, 2), KET0)


@pytest.fixture
def scenario_factory():
    return make_scenario
