import numpy as np
import pytest

from maxwell_discovery.virtual_lab import (
    PAPER_FIXED_OMEGA,
    SPEED_OF_LIGHT,
    DipoleSource,
    ExperimentConfig,
    SamplePoint,
    make_experiments,
)

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def experiments():
    return make_experiments(ExperimentConfig(), seed=0)


@pytest.fixture(scope="session")
def fixed_omega_experiments():
    return make_experiments(ExperimentConfig(mode=PAPER_FIXED_OMEGA), seed=0)


@pytest.fixture
def near_source():
    # lambda = 2*pi m; far-field check relaxed so moderate r is allowed
    return DipoleSource(p0=1.0, omega=SPEED_OF_LIGHT, r_min_factor=1.0)


def random_moderate_points(n, seed, kr=(10.0, 100.0), k=1.0):
    rng = np.random.default_rng(seed)
    return [
        SamplePoint(rng.uniform(*kr) / k, rng.uniform(0.2, np.pi - 0.2), rng.uniform(0, 2 * np.pi))
        for _ in range(n)
    ]


def fd_relative_error(analytic, oracle, magnitude):
    """Relative error, measured against the partial-derivative scale when
    the operator vanishes identically (div B)."""
    den = np.linalg.norm(analytic)
    if den <= 1e-12 * np.linalg.norm(magnitude):
        den = np.linalg.norm(magnitude)
    return float(np.linalg.norm(analytic - oracle) / den)
