import numpy as np
import pytest

from bingham_filter.bingham import BinghamParams

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_params(rng, z_low=-100.0, z_high=-0.1):
    return BinghamParams.from_mode(rng.uniform(0, 2 * np.pi), rng.uniform(z_low, z_high))


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
