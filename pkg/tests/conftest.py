import numpy as np
import pytest

from gtso.fock import TruncationConfig
from gtso.symplectic import validate_params

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def p2111():
    return validate_params(2, 1, 1, 1)


@pytest.fixture
def mild():
    # small enough that n_max = 16 converges on a modest interior
    a = 1.1
    return validate_params(a, 0.2, 0.3, (1 + 0.2 * 0.3) / a)


@pytest.fixture
def cfg16():
    return TruncationConfig(16, 6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
