import sys

import numpy as np
import pytest

from qha.phase_space import PhaseGrid


@pytest.fixture
def grid():
    return PhaseGrid(1, 64, 16.0)


@pytest.fixture
def small_grid():
    return PhaseGrid(1, 8, 6.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
