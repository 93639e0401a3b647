import numpy as np
import pytest

from helpers import ACCEPTANCE_LINES, example_sequence


@pytest.fixture
def example_seq():
    return example_sequence()


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
