import functools

import numpy as np
import pytest

from mixdetect.procedures import calibrate_procedure


@functools.lru_cache(maxsize=None)
def cached_table(name, n, base="gaussian", alpha=0.05, budget=100_000, seed=2024):
    """Calibrations are expensive; share them across the whole session."""
    return calibrate_procedure(name, n, base, alpha, budget, seed)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def table():
    return cached_table


#: one verdict line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
