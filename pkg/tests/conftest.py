import numpy as np
import pytest

from paracalc.dyadic import default_partition, make_grid
from paracalc.paraproduct import DomainFunction

ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid10():
    return make_grid(10)


@pytest.fixture(scope="session")
def grid12():
    return make_grid(12)


@pytest.fixture(scope="session")
def part10(grid10):
    return default_partition(grid10)


@pytest.fixture(scope="session")
def part12(grid12):
    return default_partition(grid12)


def domain(grid, func):
    return DomainFunction.from_callable(grid, func)


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)
