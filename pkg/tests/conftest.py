import numpy as np
import pytest

from bathyinv.grid import BoundaryKind, Grid, make_grid

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion; printed at the end of the run."""

    def record(name, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip()
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def bench_grid():
    return make_grid(20.0, 100, 0.01, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=list(BoundaryKind), ids=lambda k: k.value)
def bc(request):
    return request.param


def small_grid(num_cells=5, dt=0.01, steps=4, length=None):
    return Grid(length=float(length or num_cells), num_cells=num_cells, dt=dt, num_steps=steps)
