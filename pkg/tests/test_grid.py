import numpy as np
import pytest
from hypothesis import given, strategies as st

from bathyinv.errors import ConfigError
from bathyinv.grid import BoundaryKind, Grid, ghost_value, make_grid, pad

T, P = BoundaryKind.TRANSMISSIVE, BoundaryKind.PERIODIC


def test_ghost_value_examples():
    f = ["a", "b", "c"]
    assert ghost_value(f, 1, T) == "b"
    assert ghost_value(f, 1, P) == "b"
    assert ghost_value(f, -1, T) == "a"
    assert ghost_value(f, 3, T) == "c"
    assert ghost_value(f, 3, P) == "a"
    assert ghost_value(f, -1, P) == "c"


@pytest.mark.parametrize("index", [-2, 4, 10])
def test_ghost_value_out_of_range(index):
    with pytest.raises(IndexError):
        ghost_value([1.0, 2.0, 3.0], index, T)


@given(st.lists(st.floats(allow_nan=False), min_size=3, max_size=12), st.sampled_from(list(BoundaryKind)))
def test_ghost_identity_on_interior(values, bc):
    for i in range(len(values)):
        assert ghost_value(values, i, bc) == values[i]


@given(st.lists(st.floats(allow_nan=False), min_size=3, max_size=12))
def test_periodic_ghost_shift(values):
    n = len(values)
    for i in (-1, 0):
        assert ghost_value(values, i + n, P) == ghost_value(values, i, P)


def test_pad_matches_ghost_value(bc):
    f = np.array([3.0, 1.0, 4.0, 1.0, 5.0])
    p = pad(f, bc)
    assert [ghost_value(f, i, bc) for i in range(-1, 6)] == list(p)


def test_make_grid_benchmark_setup():
    g = make_grid(20, 100, 0.01, 1)
    assert g.dx == pytest.approx(0.2, abs=0)
    assert g.num_steps == 100
    assert g.final_time == pytest.approx(1.0)


def test_make_grid_small():
    g = make_grid(1, 4, 0.5, 1)
    assert g.dx == 0.25
    assert g.num_steps == 2
    np.testing.assert_array_equal(g.x, [0.125, 0.375, 0.625, 0.875])


def test_make_grid_rejects_fractional_steps():
    with pytest.raises(ConfigError):
        make_grid(20, 100, 0.01, 1.003)


@pytest.mark.parametrize("args", [(0, 10, 0.1, 1), (1, 2, 0.1, 1), (1, 10, 0.0, 1), (1, 10, 0.1, -1)])
def test_make_grid_rejects_bad_input(args):
    with pytest.raises(ConfigError):
        make_grid(*args)


@given(st.floats(0.1, 1e3), st.integers(3, 5000))
def test_cell_widths_sum_to_length(length, n):
    g = Grid(length, n, 0.01, 2)
    total = g.dx * n
    assert abs(total - length) <= 2 * np.spacing(length)
    assert np.all(np.diff(g.x) > 0)


def test_level_of():
    g = make_grid(20, 100, 0.01, 1)
    assert g.level_of(0.25) == 25
    assert g.level_of(0.75) == 75
    with pytest.raises(ConfigError):
        g.level_of(1.5)
