import numpy as np
import pytest

import oracles
from bathyinv.adjoint import AdjointMethod, adjoint_source, csf_backward_step, fd_adjoint_step, solve_adjoint
from bathyinv.bathymetry import ProfileKind, constant_field
from bathyinv.errors import BlowUpError
from bathyinv.forward import ForceAlphaParams, SchemeKind, StateTrajectory, solve_forward
from bathyinv.grid import BoundaryKind, Grid
from bathyinv.optimizer import synthesize_targets
from conftest import small_grid

EPS = 0.001


def test_adjoint_source_examples():
    assert adjoint_source(0.7, 1.2, 0.75, 1.2, 0.05) == (0.0, 0.0)
    rp, rq = adjoint_source(0.9, 1.5, 1.0, 1.5, 0.05)
    assert rp == pytest.approx(0.05, abs=1e-15) and rq == 0.0
    _, rq = adjoint_source(0.9, 1.5 + 0.125, 1.0, 1.5, 0.05)
    assert rq == -0.125


def test_fd_step_examples(bc):
    g = small_grid(6)
    zero = np.zeros(6)
    r, V = np.full(6, 0.9), np.full(6, 1.5)
    p, q = fd_adjoint_step(zero, zero, r, V, zero, zero, g, bc, EPS)
    assert np.all(p == 0) and np.all(q == 0)
    # the adjoint integrates (zeta - zeta_bar, V - V_bar) = -R backwards
    p, q = fd_adjoint_step(zero, zero, r, V, np.full(6, 0.25), np.full(6, -0.5), g, bc, EPS)
    np.testing.assert_allclose(p, -g.dt * 0.25, rtol=1e-15)
    np.testing.assert_allclose(q, g.dt * 0.5, rtol=1e-15)
    p, q = fd_adjoint_step(np.full(6, 0.3), np.full(6, -0.2), r, V, zero, zero, g, bc, EPS)
    assert np.all(p == 0.3) and np.all(q == -0.2)


def test_fd_step_vs_oracle(rng, bc):
    g = small_grid(5)
    periodic = bc is BoundaryKind.PERIODIC
    for _ in range(10):
        p, q, zb, vb, b = rng.normal(size=(5, 5))
        r, V = rng.uniform(0.5, 1.5, 5), rng.uniform(-2, 2, 5)
        rp, rq = adjoint_source(r, V, zb, vb, b)
        got = fd_adjoint_step(p, q, r, V, rp, rq, g, bc, 0.03)
        want = oracles.fd_adjoint(*map(list, (p, q, r, V, b, zb, vb)), g.dx, g.dt, 0.03, periodic)
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-13)


def test_csf_step_examples(bc):
    g = small_grid(6)
    zero = np.zeros(6)
    r, V = np.full(6, 0.9), np.full(6, 1.5)
    W = np.stack([r, V, zero, zero])
    out = csf_backward_step(W, r - 0.1, V + 0.1, zero, zero, g, bc, EPS)
    assert np.all(out[2:] == 0)
    np.testing.assert_array_equal(out[0], r - 0.1)
    np.testing.assert_array_equal(out[1], V + 0.1)
    # uniform W: no jumps, the adjoint rows gain dt * (zeta - zeta_bar, V - V_bar)
    out = csf_backward_step(W, r, V, np.full(6, 0.25), np.full(6, -0.5), g, bc, EPS)
    np.testing.assert_allclose(out[2], -g.dt * 0.25, rtol=1e-15)
    np.testing.assert_allclose(out[3], g.dt * 0.5, rtol=1e-15)


def test_csf_step_vs_oracle(rng, bc):
    g = small_grid(5)
    periodic = bc is BoundaryKind.PERIODIC
    for _ in range(10):
        p, q, zb, vb, b = rng.normal(size=(5, 5))
        r1, V1 = rng.uniform(0.5, 1.5, 5), rng.uniform(-2, 2, 5)
        r0, V0 = rng.uniform(0.5, 1.5, 5), rng.uniform(-2, 2, 5)
        rp, rq = adjoint_source(r1, V1, zb, vb, b)
        got = csf_backward_step(np.stack([r1, V1, p, q]), r0, V0, rp, rq, g, bc, 0.03, ForceAlphaParams(2.0))
        want = oracles.csf_backward(*map(list, (r1, V1, p, q, b, zb, vb, r0, V0)), g.dx, g.dt, 0.03, 2.0, periodic)
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-13)


def test_csf_blow_up():
    g = small_grid(5)
    W = np.ones((4, 5))
    W[3, 2] = np.nan
    with pytest.raises(BlowUpError):
        csf_backward_step(W, np.ones(5), np.ones(5), np.zeros(5), np.zeros(5), g, BoundaryKind.TRANSMISSIVE, EPS, level=3)


def _smooth_case(grid, bc=BoundaryKind.TRANSMISSIVE):
    tg = synthesize_targets(ProfileKind.SMOOTH, grid, bc, EPS, SchemeKind.FORCE_ALPHA)
    b = constant_field(0.01, grid)
    fwd = solve_forward(tg.r0, tg.V0, b, SchemeKind.FORCE_ALPHA, grid, bc, EPS)
    return tg, b, fwd


@pytest.mark.parametrize("method", list(AdjointMethod))
def test_terminal_and_zero_residual(method, bc):
    g = Grid(20.0, 40, 0.01, 30)
    tg, b, fwd = _smooth_case(g, bc)
    adj = solve_adjoint(fwd, tg.zeta_bar, tg.V_bar, b, method, g, bc, EPS)
    assert np.all(adj.p[-1] == 0) and np.all(adj.q[-1] == 0)
    assert np.any(adj.q[0] != 0)
    exact = solve_adjoint(fwd, fwd.r + b, fwd.V, b, method, g, bc, EPS)
    assert np.all(exact.p == 0) and np.all(exact.q == 0)


@pytest.mark.parametrize("method", list(AdjointMethod))
def test_linear_in_residual(method):
    g = Grid(20.0, 40, 0.01, 30)
    tg, b, fwd = _smooth_case(g)
    zeta = fwd.r + b
    one = solve_adjoint(fwd, tg.zeta_bar, tg.V_bar, b, method, g, BoundaryKind.TRANSMISSIVE, EPS)
    two = solve_adjoint(fwd, zeta + 2 * (tg.zeta_bar - zeta), fwd.V + 2 * (tg.V_bar - fwd.V), b, method, g, BoundaryKind.TRANSMISSIVE, EPS)
    scale = np.max(np.abs(one.q))
    np.testing.assert_allclose(two.p, 2 * one.p, atol=1e-12 * scale)
    np.testing.assert_allclose(two.q, 2 * one.q, atol=1e-12 * scale)


def test_single_step_fd_solve():
    g = Grid(20.0, 10, 0.01, 1)
    fwd = StateTrajectory(r=np.full((2, 10), 0.9), V=np.full((2, 10), 1.5))
    b = constant_field(0.1, g)
    zb = np.full((2, 10), 0.9)  # zeta - zeta_bar = 0.1
    adj = solve_adjoint(fwd, zb, fwd.V, b, AdjointMethod.FD, g, BoundaryKind.TRANSMISSIVE, EPS)
    np.testing.assert_allclose(adj.p[0], g.dt * 0.1, rtol=1e-12)
    assert np.all(adj.q[0] == 0)


def test_csf_keeps_forward_state_frozen(monkeypatch):
    import bathyinv.adjoint as adjoint_mod

    g = Grid(20.0, 30, 0.01, 12)
    tg, b, fwd = _smooth_case(g)
    seen = []
    real = adjoint_mod.csf_backward_step

    def spy(W_next, r_now, V_now, *args, **kwargs):
        seen.append((W_next[:2].copy(), r_now.copy(), V_now.copy()))
        out = real(W_next, r_now, V_now, *args, **kwargs)
        seen[-1] += (out[:2].copy(),)
        return out

    monkeypatch.setattr(adjoint_mod, "csf_backward_step", spy)
    solve_adjoint(fwd, tg.zeta_bar, tg.V_bar, b, AdjointMethod.CSF, g, BoundaryKind.TRANSMISSIVE, EPS)
    assert len(seen) == g.num_steps
    for k, (state_in, r_now, V_now, state_out) in enumerate(seen):
        n = g.num_steps - 1 - k
        np.testing.assert_array_equal(state_in, np.stack([fwd.r[n + 1], fwd.V[n + 1]]))
        np.testing.assert_array_equal(state_out, np.stack([fwd.r[n], fwd.V[n]]))


def _fd_csf_distance(num_cells, steps, dt):
    g = Grid(20.0, num_cells, dt, steps)
    tg, b, fwd = _smooth_case(g)
    a = solve_adjoint(fwd, tg.zeta_bar, tg.V_bar, b, AdjointMethod.FD, g, BoundaryKind.TRANSMISSIVE, EPS)
    c = solve_adjoint(fwd, tg.zeta_bar, tg.V_bar, b, AdjointMethod.CSF, g, BoundaryKind.TRANSMISSIVE, EPS)
    return np.sqrt(np.sum((a.p - c.p) ** 2 + (a.q - c.q) ** 2) * g.dx * g.dt)


def test_fd_and_csf_converge_together():
    coarse = _fd_csf_distance(50, 50, 0.01)
    fine = _fd_csf_distance(100, 100, 0.005)
    finer = _fd_csf_distance(200, 200, 0.0025)
    assert coarse / fine >= 1.5
    assert fine / finer >= 1.5
