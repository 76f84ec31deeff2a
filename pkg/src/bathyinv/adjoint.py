"""Backward solvers for the adjoint variables ``(p, q)``.

The adjoint system is ``P_t + A(U)^T P_x = (zeta_bar - zeta, V_bar - V)``
with ``P(T) = 0``, integrated from the last time level down to level 0 on a
frozen forward trajectory.  Two steppers are available: an explicit central
finite-difference step and the coupled FORCE-alpha step, which advances the
four-component vector ``W = (r, V, p, q)`` with the time direction reversed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BlowUpError, ConfigError
from .forward import ForceAlphaParams, StateTrajectory, coupled_jacobian, force_alpha_update
from .grid import BoundaryKind, Grid, central_dx


class AdjointMethod(enum.Enum):
    FD = "fd"
    CSF = "csf"

    @classmethod
    def parse(cls, value: "str | AdjointMethod") -> "AdjointMethod":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(f"unknown adjoint method {value!r}") from None


@dataclass
class AdjointTrajectory:
    p: np.ndarray
    q: np.ndarray


def adjoint_source(r, V, zeta_bar, V_bar, b):
    """Right-hand side ``(zeta_bar - (r + b), V_bar - V)`` of the adjoint system."""
    return np.asarray(zeta_bar) - (np.asarray(r) + b), np.asarray(V_bar) - np.asarray(V)


def fd_adjoint_step(p_next, q_next, r_next, V_next, res_p, res_q, grid: Grid, bc: BoundaryKind, eps: float, level: int | None = None):
    """Explicit step from level ``n+1`` to ``n``.

    ``P^n = P^{n+1} + dt A^T(U^{n+1}) dP/dx - dt R^{n+1}`` where ``dP/dx`` is
    the central difference of ``P^{n+1}`` and ``R = (res_p, res_q)`` is the
    adjoint right-hand side at level ``n+1``.
    """
    dt = grid.dt
    px = central_dx(p_next, grid.dx, bc)
    qx = central_dx(q_next, grid.dx, bc)
    ev = eps * np.asarray(V_next)
    h = 1.0 + eps * np.asarray(r_next)
    p = p_next + dt * (ev * px + qx) - dt * np.asarray(res_p)
    q = q_next + dt * (h * px + ev * qx) - dt * np.asarray(res_q)
    _check_finite(p, q, level)
    return p, q


def csf_backward_step(W_next, r_now, V_now, res_p, res_q, grid: Grid, bc: BoundaryKind, eps: float, params: ForceAlphaParams | None = None, level: int | None = None):
    """Coupled FORCE-alpha step from level ``n+1`` to ``n`` (``omega = -1``).

    ``W_next`` is ``(r, V, p, q)`` at level ``n+1`` with the state rows taken
    from the forward run.  The adjoint source ``(zeta - zeta_bar, V - V_bar)``
    is the negated right-hand side at level ``n+1``.  After the step the state
    rows are replaced by the stored forward state ``(r_now, V_now)``.
    """
    params = params or ForceAlphaParams()
    W_next = np.asarray(W_next, dtype=float)
    source = np.zeros_like(W_next)
    source[2] = -np.asarray(res_p)
    source[3] = -np.asarray(res_q)
    W = force_alpha_update(W_next, lambda w: coupled_jacobian(w, eps), source, grid, bc, params, omega=-1)
    _check_finite(W[2], W[3], level)
    W[0] = r_now
    W[1] = V_now
    return W


def _check_finite(p, q, level):
    for arr in (p, q):
        bad = ~np.isfinite(arr)
        if bad.any():
            cell = int(np.argmax(bad))
            raise BlowUpError(f"non-finite adjoint at level {level}, cell {cell}", level=level, cell=cell)


def solve_adjoint(
    forward: StateTrajectory,
    zeta_bar: np.ndarray,
    V_bar: np.ndarray,
    b: np.ndarray,
    method: AdjointMethod,
    grid: Grid,
    bc: BoundaryKind,
    eps: float,
    params: ForceAlphaParams | None = None,
) -> AdjointTrajectory:
    params = params or ForceAlphaParams()
    res_p, res_q = adjoint_source(forward.r, forward.V, zeta_bar, V_bar, b)
    p = np.zeros(grid.shape)
    q = np.zeros(grid.shape)
    for n in range(grid.num_steps - 1, -1, -1):
        m = n + 1
        if method is AdjointMethod.FD:
            p[n], q[n] = fd_adjoint_step(p[m], q[m], forward.r[m], forward.V[m], res_p[m], res_q[m], grid, bc, eps, level=n)
        else:
            W_next = np.stack([forward.r[m], forward.V[m], p[m], q[m]])
            W = csf_backward_step(W_next, forward.r[n], forward.V[n], res_p[m], res_q[m], grid, bc, eps, params, level=n)
            p[n], q[n] = W[2], W[3]
    return AdjointTrajectory(p=p, q=q)
