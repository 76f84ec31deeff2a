"""Forward solver for the dispersionless moving-bottom shallow-water system.

Unknowns are ``r = zeta - b`` and the depth-averaged velocity ``V``; the flux
is ``(h V, r + eps V^2 / 2)`` with ``h = 1 + eps r`` and the momentum source is
``-b_x - (eps/2) b_ttx``.  Two one-step schemes are provided: the conservative
Rusanov finite-volume update and the path-based (non-conservative) FORCE-alpha
update.  The FORCE-alpha machinery is written for any number of components so
the coupled state/adjoint solver can reuse it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bathymetry import slope_accel_field, slope_field
from .errors import BlowUpError, ConfigError, PositivityError, WavespeedError
from .grid import BoundaryKind, Grid, pad

# Three-point Gauss-Legendre rule on [0, 1].
GL_NODES = np.array([0.5 * (1.0 - np.sqrt(0.6)), 0.5, 0.5 * (1.0 + np.sqrt(0.6))])
GL_WEIGHTS = np.array([5.0, 8.0, 5.0]) / 18.0


class SchemeKind(enum.Enum):
    RUSANOV = "rusanov"
    FORCE_ALPHA = "force-alpha"

    @classmethod
    def parse(cls, value: "str | SchemeKind") -> "SchemeKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(f"unknown forward scheme {value!r}") from None


@dataclass(frozen=True)
class ForceAlphaParams:
    """``alpha_f`` scales the local time step of FORCE-alpha.

    ``printed_form`` replaces the identity weight ``(dx/(alpha dt))^2`` in the
    split matrices by ``1/alpha^2``; it exists only for side-by-side runs.
    """

    alpha_f: float = 2.0
    printed_form: bool = False

    def __post_init__(self) -> None:
        if not (np.isfinite(self.alpha_f) and self.alpha_f > 0):
            raise ConfigError(f"alpha_f must be positive, got {self.alpha_f}")

    def identity_weight(self, dt: float, dx: float) -> float:
        if self.printed_form:
            return 1.0 / self.alpha_f**2
        return (dx / (self.alpha_f * dt)) ** 2


@dataclass
class StateTrajectory:
    """``r`` and ``V`` at every time level, each of shape ``(levels, cells)``."""

    r: np.ndarray
    V: np.ndarray

    def zeta(self, b: np.ndarray) -> np.ndarray:
        return self.r + b

    @property
    def num_levels(self) -> int:
        return self.r.shape[0]


# --------------------------------------------------------------------------
# pointwise physics


def physical_flux(r, V, eps: float):
    r = np.asarray(r, dtype=float)
    V = np.asarray(V, dtype=float)
    return (1.0 + eps * r) * V, r + 0.5 * eps * V * V


def jacobian(r, V, eps: float) -> np.ndarray:
    """Flux Jacobian ``[[eps V, 1 + eps r], [1, eps V]]``, shape ``(..., 2, 2)``."""
    r = np.asarray(r, dtype=float)
    V = np.asarray(V, dtype=float)
    r, V = np.broadcast_arrays(r, V)
    A = np.empty(r.shape + (2, 2))
    A[..., 0, 0] = eps * V
    A[..., 0, 1] = 1.0 + eps * r
    A[..., 1, 0] = 1.0
    A[..., 1, 1] = eps * V
    return A


def coupled_jacobian(W, eps: float) -> np.ndarray:
    """Block matrix ``diag(A(U), A(U)^T)`` for ``W = (r, V, p, q)``; components on axis 0."""
    A = jacobian(W[0], W[1], eps)
    AW = np.zeros(A.shape[:-2] + (4, 4))
    AW[..., :2, :2] = A
    AW[..., 2:, 2:] = np.swapaxes(A, -1, -2)
    return AW


def rusanov_wavespeed(r, V, eps: float):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise WavespeedError("negative r in Rusanov wavespeed sqrt(r)")
    c = np.sqrt(r)
    return np.maximum(np.abs(eps * V - c), np.abs(eps * V + c))


def rusanov_flux(r_left, V_left, r_right, V_right, eps: float):
    fl = physical_flux(r_left, V_left, eps)
    fr = physical_flux(r_right, V_right, eps)
    lam = np.maximum(rusanov_wavespeed(r_left, V_left, eps), rusanov_wavespeed(r_right, V_right, eps))
    return (
        0.5 * (fl[0] + fr[0]) - 0.5 * lam * (np.asarray(r_right) - r_left),
        0.5 * (fl[1] + fr[1]) - 0.5 * lam * (np.asarray(V_right) - V_left),
    )


# --------------------------------------------------------------------------
# FORCE-alpha building blocks (any number of components)


def path_average(jac, W_left: np.ndarray, W_right: np.ndarray, omega: int = 1) -> np.ndarray:
    """Gauss-Legendre average of ``jac`` along the segment between two states.

    ``W_left`` and ``W_right`` carry components on axis 0.  The path is
    ``W_left + (omega s - (omega - 1)/2) (W_right - W_left)``, which runs
    left-to-right for ``omega = 1`` and right-to-left for ``omega = -1``.
    """
    jump = W_right - W_left
    total = 0.0
    for node, weight in zip(GL_NODES, GL_WEIGHTS):
        theta = omega * node - 0.5 * (omega - 1)
        total = total + weight * jac(W_left + theta * jump)
    return total


def split_matrices(A_hat: np.ndarray, dt: float, dx: float, params: ForceAlphaParams, omega: int = 1):
    """Return ``(A_minus, A_plus)`` for the given interface matrices.

    The advective half carries the direction factor ``omega``; the
    dissipative half ``(alpha dt / 4 dx)(A^2 + c^2 I)`` does not, so the
    update stays diffusive in both time directions.
    """
    m = A_hat.shape[-1]
    c2 = params.identity_weight(dt, dx)
    # einsum keeps the summation order fixed, so a block-diagonal system gives
    # bit-identical blocks to the standalone one
    A2 = np.einsum("...ij,...jk->...ik", A_hat, A_hat)
    diss = 0.25 * params.alpha_f * dt / dx * (A2 + c2 * np.eye(m))
    half = 0.5 * omega * A_hat
    return half - diss, half + diss


def force_alpha_update(W, jac, source, grid: Grid, bc: BoundaryKind, params: ForceAlphaParams, omega: int = 1):
    """One FORCE-alpha step for ``W`` of shape ``(components, cells)``.

    ``source`` (same shape) is added as ``dt * source``; callers fix its sign.
    """
    dt, dx = grid.dt, grid.dx
    Wp = pad(W, bc)
    left, right = Wp[:, :-1], Wp[:, 1:]  # interfaces i-1/2 for i = 0 .. N
    A_hat = path_average(jac, left, right, omega)  # (N+1, m, m)
    A_minus, A_plus = split_matrices(A_hat, dt, dx, params, omega)
    jump = (right - left).T  # (N+1, m)
    d_minus = np.einsum("kij,kj->ki", A_minus, jump)
    d_plus = np.einsum("kij,kj->ki", A_plus, jump)
    # cell i: D^-_{i+1/2} + D^+_{i-1/2}
    fluct = (d_minus[1:] + d_plus[:-1]).T
    return W - dt / dx * fluct + dt * np.asarray(source)


# --------------------------------------------------------------------------
# sources and single steps


def bottom_source(b: np.ndarray, grid: Grid, bc: BoundaryKind, eps: float) -> np.ndarray:
    """Momentum source ``-b_x - (eps/2) b_ttx`` at every level, shape ``(levels, cells)``."""
    return -slope_field(b, grid.dx, bc) - 0.5 * eps * slope_accel_field(b, grid.dx, grid.dt, bc)


def _source_at(b: np.ndarray, n: int, grid: Grid, bc: BoundaryKind, eps: float) -> np.ndarray:
    last = len(b) - 1
    window = np.stack([b[min(max(m, 0), last)] for m in (n - 1, n, n + 1)])
    return bottom_source(window, grid, bc, eps)[1]


def _rusanov_update(r, V, momentum_source, grid: Grid, bc: BoundaryKind, eps: float):
    rp, Vp = pad(r, bc), pad(V, bc)
    if np.any(rp < 0):
        cell = int(np.argmax(rp < 0)) - 1
        raise WavespeedError(f"negative r = {rp[cell + 1]:.6g} in cell {cell}", cell=cell)
    fr, fV = rusanov_flux(rp[:-1], Vp[:-1], rp[1:], Vp[1:], eps)
    k = grid.dt / grid.dx
    return r - k * (fr[1:] - fr[:-1]), V - k * (fV[1:] - fV[:-1]) + grid.dt * momentum_source


def _force_alpha_update(r, V, momentum_source, grid, bc, eps, params):
    src = np.zeros((2, r.size))
    src[1] = momentum_source
    W = force_alpha_update(np.stack([r, V]), lambda U: jacobian(U[0], U[1], eps), src, grid, bc, params)
    return W[0], W[1]


def rusanov_step(r, V, b, n: int, grid: Grid, bc: BoundaryKind, eps: float):
    """Advance ``(r, V)`` from level ``n`` to ``n + 1`` with Rusanov fluxes."""
    r_new, V_new = _rusanov_update(np.asarray(r, float), np.asarray(V, float), _source_at(b, n, grid, bc, eps), grid, bc, eps)
    _check_finite((r_new, V_new), n + 1)
    return r_new, V_new


def force_alpha_forward_step(r, V, b, n: int, grid: Grid, bc: BoundaryKind, eps: float, params: ForceAlphaParams | None = None):
    params = params or ForceAlphaParams()
    r_new, V_new = _force_alpha_update(
        np.asarray(r, float), np.asarray(V, float), _source_at(b, n, grid, bc, eps), grid, bc, eps, params
    )
    _check_finite((r_new, V_new), n + 1)
    return r_new, V_new


def _check_finite(arrays, level: int) -> None:
    for arr in arrays:
        bad = ~np.isfinite(arr)
        if bad.any():
            cell = int(np.argmax(bad))
            raise BlowUpError(f"non-finite value at level {level}, cell {cell}", level=level, cell=cell)


def _check_depth(r, eps: float, level: int) -> None:
    h = 1.0 + eps * r
    bad = h <= 0
    if bad.any():
        cell = int(np.argmax(bad))
        raise PositivityError(f"total depth {h[cell]:.6g} <= 0 at level {level}, cell {cell}", level=level, cell=cell)


def solve_forward(
    r0,
    V0,
    b: np.ndarray,
    scheme: SchemeKind,
    grid: Grid,
    bc: BoundaryKind,
    eps: float,
    params: ForceAlphaParams | None = None,
) -> StateTrajectory:
    """March the initial state through all ``grid.num_steps`` steps."""
    params = params or ForceAlphaParams()
    b = np.asarray(b, dtype=float)
    if b.shape != grid.shape:
        raise ValueError(f"bathymetry shape {b.shape} does not match grid {grid.shape}")
    r = np.empty(grid.shape)
    V = np.empty(grid.shape)
    r[0] = r0
    V[0] = V0
    _check_finite((r[0], V[0]), 0)
    _check_depth(r[0], eps, 0)
    source = bottom_source(b, grid, bc, eps)
    for n in range(grid.num_steps):
        if scheme is SchemeKind.RUSANOV:
            try:
                r[n + 1], V[n + 1] = _rusanov_update(r[n], V[n], source[n], grid, bc, eps)
            except WavespeedError as exc:
                exc.level = n
                raise
        else:
            r[n + 1], V[n + 1] = _force_alpha_update(r[n], V[n], source[n], grid, bc, eps, params)
        _check_finite((r[n + 1], V[n + 1]), n + 1)
        _check_depth(r[n + 1], eps, n + 1)
    return StateTrajectory(r=r, V=V)
