"""Benchmark bottom profiles and the discrete bottom derivatives.

A bathymetry field is a plain ``(levels, cells)`` float array: row ``n`` is
the bottom at time ``n*dt`` sampled at the cell centres.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import ConfigError
from .grid import BoundaryKind, Grid, central_dx, second_dt


class ProfileKind(enum.Enum):
    SMOOTH = "smooth"
    DISCONTINUOUS = "discontinuous"
    LARGE_GRADIENT = "large-gradient"

    @classmethod
    def parse(cls, value: "str | ProfileKind") -> "ProfileKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ConfigError(f"unknown profile {value!r} (expected one of {choices})") from None

    @property
    def default_boundary(self) -> BoundaryKind:
        # The travelling sin^4 pulse train is run on a periodic channel.
        if self is ProfileKind.LARGE_GRADIENT:
            return BoundaryKind.PERIODIC
        return BoundaryKind.TRANSMISSIVE


def eval_profile(kind: ProfileKind, t, x):
    """Closed-form bottom elevation; broadcasts over array ``t`` and ``x``."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if kind is ProfileKind.SMOOTH:
        out = 0.1 * (1.0 + t * np.exp(-((x - 10.0 - 2.5 * t) ** 2)))
    elif kind is ProfileKind.DISCONTINUOUS:
        t, x = np.broadcast_arrays(t, x)
        first = (x > 5.0) & (x < 7.0)
        second = ~first & (x > 7.0) & (x < 10.0 + 4.0 * t)
        out = np.where(first, 0.25, np.where(second, 0.3 * t, 0.1))
    elif kind is ProfileKind.LARGE_GRADIENT:
        out = 0.15 * t * (1.0 + np.sin(np.pi * (x - 10.0 - 4.5 * t) / 5.0) ** 4)
    else:  # pragma: no cover
        raise ValueError(kind)
    return out[()] if out.ndim == 0 else out


def sample_field(kind: ProfileKind, grid: Grid) -> np.ndarray:
    return eval_profile(kind, grid.times[:, None], grid.x[None, :]) + np.zeros(grid.shape)


def constant_field(value: float, grid: Grid) -> np.ndarray:
    return np.full(grid.shape, float(value))


def slope_field(b: np.ndarray, dx: float, bc: BoundaryKind) -> np.ndarray:
    """``b_x`` at every level and cell (central difference)."""
    return central_dx(b, dx, bc)


def slope_accel_field(b: np.ndarray, dx: float, dt: float, bc: BoundaryKind) -> np.ndarray:
    """``b_ttx``: second time difference of the central slope, clamped at the ends."""
    return second_dt(slope_field(b, dx, bc), dt)


def b_x(b: np.ndarray, n: int, i: int, dx: float, bc: BoundaryKind) -> float:
    return float(slope_field(b[n], dx, bc)[i])


def b_ttx(b: np.ndarray, n: int, i: int, dx: float, dt: float, bc: BoundaryKind) -> float:
    last = len(b) - 1
    rows = [b[min(max(m, 0), last)] for m in (n - 1, n, n + 1)]
    sx = [slope_field(row, dx, bc)[i] for row in rows]
    return float((sx[2] - 2.0 * sx[1] + sx[0]) / (dt * dt))
