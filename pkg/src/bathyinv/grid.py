"""Uniform space-time grid and one-cell ghost closures."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# Relative slack allowed when checking that T is a whole number of steps.
_STEP_COUNT_RTOL = 1e-9


class BoundaryKind(enum.Enum):
    TRANSMISSIVE = "transmissive"
    PERIODIC = "periodic"

    @classmethod
    def parse(cls, value: "str | BoundaryKind") -> "BoundaryKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ConfigError(f"unknown boundary kind {value!r} (expected one of {choices})") from None


@dataclass(frozen=True)
class Grid:
    """Cell-centred grid on ``[0, length]`` with ``num_steps`` uniform time steps.

    Cell ``i`` is centred at ``(i + 1/2) * dx``.  Time level ``n`` sits at
    ``n * dt`` for ``n = 0 .. num_steps``.
    """

    length: float
    num_cells: int
    dt: float
    num_steps: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.length) and self.length > 0):
            raise ConfigError(f"domain length must be positive, got {self.length}")
        if self.num_cells < 3:
            raise ConfigError(f"need at least 3 cells, got {self.num_cells}")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.num_steps < 0:
            raise ConfigError(f"num_steps must be nonnegative, got {self.num_steps}")

    @property
    def dx(self) -> float:
        return self.length / self.num_cells

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.num_cells) + 0.5) * self.dx

    @property
    def final_time(self) -> float:
        return self.num_steps * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.num_steps + 1) * self.dt

    @property
    def shape(self) -> tuple[int, int]:
        """Shape of a space-time field: ``(levels, cells)``."""
        return (self.num_steps + 1, self.num_cells)

    def level_of(self, t: float) -> int:
        """Nearest time level to ``t``; must lie within ``dt/2`` of the grid."""
        n = int(round(t / self.dt))
        if abs(n * self.dt - t) > 0.5 * self.dt or not 0 <= n <= self.num_steps:
            raise ConfigError(f"time {t} is not on the time grid [0, {self.final_time}]")
        return n


def make_grid(length: float, num_cells: int, dt: float, final_time: float) -> Grid:
    if not (np.isfinite(final_time) and final_time > 0):
        raise ConfigError(f"final time must be positive, got {final_time}")
    if not (np.isfinite(dt) and dt > 0):
        raise ConfigError(f"dt must be positive, got {dt}")
    ratio = final_time / dt
    steps = int(round(ratio))
    if abs(ratio - steps) > _STEP_COUNT_RTOL * max(1.0, steps):
        raise ConfigError(f"final time {final_time} is not a whole number of steps of {dt}")
    return Grid(length=float(length), num_cells=int(num_cells), dt=float(dt), num_steps=steps)


def ghost_value(field, index: int, bc: BoundaryKind) -> float:
    """Value of ``field`` at ``index`` in ``-1 .. N``, with ghosts filled by ``bc``."""
    n = len(field)
    if not -1 <= index <= n:
        raise IndexError(f"cell index {index} outside ghost range [-1, {n}]")
    if 0 <= index < n:
        return field[index]
    if bc is BoundaryKind.PERIODIC:
        return field[index % n]
    return field[0] if index < 0 else field[n - 1]


def pad(field: np.ndarray, bc: BoundaryKind) -> np.ndarray:
    """Append one ghost cell on each side of the last axis."""
    field = np.asarray(field)
    if bc is BoundaryKind.PERIODIC:
        left, right = field[..., -1:], field[..., :1]
    else:
        left, right = field[..., :1], field[..., -1:]
    return np.concatenate([left, field, right], axis=-1)


def central_dx(field: np.ndarray, dx: float, bc: BoundaryKind) -> np.ndarray:
    """Central difference ``(f[i+1] - f[i-1]) / (2 dx)`` along the last axis."""
    p = pad(field, bc)
    return (p[..., 2:] - p[..., :-2]) / (2.0 * dx)


def second_dt(field: np.ndarray, dt: float) -> np.ndarray:
    """Second central difference along axis 0 with clamped end levels.

    Level ``-1`` is taken equal to level ``0`` and level ``N+1`` equal to
    level ``N``; a field constant in time therefore maps to exactly zero.
    """
    field = np.asarray(field)
    p = np.concatenate([field[:1], field, field[-1:]], axis=0)
    return (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (dt * dt)
