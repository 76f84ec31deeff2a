"""Run configuration: a flat ``key = value`` document with validated fields.

Lines starting with ``#`` are comments.  Keys may use ``-`` or ``_``.
Sequences are comma separated.  Every key omitted takes its default, which
reproduces the benchmark setup (L=20, 100 cells, dt=0.01, T=1, eps=0.001,
alpha_f=2, V0=1.5, zeta0=1, lambda_b=0.71, 17 iterations, b0=0.01).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields

from .bathymetry import ProfileKind
from .errors import ConfigError
from .forward import ForceAlphaParams
from .grid import BoundaryKind, Grid, make_grid
from .optimizer import DescentConfig, Problem, SchemeCombo


@dataclass(frozen=True)
class RunConfig:
    profile: ProfileKind = ProfileKind.SMOOTH
    scheme: SchemeCombo = SchemeCombo.FORCE_ALPHA_CSF
    length: float = 20.0
    cells: int = 100
    dt: float = 0.01
    tmax: float = 1.0
    epsilon: float = 0.001
    alpha_f: float = 2.0
    v0: float = 1.5
    zeta0: float = 1.0
    lambda_b: float = 0.71
    iters: int = 17
    tol: float = 1e-8
    b_init: float = 0.01
    bc: BoundaryKind | None = None  # None: follow the profile
    out: str = "out"
    snapshot_iterations: tuple[int, ...] = (0, 1, 2, 4, 8)
    snapshot_times: tuple[float, ...] = (0.25, 0.5, 0.75)
    pin_endpoints: bool = False
    printed_aplus_form: bool = False
    constant_zeta_bar: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "snapshot_iterations", tuple(sorted(set(int(k) for k in self.snapshot_iterations))))
        object.__setattr__(self, "snapshot_times", tuple(sorted(set(float(t) for t in self.snapshot_times))))
        validate(self)

    @property
    def boundary(self) -> BoundaryKind:
        return self.bc if self.bc is not None else self.profile.default_boundary

    def grid(self) -> Grid:
        return make_grid(self.length, self.cells, self.dt, self.tmax)

    def force_alpha(self) -> ForceAlphaParams:
        return ForceAlphaParams(alpha_f=self.alpha_f, printed_form=self.printed_aplus_form)

    def problem(self) -> Problem:
        return Problem(self.grid(), self.boundary, self.epsilon, self.scheme, self.force_alpha())

    def descent(self) -> DescentConfig:
        return DescentConfig(self.lambda_b, self.iters, self.tol, self.b_init, self.pin_endpoints)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def _finite(name, value):
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value}")


def _range(name, value, ok, text):
    _finite(name, value)
    if not ok(value):
        raise ConfigError(f"{name} = {value} out of range (expected {text})")


def validate(cfg: RunConfig) -> None:
    _range("length", cfg.length, lambda v: v > 0, "> 0")
    _range("cells", cfg.cells, lambda v: v >= 3, ">= 3")
    _range("dt", cfg.dt, lambda v: v > 0, "> 0")
    _range("tmax", cfg.tmax, lambda v: v > 0, "> 0")
    _range("epsilon", cfg.epsilon, lambda v: v >= 0, ">= 0")
    _range("alpha_f", cfg.alpha_f, lambda v: v > 0, "> 0")
    _finite("v0", cfg.v0)
    _finite("zeta0", cfg.zeta0)
    _range("lambda_b", cfg.lambda_b, lambda v: v >= 0, ">= 0")
    _range("iters", cfg.iters, lambda v: v >= 1, ">= 1")
    _range("tol", cfg.tol, lambda v: v >= 0, ">= 0")
    _finite("b_init", cfg.b_init)
    if not cfg.out:
        raise ConfigError("out must be a nonempty path")
    grid = cfg.grid()
    for k in cfg.snapshot_iterations:
        if k < 0:
            raise ConfigError(f"snapshot iteration {k} out of range (expected >= 0)")
    for t in cfg.snapshot_times:
        _finite("snapshot time", t)
        grid.level_of(t)


# --------------------------------------------------------------------------
# text form

_BOOL_TRUE = {"true", "yes", "on", "1"}
_BOOL_FALSE = {"false", "no", "off", "0"}


def _parse_bool(text):
    low = text.strip().lower()
    if low in _BOOL_TRUE:
        return True
    if low in _BOOL_FALSE:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _parse_bc(text):
    return None if text.strip().lower() == "auto" else BoundaryKind.parse(text)


def _tuple_of(conv):
    def parse(text):
        parts = [p for p in (s.strip() for s in text.split(",")) if p]
        return tuple(sorted(set(conv(p) for p in parts)))

    return parse


_PARSERS = {
    "profile": ProfileKind.parse,
    "scheme": SchemeCombo.parse,
    "length": float,
    "cells": _parse_int,
    "dt": float,
    "tmax": float,
    "epsilon": float,
    "alpha_f": float,
    "v0": float,
    "zeta0": float,
    "lambda_b": float,
    "iters": _parse_int,
    "tol": float,
    "b_init": float,
    "bc": _parse_bc,
    "out": str.strip,
    "snapshot_iterations": _tuple_of(_parse_int),
    "snapshot_times": _tuple_of(float),
    "pin_endpoints": _parse_bool,
    "printed_aplus_form": _parse_bool,
    "constant_zeta_bar": _parse_bool,
}


def normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def coerce(key: str, raw: str):
    """Convert the text of one field; raises ConfigError naming the key."""
    name = normalize_key(key)
    if name not in _PARSERS:
        raise ConfigError(f"unknown config key {key.strip()!r}")
    try:
        return name, _PARSERS[name](raw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {name}: {exc}") from None


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    changes = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = stripped.split("=", 1)
        name, value = coerce(key, raw)
        changes[name] = value
    return dataclasses.replace(base or RunConfig(), **changes)


def _format(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    if hasattr(value, "value"):
        return value.value
    return str(value)


def emit_config(cfg: RunConfig) -> str:
    return "".join(f"{f.name} = {_format(getattr(cfg, f.name))}\n" for f in fields(cfg))
