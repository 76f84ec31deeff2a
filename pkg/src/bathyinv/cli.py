"""Command line front end: ``generate``, ``forward``, ``reconstruct``, ``compare``.

Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

import numpy as np

from . import report
from .adjoint import solve_adjoint
from .bathymetry import constant_field, sample_field
from .config import RunConfig, coerce, emit_config, parse_config
from .errors import BathyInvError, ConfigError, OutputError
from .forward import solve_forward
from .optimizer import descent_run, synthesize_targets

log = logging.getLogger("bathyinv")

# flag -> config key; value flags are parsed by the config module
_VALUE_FLAGS = {
    "--profile": "profile",
    "--scheme": "scheme",
    "--length": "length",
    "--cells": "cells",
    "--dt": "dt",
    "--tmax": "tmax",
    "--epsilon": "epsilon",
    "--alpha-f": "alpha_f",
    "--v0": "v0",
    "--zeta0": "zeta0",
    "--lambda-b": "lambda_b",
    "--iters": "iters",
    "--tol": "tol",
    "--b-init": "b_init",
    "--bc": "bc",
    "--out": "out",
    "--snapshot-iterations": "snapshot_iterations",
    "--snapshot-times": "snapshot_times",
}
_SWITCH_FLAGS = {
    "--pin-endpoints": "pin_endpoints",
    "--printed-aplus-form": "printed_aplus_form",
    "--constant-zeta-bar": "constant_zeta_bar",
}


def make_targets(cfg: RunConfig):
    return synthesize_targets(
        cfg.profile,
        cfg.grid(),
        cfg.boundary,
        cfg.epsilon,
        cfg.scheme.forward,
        v0=cfg.v0,
        zeta0=cfg.zeta0,
        params=cfg.force_alpha(),
        constant_zeta_bar=cfg.constant_zeta_bar,
    )


def _write_all(out: Path, files: dict) -> list[Path]:
    report.ensure_dir(out)
    return [report.write_atomic(out / name, text) for name, text in files.items()]


def run_generate(cfg: RunConfig) -> list[Path]:
    """Synthesize the observations and write one table per snapshot time."""
    grid = cfg.grid()
    tg = make_targets(cfg)
    files = {"config.txt": emit_config(cfg)}
    for t in cfg.snapshot_times + (grid.final_time,):
        n = grid.level_of(t)
        files[f"targets_{report.time_tag(t)}.csv"] = report.columns_text(
            ("x", "zeta_bar", "V_bar", "b_true"), (grid.x, tg.zeta_bar[n], tg.V_bar[n], tg.b_bar[n])
        )
    return _write_all(Path(cfg.out), files)


def run_forward(cfg: RunConfig, bottom: str = "true", with_adjoint: bool = False) -> list[Path]:
    """One forward solve on the true or the initial-guess bottom.

    With ``with_adjoint`` the adjoint is also solved against synthetic
    targets and dumped at the same snapshot times.
    """
    grid = cfg.grid()
    problem = cfg.problem()
    b = sample_field(cfg.profile, grid) if bottom == "true" else constant_field(cfg.b_init, grid)
    tg = make_targets(cfg)
    fwd = solve_forward(tg.r0, tg.V0, b, problem.combo.forward, grid, problem.bc, cfg.epsilon, problem.params)
    files = {"config.txt": emit_config(cfg)}
    adj = None
    if with_adjoint:
        adj = solve_adjoint(fwd, tg.zeta_bar, tg.V_bar, b, problem.combo.adjoint, grid, problem.bc, cfg.epsilon, problem.params)
    for t in cfg.snapshot_times + (grid.final_time,):
        n = grid.level_of(t)
        tag = report.time_tag(t)
        files[f"forward_{tag}.csv"] = report.columns_text(
            ("x", "r", "V", "zeta"), (grid.x, fwd.r[n], fwd.V[n], fwd.r[n] + b[n])
        )
        if adj is not None:
            files[f"adjoint_{tag}.csv"] = report.columns_text(("x", "p", "q"), (grid.x, adj.p[n], adj.q[n]))
    return _write_all(Path(cfg.out), files)


def run_reconstruct(cfg: RunConfig, figures: bool = False) -> list[Path]:
    """Synthesize data, run the descent loop and write its tables.

    Nothing is written until the whole computation has finished.
    """
    grid = cfg.grid()
    tg = make_targets(cfg)
    _, history = descent_run(cfg.descent(), tg, cfg.problem(), snapshot_iterations=cfg.snapshot_iterations)
    iterations = sorted(k for k in cfg.snapshot_iterations if k in history.snapshots)
    levels = [grid.level_of(t) for t in cfg.snapshot_times]

    files = {"config.txt": emit_config(cfg), "convergence.csv": report.convergence_text(history)}
    files["convergence_final_level.csv"] = report.final_level_text(history)
    for k in iterations:
        for t, n in zip(cfg.snapshot_times, levels):
            files[report.snapshot_name(k, t)] = report.snapshot_text(grid.x, history.snapshots[k][n], tg.b_bar[n])
    title = f"{cfg.profile.value}, {cfg.scheme.value}"
    files["plot_convergence.gp"] = report.convergence_script(title)
    files["plot_snapshots.gp"] = report.snapshots_script(iterations, cfg.snapshot_times)
    written = _write_all(Path(cfg.out), files)

    if figures:
        from . import figures as fig

        out = Path(cfg.out)
        its = [r.iteration for r in history.records]
        written.append(fig.plot_convergence(out / "convergence.png", its, history.sup_norms, [cfg.scheme.value], title))
        snaps = {k: history.snapshots[k] for k in iterations}
        written.append(fig.plot_snapshots(out / "snapshots.png", grid.x, snaps, tg.b_bar, cfg.snapshot_times, levels, title))
    return written


def run_compare(directories, out=None, figures: bool = False):
    """Per-iteration sup-norm ratios of several runs against the first one."""
    cmp = report.compare_runs([Path(d) for d in directories])
    if out is not None:
        files = {"compare.csv": cmp.table_text(), "plot_compare.gp": report.compare_script(cmp.labels)}
        _write_all(Path(out), files)
        if figures:
            from . import figures as fig

            fig.plot_convergence(Path(out) / "compare.png", cmp.iterations, cmp.sup_norms, cmp.labels)
    return cmp


# --------------------------------------------------------------------------
# argument parsing


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help="key = value configuration file")
    for flag, key in _VALUE_FLAGS.items():
        p.add_argument(flag, dest=key, metavar=key.upper(), default=None)
    for flag, key in _SWITCH_FLAGS.items():
        p.add_argument(flag, dest=key, action="store_true", default=None)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bathyinv", description="Moving-bottom reconstruction from surface data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthesize target surface/velocity data")
    _add_run_options(p)

    p = sub.add_parser("forward", help="single forward solve")
    _add_run_options(p)
    p.add_argument("--bottom", choices=("true", "init"), default="true")
    p.add_argument("--with-adjoint", action="store_true", help="also solve and dump the adjoint")

    p = sub.add_parser("reconstruct", help="full descent loop")
    _add_run_options(p)
    p.add_argument("--figures", action="store_true", help="also render PNG figures with matplotlib")

    p = sub.add_parser("compare", help="compare convergence of several runs")
    p.add_argument("dirs", nargs="+", metavar="DIR")
    p.add_argument("--out", default=None, help="directory for compare.csv and its plot script")
    p.add_argument("--figures", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        cfg = parse_config(text)
    changes = {}
    for key in list(_VALUE_FLAGS.values()):
        raw = getattr(args, key, None)
        if raw is not None:
            name, value = coerce(key, raw)
            changes[name] = value
    for key in _SWITCH_FLAGS.values():
        if getattr(args, key, None):
            changes[key] = True
    return dataclasses.replace(cfg, **changes)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "compare":
            cmp = run_compare(args.dirs, args.out, args.figures)
            sys.stdout.write(cmp.table_text())
            sys.stdout.write(cmp.summary())
            return 0
        cfg = config_from_args(args)
        if args.command == "generate":
            written = run_generate(cfg)
        elif args.command == "forward":
            written = run_forward(cfg, args.bottom, args.with_adjoint)
        else:
            written = run_reconstruct(cfg, args.figures)
        for path in written:
            print(path)
        return 0
    except BathyInvError as exc:
        print(f"bathyinv: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"bathyinv: error: {exc}", file=sys.stderr)
        return OutputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
