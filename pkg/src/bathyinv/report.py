"""CSV tables, gnuplot scripts and the convergence comparison report.

Numbers are written with ``repr`` (shortest string that round-trips), one
header line per file, no timestamps, so identical runs give identical bytes.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, OutputError

CONVERGENCE_COLUMNS = ("iteration", "sup_norm_gradJ", "cost_J")


def _cell(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def columns_text(names, arrays) -> str:
    return csv_text(names, zip(*arrays))


def ensure_dir(path) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {path}: {exc}") from exc
    if not os.access(path, os.W_OK):
        raise OutputError(f"output directory {path} is not writable")
    return path


def write_atomic(path, text: str) -> Path:
    """Write via a temporary file in the same directory and rename into place."""
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path


def time_tag(t: float) -> str:
    return f"t{t:g}"


def snapshot_name(k: int, t: float) -> str:
    return f"b_k{k:02d}_{time_tag(t)}.csv"


def convergence_text(history) -> str:
    return csv_text(CONVERGENCE_COLUMNS, ((r.iteration, r.sup_norm, r.cost) for r in history.records))


def final_level_text(history) -> str:
    return csv_text(("iteration", "sup_norm_gradJ_final"), ((r.iteration, r.sup_norm_final) for r in history.records))


def snapshot_text(x, b_rec, b_true) -> str:
    return columns_text(("x", "b_reconstructed", "b_true"), (x, b_rec, b_true))


# --------------------------------------------------------------------------
# gnuplot


def convergence_script(title: str) -> str:
    return (
        "# usage: gnuplot plot_convergence.gp\n"
        "set datafile separator ','\n"
        "set terminal pngcairo size 800,500\n"
        "set output 'convergence.png'\n"
        "set logscale y\n"
        "set xlabel 'iteration'\n"
        "set ylabel 'sup |grad J|'\n"
        f"set title '{title}'\n"
        "plot 'convergence.csv' using 1:2 skip 1 with linespoints title 'sup |grad J|'\n"
    )


def snapshots_script(iterations, times) -> str:
    lines = [
        "# usage: gnuplot plot_snapshots.gp",
        "set datafile separator ','",
        "set terminal pngcairo size 1200,1500",
        "set output 'snapshots.png'",
        f"set multiplot layout {len(iterations)},{len(times)}",
        "set xlabel 'x'",
        "set ylabel 'b'",
    ]
    for k in iterations:
        for t in times:
            name = snapshot_name(k, t)
            lines.append(f"set title 'k = {k}, t = {t:g}'")
            lines.append(
                f"plot '{name}' using 1:3 skip 1 with lines title 'true', "
                f"'{name}' using 1:2 skip 1 with linespoints title 'reconstructed'"
            )
    lines.append("unset multiplot")
    return "\n".join(lines) + "\n"


def compare_script(labels) -> str:
    lines = [
        "# usage: gnuplot plot_compare.gp",
        "set datafile separator ','",
        "set terminal pngcairo size 800,500",
        "set output 'compare.png'",
        "set logscale y",
        "set xlabel 'iteration'",
        "set ylabel 'sup |grad J|'",
    ]
    plots = [f"'compare.csv' using 1:{2 + j} skip 1 with linespoints title '{label}'" for j, label in enumerate(labels)]
    lines.append("plot " + ", ".join(plots))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# reading back and comparing


def read_convergence(directory) -> np.ndarray:
    """Rows of ``(iteration, sup_norm_gradJ, cost_J)`` from ``directory/convergence.csv``."""
    path = Path(directory) / "convergence.csv"
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            body = fh.read()
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    if tuple(header) != CONVERGENCE_COLUMNS:
        raise ConfigError(f"{path}: unexpected header {header}")
    rows = [[float(v) for v in line.split(",")] for line in body.splitlines() if line.strip()]
    return np.array(rows, dtype=float).reshape(-1, 3)


@dataclass
class Comparison:
    labels: list[str]
    iterations: np.ndarray
    sup_norms: np.ndarray  # (iterations, runs)
    ratios: np.ndarray  # sup_norms[:, j] / sup_norms[:, 0]
    flat: list[bool]  # run never changed its sup-norm

    def table_text(self) -> str:
        cols = ["iteration"] + [f"sup_{i}" for i in range(len(self.labels))]
        cols += [f"ratio_{i}_0" for i in range(1, len(self.labels))]
        rows = []
        for row in range(len(self.iterations)):
            vals = [int(self.iterations[row])] + list(self.sup_norms[row]) + list(self.ratios[row, 1:])
            rows.append(vals)
        return csv_text(cols, rows)

    def summary(self) -> str:
        out = [f"run {i}: {label}" for i, label in enumerate(self.labels)]
        for i, flat in enumerate(self.flat):
            if flat:
                out.append(f"warning: run {i} has a constant sup-norm column (iterate never moved?)")
        return "\n".join(out) + "\n"


def _ratio(a, b):
    with np.errstate(divide="ignore", invalid="ignore"):
        r = a / b
    return np.where((a == b), 1.0, r)


def compare_runs(directories) -> Comparison:
    if len(directories) < 2:
        raise ConfigError("compare needs at least two run directories")
    tables = [read_convergence(d) for d in directories]
    n = len(tables[0])
    for d, t in zip(directories, tables):
        if len(t) != n or not np.array_equal(t[:, 0], tables[0][:, 0]):
            raise ConfigError(f"iteration counts differ between {directories[0]} and {d}")
    sup = np.column_stack([t[:, 1] for t in tables])
    ratios = _ratio(sup, sup[:, :1])
    flat = [bool(n > 1 and np.all(sup[:, j] == sup[0, j])) for j in range(sup.shape[1])]
    return Comparison([str(d) for d in directories], tables[0][:, 0], sup, ratios, flat)
