"""Optional PNG rendering of the run tables with matplotlib.

matplotlib is imported lazily so the solvers and CSV output work without it.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_convergence(path, iterations, sup_norms, labels=None, title=None):
    """Semilog plot of the gradient sup-norm; ``sup_norms`` may hold several runs as columns."""
    plt = _pyplot()
    sup = np.atleast_2d(np.asarray(sup_norms, dtype=float).T).T
    labels = labels or [f"run {j}" for j in range(sup.shape[1])]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    styles = ["o:", "s--", "^-", "d-."]
    for j in range(sup.shape[1]):
        y = np.where(sup[:, j] > 0, sup[:, j], np.nan)
        ax.semilogy(iterations, y, styles[j % len(styles)], label=labels[j], markersize=4)
    ax.set_xlabel("iteration")
    ax.set_ylabel(r"$\|\nabla J\|_\infty$")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(Path(path), dpi=120)
    plt.close(fig)
    return Path(path)


def plot_snapshots(path, x, snapshots, truth, times, levels, title=None):
    """Grid of panels: rows are iterations ``k``, columns are snapshot times.

    ``snapshots`` maps ``k`` to a space-time bottom array; ``truth`` is the
    true bottom (or None) and ``levels`` the time index of each entry of
    ``times``.
    """
    plt = _pyplot()
    ks = sorted(snapshots)
    fig, axes = plt.subplots(len(ks), len(times), figsize=(3.2 * len(times), 2.2 * len(ks)), sharex=True, squeeze=False)
    for row, k in enumerate(ks):
        for col, (t, n) in enumerate(zip(times, levels)):
            ax = axes[row, col]
            if truth is not None:
                ax.plot(x, truth[n], "k-", lw=1.2, label="true")
            ax.plot(x, snapshots[k][n], "r.--", lw=0.8, markersize=2.5, label="reconstructed")
            ax.set_title(f"k = {k}, t = {t:g}", fontsize=9)
            ax.tick_params(labelsize=7)
    axes[0, 0].legend(fontsize=7)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=120)
    plt.close(fig)
    return Path(path)
