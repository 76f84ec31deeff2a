"""Cost, gradient and the steepest-descent loop for bottom reconstruction."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .adjoint import AdjointMethod, AdjointTrajectory, solve_adjoint
from .bathymetry import ProfileKind, constant_field, sample_field
from .errors import ConfigError, IterationError, SolverError
from .forward import ForceAlphaParams, SchemeKind, StateTrajectory, solve_forward
from .grid import BoundaryKind, Grid, central_dx, second_dt

log = logging.getLogger(__name__)


class SchemeCombo(enum.Enum):
    """Forward scheme paired with an adjoint stepper."""

    RUSANOV_FD = "rusanov+fd"
    FORCE_ALPHA_FD = "force-alpha+fd"
    FORCE_ALPHA_CSF = "force-alpha+csf"

    @classmethod
    def parse(cls, value: "str | SchemeCombo") -> "SchemeCombo":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ConfigError(f"unknown scheme {value!r} (expected one of {choices})") from None

    @property
    def forward(self) -> SchemeKind:
        return SchemeKind.RUSANOV if self is SchemeCombo.RUSANOV_FD else SchemeKind.FORCE_ALPHA

    @property
    def adjoint(self) -> AdjointMethod:
        return AdjointMethod.CSF if self is SchemeCombo.FORCE_ALPHA_CSF else AdjointMethod.FD


@dataclass
class Targets:
    """Observed surface and velocity plus the initial state of every solve.

    ``b_bar`` is the ground-truth bottom when the data are synthetic.
    """

    zeta_bar: np.ndarray
    V_bar: np.ndarray
    r0: np.ndarray
    V0: np.ndarray
    b_bar: np.ndarray | None = None


@dataclass(frozen=True)
class DescentConfig:
    lambda_b: float = 0.71
    iter_total: int = 17
    tol: float = 1e-8
    b_init: float = 0.01
    pin_endpoints: bool = False

    def __post_init__(self) -> None:
        if not (np.isfinite(self.lambda_b) and self.lambda_b >= 0):
            raise ConfigError(f"lambda_b must be >= 0, got {self.lambda_b}")
        if self.iter_total < 1:
            raise ConfigError(f"iter_total must be >= 1, got {self.iter_total}")
        if not (np.isfinite(self.tol) and self.tol >= 0):
            raise ConfigError(f"tol must be >= 0, got {self.tol}")
        if not np.isfinite(self.b_init):
            raise ConfigError("b_init must be finite")


@dataclass
class IterationRecord:
    iteration: int
    sup_norm: float  # over all levels and cells; drives the stopping test
    sup_norm_final: float  # over cells at the last time level
    cost: float


@dataclass
class RunHistory:
    records: list[IterationRecord] = field(default_factory=list)
    # b^k keyed by k; b^0 is the initial guess
    snapshots: dict[int, np.ndarray] = field(default_factory=dict)
    converged: bool = False

    @property
    def sup_norms(self) -> np.ndarray:
        return np.array([r.sup_norm for r in self.records])

    @property
    def costs(self) -> np.ndarray:
        return np.array([r.cost for r in self.records])


@dataclass(frozen=True)
class Problem:
    """Everything except the bottom that a forward/adjoint pass needs."""

    grid: Grid
    bc: BoundaryKind
    eps: float
    combo: SchemeCombo = SchemeCombo.FORCE_ALPHA_CSF
    params: ForceAlphaParams = ForceAlphaParams()

    def forward(self, b: np.ndarray, targets: Targets) -> StateTrajectory:
        return solve_forward(targets.r0, targets.V0, b, self.combo.forward, self.grid, self.bc, self.eps, self.params)

    def adjoint(self, fwd: StateTrajectory, b: np.ndarray, targets: Targets) -> AdjointTrajectory:
        return solve_adjoint(
            fwd, targets.zeta_bar, targets.V_bar, b, self.combo.adjoint, self.grid, self.bc, self.eps, self.params
        )


def synthesize_targets(
    profile: ProfileKind,
    grid: Grid,
    bc: BoundaryKind,
    eps: float,
    scheme: SchemeKind,
    v0: float = 1.5,
    zeta0: float = 1.0,
    params: ForceAlphaParams | None = None,
    constant_zeta_bar: bool = False,
) -> Targets:
    """Run the forward model on the true bottom to manufacture observations.

    With ``constant_zeta_bar`` the surface target is ``zeta0`` at every level
    instead of the simulated surface; ``V_bar`` is simulated either way.
    """
    b_bar = sample_field(profile, grid)
    return targets_from_bottom(b_bar, grid, bc, eps, scheme, v0, zeta0, params, constant_zeta_bar)


def targets_from_bottom(b_bar, grid, bc, eps, scheme, v0=1.5, zeta0=1.0, params=None, constant_zeta_bar=False) -> Targets:
    r0 = zeta0 - b_bar[0]
    V0 = np.full(grid.num_cells, float(v0))
    traj = solve_forward(r0, V0, b_bar, scheme, grid, bc, eps, params)
    zeta_bar = np.full(grid.shape, float(zeta0)) if constant_zeta_bar else traj.r + b_bar
    return Targets(zeta_bar=zeta_bar, V_bar=traj.V.copy(), r0=r0, V0=V0, b_bar=b_bar)


def evaluate_cost(fwd: StateTrajectory, b: np.ndarray, targets: Targets, grid: Grid) -> float:
    dz = fwd.r + b - targets.zeta_bar
    dv = fwd.V - targets.V_bar
    return 0.5 * float(np.sum(dz * dz) + np.sum(dv * dv)) * grid.dx * grid.dt


def assemble_gradient(adj: AdjointTrajectory, fwd: StateTrajectory, b: np.ndarray, targets: Targets, grid: Grid, bc: BoundaryKind, eps: float) -> np.ndarray:
    """Gradient density ``q_x + (eps/2) q_xtt - (zeta_bar - zeta)`` on the space-time grid."""
    qx = central_dx(adj.q, grid.dx, bc)
    return qx + 0.5 * eps * second_dt(qx, grid.dt) - (targets.zeta_bar - (fwd.r + b))


def cost_of(b: np.ndarray, targets: Targets, problem: Problem) -> float:
    return evaluate_cost(problem.forward(b, targets), b, targets, problem.grid)


def gradient_of(b: np.ndarray, targets: Targets, problem: Problem):
    """Return ``(g, cost)`` for bottom ``b``: one forward and one adjoint solve."""
    fwd = problem.forward(b, targets)
    adj = problem.adjoint(fwd, b, targets)
    g = assemble_gradient(adj, fwd, b, targets, problem.grid, problem.bc, problem.eps)
    return g, evaluate_cost(fwd, b, targets, problem.grid)


def fd_gradient_oracle(b: np.ndarray, targets: Targets, problem: Problem, n: int, i: int, delta: float = 1e-6) -> float:
    """Central difference of ``J`` for a bump of size ``delta`` at level ``n``, cell ``i``."""
    if delta == 0:
        raise ValueError("delta must be nonzero")
    bp = np.array(b, dtype=float)
    bm = np.array(b, dtype=float)
    bp[n, i] += delta
    bm[n, i] -= delta
    return (cost_of(bp, targets, problem) - cost_of(bm, targets, problem)) / (2.0 * delta)


def descent_run(
    cfg: DescentConfig,
    targets: Targets,
    problem: Problem,
    snapshot_iterations=(0, 1, 2, 4, 8),
    callback=None,
):
    """Fixed-step steepest descent from the constant bottom ``cfg.b_init``.

    Returns ``(b_final, history)``.  Record ``k`` (1-based) holds the gradient
    and cost evaluated at ``b^{k-1}``; the loop stops after ``iter_total``
    iterations or once the space-time sup-norm of the gradient drops below
    ``cfg.tol``.
    """
    b = constant_field(cfg.b_init, problem.grid)
    history = RunHistory()
    wanted = set(snapshot_iterations)
    if 0 in wanted:
        history.snapshots[0] = b.copy()
    for k in range(1, cfg.iter_total + 1):
        try:
            g, cost = gradient_of(b, targets, problem)
        except SolverError as exc:
            raise IterationError(f"iteration {k}: {exc}", iteration=k, cause=exc) from exc
        step = cfg.lambda_b * g
        if cfg.pin_endpoints:
            step[0] = 0.0
            step[-1] = 0.0
        b = b - step
        rec = IterationRecord(
            iteration=k,
            sup_norm=float(np.max(np.abs(g))),
            sup_norm_final=float(np.max(np.abs(g[-1]))),
            cost=cost,
        )
        history.records.append(rec)
        if k in wanted:
            history.snapshots[k] = b.copy()
        log.info("iter %d  |gradJ|_inf=%.6e  J=%.6e", k, rec.sup_norm, rec.cost)
        if callback is not None:
            callback(rec, b)
        if rec.sup_norm < cfg.tol:
            history.converged = True
            break
    return b, history
