"""Reconstruction of a moving channel bottom from surface-wave data.

Forward and adjoint shallow-water solvers (Rusanov, FORCE-alpha and the
coupled FORCE-alpha formulation) driving a fixed-step gradient descent.
"""

from .adjoint import AdjointMethod, AdjointTrajectory, solve_adjoint
from .bathymetry import ProfileKind, eval_profile, sample_field
from .config import RunConfig, emit_config, parse_config
from .errors import BathyInvError, BlowUpError, ConfigError, OutputError, PositivityError, SolverError, WavespeedError
from .forward import ForceAlphaParams, SchemeKind, StateTrajectory, solve_forward
from .grid import BoundaryKind, Grid, make_grid
from .optimizer import (
    DescentConfig,
    Problem,
    RunHistory,
    SchemeCombo,
    Targets,
    assemble_gradient,
    descent_run,
    evaluate_cost,
    fd_gradient_oracle,
    synthesize_targets,
)

__version__ = "0.1.0"
