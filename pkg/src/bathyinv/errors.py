"""Exception hierarchy shared by the solvers, optimizer and CLI."""


class BathyInvError(Exception):
    """Base class; ``exit_code`` is what the CLI returns."""

    exit_code = 1


class ConfigError(BathyInvError, ValueError):
    exit_code = 2


class SolverError(BathyInvError, RuntimeError):
    exit_code = 3


class BlowUpError(SolverError):
    """Non-finite values appeared; ``level`` and ``cell`` locate the first one."""

    def __init__(self, message, level=None, cell=None):
        super().__init__(message)
        self.level = level
        self.cell = cell


class PositivityError(SolverError):
    """Total depth ``1 + eps*r`` dropped to zero or below."""

    def __init__(self, message, level=None, cell=None):
        super().__init__(message)
        self.level = level
        self.cell = cell


class WavespeedError(SolverError):
    """Rusanov wavespeed needs ``sqrt(r)``, so ``r`` must be nonnegative."""

    def __init__(self, message, level=None, cell=None):
        super().__init__(message)
        self.level = level
        self.cell = cell


class IterationError(SolverError):
    """A solver failure inside the descent loop, tagged with the iteration."""

    def __init__(self, message, iteration, cause=None):
        super().__init__(message)
        self.iteration = iteration
        self.cause = cause


class OutputError(BathyInvError, OSError):
    exit_code = 4
