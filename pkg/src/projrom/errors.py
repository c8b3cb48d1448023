"""Exception hierarchy shared across the package."""

import numpy as np


class RomError(Exception):
    """Base class for all errors raised by projrom."""


class ContractViolation(RomError, ValueError):
    """Inputs do not satisfy an operation's preconditions (shapes, orthonormality, ...)."""


class RankDeficiencyError(RomError, np.linalg.LinAlgError):
    """A normal-equations matrix is singular to working tolerance."""


class InsufficientRankError(RomError, ValueError):
    """A snapshot set cannot support the requested number of POD modes."""

    def __init__(self, message, attainable_rank):
        super().__init__(message)
        self.attainable_rank = attainable_rank


class DivergenceError(RomError, FloatingPointError):
    """A state or residual became non-finite."""

    def __init__(self, message, step=None):
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)
        self.step = step


class StepFailure(RomError, RuntimeError):
    """A nonlinear solve failed while advancing a time step."""

    def __init__(self, step, cause):
        super().__init__(f"step {step}: {cause}")
        self.step = step
        self.cause = cause


class TopologyError(RomError, ValueError):
    """A sample-mesh closure is missing a cell that a residual row needs."""


class ConfigError(RomError, ValueError):
    """Invalid run configuration."""
