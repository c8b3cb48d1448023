"""Gauss-Newton iteration for nonlinear least-squares problems."""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DivergenceError
from .linalg import least_squares_solve


@dataclass(frozen=True)
class GaussNewtonSettings:
    """Stopping rules for :func:`gauss_newton_solve`."""

    relative_residual_reduction: float = 1e-3
    absolute_tolerance: float = 0.0
    max_iterations: int = 50

    def __post_init__(self):
        if not 0.0 < self.relative_residual_reduction < 1.0:
            raise ContractViolation("relative_residual_reduction must lie in (0, 1)")
        if self.absolute_tolerance < 0.0:
            raise ContractViolation("absolute_tolerance must be nonnegative")
        if self.max_iterations < 1:
            raise ContractViolation("max_iterations must be at least 1")


@dataclass
class GaussNewtonReport:
    iterations: int
    initial_residual_norm: float
    final_residual_norm: float
    converged: bool
    reason: str
    # ||J^T r|| at the last point where the Jacobian was assembled
    gradient_norm: float = float("nan")


def gauss_newton_solve(residual_fn, jacobian_fn, x_guess, settings=None, step_solver=least_squares_solve):
    """Undamped Gauss-Newton: ``x <- x + argmin_d ||J d + r||``.

    Stops when the residual norm has dropped by the relative reduction or
    below the absolute tolerance, or when the normal-equations residual
    ``||J^T r||`` has dropped by the relative reduction from its value at
    the initial guess (this is what ends iterations on inconsistent problems,
    whose residual never vanishes).

    Parameters
    ----------
    residual_fn, jacobian_fn : callables of the current iterate
    x_guess : array
    settings : GaussNewtonSettings, optional
    step_solver : callable ``(J, r) -> d``
        Defaults to the dense normal-equations solve. A square system may
        substitute a direct (e.g. sparse) Newton solve here.

    Returns
    -------
    x, GaussNewtonReport
    """
    settings = settings or GaussNewtonSettings()
    reduction = settings.relative_residual_reduction
    x = np.array(x_guess, dtype=float)
    r = residual_fn(x)
    r0 = float(np.linalg.norm(r))
    if not np.isfinite(r0):
        raise DivergenceError("non-finite residual at initial guess")
    if r0 == 0.0:
        return x, GaussNewtonReport(0, 0.0, 0.0, True, "zero initial residual", 0.0)
    target = max(reduction * r0, settings.absolute_tolerance)

    rnorm = r0
    g0 = grad = None
    iterations = 0
    while True:
        if rnorm <= target:
            reason = "absolute tolerance" if rnorm <= settings.absolute_tolerance else "relative reduction"
            return x, GaussNewtonReport(iterations, r0, rnorm, True, reason, _nan_if_none(grad))
        if iterations >= settings.max_iterations:
            return x, GaussNewtonReport(iterations, r0, rnorm, False, "max iterations", _nan_if_none(grad))
        J = jacobian_fn(x)
        grad = float(np.linalg.norm(J.T @ r))
        if g0 is None:
            g0 = grad
        if iterations > 0 and grad <= reduction * g0:
            return x, GaussNewtonReport(iterations, r0, rnorm, True, "gradient reduction", grad)
        x = x + step_solver(J, r)
        iterations += 1
        r = residual_fn(x)
        rnorm = float(np.linalg.norm(r))
        if not np.isfinite(rnorm):
            raise DivergenceError(f"non-finite residual after {iterations} Gauss-Newton iterations")


def _nan_if_none(v):
    return float("nan") if v is None else v
