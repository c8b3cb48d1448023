"""Least-squares Petrov-Galerkin ROMs.

Unsteady LSPG minimizes the weighted residual of an implicit multistep
scheme over the trial manifold at every time step; steady LSPG minimizes the
weighted stationary residual once. Both reuse :func:`gauss_newton_solve`.
"""

import numpy as np

from ._setup import check_layout, select_rows
from .errors import ContractViolation, StepFailure
from .solvers import GaussNewtonReport, GaussNewtonSettings, gauss_newton_solve
from .steppers import StepHistory, backward_euler_coefficients, discrete_residual

__all__ = [
    "GaussNewtonReport",
    "GaussNewtonSettings",
    "LspgProblem",
    "advance_lspg",
    "gauss_newton_solve",
    "lspg_jacobian",
    "lspg_residual",
    "lspg_steady_solve",
]


class LspgProblem:
    """Unsteady LSPG problem.

    Parameters
    ----------
    system : UnsteadyFom
    decoder : trial manifold
    x_ref : (N,) array
    coeffs : MultistepCoefficients
    dt : float
    weighting : weighting operator, optional
    residual_rows : int array, optional
        Slot of each velocity row in the gathered state (sample mesh only).
    """

    def __init__(self, system, decoder, x_ref, coeffs, dt, weighting=None, residual_rows=None):
        if dt <= 0:
            raise ContractViolation("time step must be positive")
        self.system = system
        self.decoder = decoder
        self.coeffs = coeffs
        self.dt = float(dt)
        self.x_ref, self.weighting, self.rows = check_layout(system, decoder, x_ref, weighting, residual_rows)

    def reconstruct(self, xi):
        return self.x_ref + self.decoder.apply(xi)

    def history_entry(self, x, t):
        """What the step history keeps for a reconstructed state `x`."""
        f = self.system.velocity(x, t) if self.coeffs.needs_velocity_history else None
        return select_rows(x, self.rows), f


def lspg_residual(problem, xi, t_n, hist, coeffs=None):
    """Weighted discrete residual ``A r^n(x_ref + g(xi))``."""
    c = coeffs or problem.coeffs
    x = problem.reconstruct(xi)
    f = problem.system.velocity(x, t_n)
    r = discrete_residual(c, select_rows(x, problem.rows), f, hist, problem.dt)
    return problem.weighting.apply(r)


def lspg_jacobian(problem, xi, t_n, coeffs=None):
    """``A (alpha_0 J_g - dt beta_0 (df/dx) J_g)`` with one Jacobian action."""
    c = coeffs or problem.coeffs
    x = problem.reconstruct(xi)
    Jg = problem.decoder.jacobian(xi)
    JfJg = problem.system.apply_jacobian(x, t_n, Jg)
    M = c.alpha[0] * select_rows(Jg, problem.rows) - (problem.dt * c.beta[0]) * JfJg
    return problem.weighting.apply_matrix(M)


def advance_lspg(problem, xi0, n_steps, settings=None, observer=None, t0=0.0, reports=None):
    """Advance `n_steps` LSPG steps, warm-starting each solve from the previous state.

    Multistep schemes with k > 1 take backward Euler steps until k states of
    history exist. Per-step :class:`GaussNewtonReport` objects are appended to
    `reports` when a list is given.
    """
    if n_steps < 1:
        raise ContractViolation("n_steps must be at least 1")
    settings = settings or GaussNewtonSettings()
    be = backward_euler_coefficients()
    xi = np.array(xi0, dtype=float)
    if xi.shape != (problem.decoder.reduced_size,):
        raise ContractViolation(f"reduced state of shape {xi.shape}")

    hist = StepHistory(problem.coeffs.k)
    hist.push(*problem.history_entry(problem.reconstruct(xi), t0))
    if observer is not None:
        observer.observe(0, t0, xi)
    for step in range(1, n_steps + 1):
        t_n = t0 + step * problem.dt
        c = problem.coeffs if len(hist) >= problem.coeffs.k else be
        try:
            xi, report = gauss_newton_solve(
                lambda y: lspg_residual(problem, y, t_n, hist, c),
                lambda y: lspg_jacobian(problem, y, t_n, c),
                xi,
                settings,
            )
        except Exception as exc:
            raise StepFailure(step, exc) from exc
        if reports is not None:
            reports.append(report)
        hist.push(*problem.history_entry(problem.reconstruct(xi), t_n))
        if observer is not None:
            observer.observe(step, t_n, xi)
    return xi


def lspg_steady_solve(system, decoder, x_ref, weighting, xi_guess, settings=None, residual_rows=None):
    """Minimize ``|| A f(x_ref + g(xi)) ||`` for a steady system.

    Returns
    -------
    xi, GaussNewtonReport
    """
    x_ref, weighting, rows = check_layout(system, decoder, x_ref, weighting, residual_rows)

    def residual(xi):
        return weighting.apply(system.residual(x_ref + decoder.apply(xi)))

    def jacobian(xi):
        return weighting.apply_matrix(system.apply_jacobian(x_ref + decoder.apply(xi), decoder.jacobian(xi)))

    return gauss_newton_solve(residual, jacobian, xi_guess, settings)
