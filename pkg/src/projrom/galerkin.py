"""Continuous-time Galerkin ROM.

The reduced velocity solves ``min_v || A (J_g v - f(x_ref + g(xi), t)) ||``,
i.e. ``v = (A J_g)^+ A f``. For a linear decoder under a fixed weighting the
projected basis and its normal-equations factorization are built once.
"""

import numpy as np

from ._setup import check_layout, select_rows
from .decoder import LinearDecoder
from .errors import ContractViolation
from .linalg import NormalEquations, least_squares_solve
from .steppers import integrate_explicit


class GalerkinProblem:
    """Galerkin ROM of `system` on the trial manifold ``x_ref + decoder``.

    Parameters
    ----------
    system : UnsteadyFom
    decoder : LinearDecoder or any decoder with ``apply`` / ``jacobian``
    x_ref : (N,) array
    weighting : weighting operator, optional
        Defaults to the identity.
    residual_rows : int array, optional
        For sample-mesh systems: the slot in the gathered state of every
        velocity row.
    """

    def __init__(self, system, decoder, x_ref, weighting=None, residual_rows=None):
        self.system = system
        self.decoder = decoder
        self.x_ref, self.weighting, self.rows = check_layout(system, decoder, x_ref, weighting, residual_rows)
        self._normal = None
        if isinstance(decoder, LinearDecoder):
            WJ = self.weighting.apply_matrix(select_rows(decoder.basis, self.rows))
            self._normal = NormalEquations(WJ)

    def rhs(self, xi, t):
        x = self.x_ref + self.decoder.apply(xi)
        Wf = self.weighting.apply(self.system.velocity(x, t))
        if self._normal is not None:
            return self._normal.solve_normal(self._normal.J.T @ Wf)
        WJ = self.weighting.apply_matrix(select_rows(self.decoder.jacobian(xi), self.rows))
        return least_squares_solve(WJ, -Wf)


def galerkin_rhs(problem, xi, t):
    return problem.rhs(np.asarray(xi, dtype=float), t)


def run_galerkin(problem, xi0, stepper, dt, n_steps, observer=None, t0=0.0):
    """Integrate the reduced system with an explicit stepper ("forward-euler" or "rk4")."""
    if stepper not in ("forward-euler", "rk4") and not callable(stepper):
        raise ContractViolation(f"Galerkin supports explicit steppers only, got {stepper!r}")
    xi0 = np.asarray(xi0, dtype=float)
    if xi0.shape != (problem.decoder.reduced_size,):
        raise ContractViolation(f"reduced state of shape {xi0.shape}")
    return integrate_explicit(stepper, problem.rhs, xi0, dt, n_steps, observer, t0)
