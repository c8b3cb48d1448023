"""Explicit steppers, implicit linear-multistep residuals, and step-loop drivers."""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import ContractViolation, DivergenceError, StepFailure
from .solvers import GaussNewtonSettings, gauss_newton_solve


class StepObserver(Protocol):
    def observe(self, step: int, t: float, state: np.ndarray) -> None: ...


@dataclass(frozen=True)
class MultistepCoefficients:
    """Implicit k-step scheme

        alpha_0 x^n - dt beta_0 f(x^n) + sum_j alpha_j x^{n-j} - dt sum_j beta_j f(x^{n-j}) = 0

    built from exact rationals so that ``sum(alpha) == 0`` holds before any
    rounding.
    """

    k: int
    alpha_exact: tuple
    beta_exact: tuple
    alpha: np.ndarray = field(init=False, repr=False, compare=False)
    beta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.k < 1 or len(self.alpha_exact) != self.k + 1 or len(self.beta_exact) != self.k + 1:
            raise ContractViolation("need k >= 1 and k+1 alpha and beta coefficients")
        if sum(Fraction(a) for a in self.alpha_exact) != 0:
            raise ContractViolation("alpha coefficients must sum to zero")
        if Fraction(self.beta_exact[0]) == 0:
            raise ContractViolation("beta_0 must be nonzero for an implicit scheme")
        object.__setattr__(self, "alpha", np.array([float(a) for a in self.alpha_exact]))
        object.__setattr__(self, "beta", np.array([float(b) for b in self.beta_exact]))

    @property
    def needs_velocity_history(self):
        return any(Fraction(b) != 0 for b in self.beta_exact[1:])


def backward_euler_coefficients():
    return MultistepCoefficients(1, (Fraction(1), Fraction(-1)), (Fraction(1), Fraction(0)))


def bdf2_coefficients():
    return MultistepCoefficients(
        2,
        (Fraction(1), Fraction(-4, 3), Fraction(1, 3)),
        (Fraction(2, 3), Fraction(0), Fraction(0)),
    )


class StepHistory:
    """The k most recent states (and velocities), newest first."""

    def __init__(self, k):
        self.k = k
        self.states = deque(maxlen=k)
        self.velocities = deque(maxlen=k)

    def push(self, state, velocity=None):
        self.states.appendleft(np.array(state, dtype=float))
        self.velocities.appendleft(None if velocity is None else np.array(velocity, dtype=float))

    def __len__(self):
        return len(self.states)


def discrete_residual(coeffs, x_n, f_n, hist, dt):
    """Residual of one implicit multistep step at the trial state `x_n`."""
    if dt <= 0:
        raise ContractViolation("time step must be positive")
    if len(hist) < coeffs.k:
        raise ContractViolation(f"history holds {len(hist)} states, scheme needs {coeffs.k}")
    a, b = coeffs.alpha, coeffs.beta
    r = a[0] * np.asarray(x_n) - dt * b[0] * np.asarray(f_n)
    for j in range(1, coeffs.k + 1):
        r = r + a[j] * hist.states[j - 1]
        if b[j] != 0.0:
            fj = hist.velocities[j - 1]
            if fj is None:
                raise ContractViolation("scheme needs velocity history that was not recorded")
            r = r - dt * b[j] * fj
    return r


def discrete_jacobian_action(coeffs, system, x_n, t_n, dt, B):
    """``alpha_0 B - dt beta_0 (df/dx) B`` for a full-mesh system."""
    if dt <= 0:
        raise ContractViolation("time step must be positive")
    JB = system.apply_jacobian(x_n, t_n, B)
    return coeffs.alpha[0] * np.asarray(B) - dt * coeffs.beta[0] * JB


def _check_finite(x, what, step=None):
    if not np.all(np.isfinite(x)):
        raise DivergenceError(f"non-finite {what}", step=step)


def forward_euler_step(rhs, x, t, dt):
    f = rhs(x, t)
    _check_finite(f, "velocity")
    return x + dt * f


def rk4_step(rhs, x, t, dt):
    """Classical four-stage Runge-Kutta step."""
    k1 = rhs(x, t)
    _check_finite(k1, "RK4 stage 1")
    k2 = rhs(x + 0.5 * dt * k1, t + 0.5 * dt)
    _check_finite(k2, "RK4 stage 2")
    k3 = rhs(x + 0.5 * dt * k2, t + 0.5 * dt)
    _check_finite(k3, "RK4 stage 3")
    k4 = rhs(x + dt * k3, t + dt)
    _check_finite(k4, "RK4 stage 4")
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


EXPLICIT_STEPPERS = {"forward-euler": forward_euler_step, "rk4": rk4_step}


def integrate_explicit(stepper, rhs, x0, dt, n_steps, observer=None, t0=0.0):
    """Apply `stepper` `n_steps` times.

    The observer sees the initial condition (step 0) and the state after
    every step, i.e. ``n_steps + 1`` calls.
    """
    if isinstance(stepper, str):
        stepper = EXPLICIT_STEPPERS[stepper]
    if n_steps < 1:
        raise ContractViolation("n_steps must be at least 1")
    if dt <= 0:
        raise ContractViolation("time step must be positive")
    x = np.array(x0, dtype=float)
    if observer is not None:
        observer.observe(0, t0, x)
    for n in range(1, n_steps + 1):
        t = t0 + (n - 1) * dt
        try:
            x = stepper(rhs, x, t, dt)
        except DivergenceError as exc:
            raise DivergenceError(str(exc), step=n) from exc
        _check_finite(x, "state", step=n)
        if observer is not None:
            observer.observe(n, t0 + n * dt, x)
    return x


def _newton_step(J, r):
    if scipy.sparse.issparse(J):
        return -scipy.sparse.linalg.spsolve(J.tocsc(), r)
    return -np.linalg.solve(J, r)


def integrate_implicit(system, coeffs, x0, dt, n_steps, observer=None, settings=None, t0=0.0, reports=None):
    """Newton solve of a full-order implicit multistep scheme at every step.

    If the system offers ``jacobian_matrix(x, t)`` (e.g. a sparse matrix) it
    is used directly; otherwise the Jacobian is materialized through
    ``apply_jacobian`` on the identity. Schemes with k > 1 are started with
    backward Euler steps until enough history exists.
    """
    if n_steps < 1:
        raise ContractViolation("n_steps must be at least 1")
    settings = settings or GaussNewtonSettings()
    be = backward_euler_coefficients()
    n = system.state_size
    eye = scipy.sparse.identity(n, format="csr")
    dense_eye = None

    x = np.array(x0, dtype=float)
    hist = StepHistory(coeffs.k)
    hist.push(x, system.velocity(x, t0) if coeffs.needs_velocity_history else None)
    if observer is not None:
        observer.observe(0, t0, x)
    for step in range(1, n_steps + 1):
        t_n = t0 + step * dt
        c = coeffs if len(hist) >= coeffs.k else be

        def residual(y):
            return discrete_residual(c, y, system.velocity(y, t_n), hist, dt)

        def jacobian(y):
            nonlocal dense_eye
            if hasattr(system, "jacobian_matrix"):
                Jf = system.jacobian_matrix(y, t_n)
                if scipy.sparse.issparse(Jf):
                    return (c.alpha[0] * eye - (dt * c.beta[0]) * Jf).tocsr()
                return c.alpha[0] * np.eye(n) - dt * c.beta[0] * Jf
            if dense_eye is None:
                dense_eye = np.eye(n, order="F")
            return discrete_jacobian_action(c, system, y, t_n, dt, dense_eye)

        try:
            x, report = gauss_newton_solve(residual, jacobian, x, settings, step_solver=_newton_step)
        except Exception as exc:
            raise StepFailure(step, exc) from exc
        if reports is not None:
            reports.append(report)
        hist.push(x, system.velocity(x, t_n) if coeffs.needs_velocity_history else None)
        if observer is not None:
            observer.observe(step, t_n, x)
    return x
