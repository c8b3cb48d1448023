"""Adapter contracts a full-order model must satisfy.

A full-order model (FOM) exposes its velocity ``f(x, t)`` and the action of
its Jacobian ``df/dx`` on a dense, column-major operand. The ROM layer never
touches the model's parameters; those stay inside the adapter.
"""

from typing import Protocol, runtime_checkable

import numpy as np

from .errors import ContractViolation


@runtime_checkable
class UnsteadyFom(Protocol):
    """Semi-discrete system ``dx/dt = f(x, t)``.

    ``state_size`` is the length of ``x``; ``velocity_size`` the length of
    ``f``. They coincide for a full mesh. A sample-mesh adapter reads a
    gathered state and returns only the sampled rows, so its velocity is
    shorter than its state.
    """

    state_size: int
    velocity_size: int

    def velocity(self, x: np.ndarray, t: float) -> np.ndarray: ...

    def apply_jacobian(self, x: np.ndarray, t: float, B: np.ndarray) -> np.ndarray: ...


@runtime_checkable
class SteadyFom(Protocol):
    """Stationary residual ``f(x) = 0``."""

    state_size: int
    velocity_size: int

    def residual(self, x: np.ndarray) -> np.ndarray: ...

    def apply_jacobian(self, x: np.ndarray, B: np.ndarray) -> np.ndarray: ...


class SteadyView:
    """Expose an unsteady system frozen at time `t` as a :class:`SteadyFom`."""

    def __init__(self, system, t=0.0):
        self.system = system
        self.t = t
        self.state_size = system.state_size
        self.velocity_size = system.velocity_size

    def residual(self, x):
        return self.system.velocity(x, self.t)

    def apply_jacobian(self, x, B):
        return self.system.apply_jacobian(x, self.t, B)


def create_velocity(system):
    """Zero-filled buffer shaped like a velocity of `system`."""
    return np.zeros(system.velocity_size)


def create_apply_jacobian_result(system, B):
    """Zero-filled column-major buffer shaped like ``J @ B``."""
    return np.zeros((system.velocity_size, np.shape(B)[1]), order="F")


def check_jacobian_action(system, x, t, B, h=1e-6):
    """Compare ``system.apply_jacobian`` against central differences of the velocity.

    Returns the largest entrywise error, each scaled by ``1 + |JB|``.
    """
    x = np.asarray(x, dtype=float)
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    if h <= 0:
        raise ContractViolation("step h must be positive")
    if not np.all(np.isfinite(x)):
        raise ContractViolation("state has non-finite entries")
    n = system.state_size
    if x.shape != (n,) or B.shape[0] != n:
        raise ContractViolation(f"state {x.shape} / operand {B.shape} do not match N={n}")

    JB = np.asarray(system.apply_jacobian(x, t, B))
    if JB.shape != (system.velocity_size, B.shape[1]):
        raise ContractViolation(f"apply_jacobian returned shape {JB.shape}")
    worst = 0.0
    for j in range(B.shape[1]):
        b = B[:, j]
        fd = (system.velocity(x + h * b, t) - system.velocity(x - h * b, t)) / (2 * h)
        err = np.abs(fd - JB[:, j]) / (1.0 + np.abs(JB[:, j]))
        worst = max(worst, float(err.max(initial=0.0)))
    return worst
