"""1D inviscid Burgers equation with an exponential source.

    u_t + (u^2 / 2)_x = alpha * exp(beta * x),   x in [0, L]
    u(0, t) = gamma,   u(x, 0) = 1

Finite volumes on ``N`` uniform cells with Godunov fluxes. The inflow face
uses the ghost value ``gamma``; the outflow face extrapolates the last cell
(zeroth order).

The analytic Jacobian differentiates the upwind flux ``max(u, 0)^2 / 2``,
which is the active Godunov branch whenever the state is positive. That is
the regime of every run in this package (``u0 = 1``, ``gamma = 5``, positive
source); for states with negative entries the Jacobian is only approximate.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import ContractViolation, TopologyError

DOMAIN_LENGTH = 100.0


@dataclass(frozen=True)
class BurgersParams:
    alpha: float = 0.02
    beta: float = 0.02
    gamma: float = 5.0
    num_cells: int = 1024
    domain_length: float = DOMAIN_LENGTH

    def __post_init__(self):
        if self.num_cells < 2:
            raise ContractViolation("Burgers needs at least two cells")
        if not np.isfinite(self.gamma):
            raise ContractViolation("gamma must be finite")

    @property
    def dx(self):
        return self.domain_length / self.num_cells

    @property
    def cell_centers(self):
        return (np.arange(self.num_cells) + 0.5) * self.dx

    def source(self):
        return self.alpha * np.exp(self.beta * self.cell_centers)

    def initial_condition(self):
        return np.ones(self.num_cells)


def godunov_flux(u_left, u_right):
    """Exact Riemann flux for ``f(u) = u^2 / 2``."""
    return np.maximum(0.5 * np.maximum(u_left, 0.0) ** 2, 0.5 * np.minimum(u_right, 0.0) ** 2)


def _face_states(params, u):
    u_left = np.concatenate(([params.gamma], u))
    u_right = np.concatenate((u, u[-1:]))
    return u_left, u_right


def burgers_velocity(params, u, t=0.0, source=None):
    u = np.asarray(u, dtype=float)
    if u.shape != (params.num_cells,):
        raise ContractViolation(f"state of shape {u.shape}, expected ({params.num_cells},)")
    if source is None:
        source = params.source()
    F = godunov_flux(*_face_states(params, u))
    return -(F[1:] - F[:-1]) / params.dx + source


def _jacobian_bands(params, u):
    slope = np.maximum(u, 0.0) / params.dx
    return -slope, slope[:-1]


def burgers_jacobian(params, u, t=0.0, mode="sparse"):
    """Spatial Jacobian as a CSR matrix (``mode="sparse"``) or dense array."""
    u = np.asarray(u, dtype=float)
    main, lower = _jacobian_bands(params, u)
    if mode == "sparse":
        return scipy.sparse.diags([lower, main], [-1, 0], format="csr")
    if mode == "dense":
        J = np.diag(main)
        J[np.arange(1, u.size), np.arange(u.size - 1)] = lower
        return np.asfortranarray(J)
    raise ContractViolation(f"unknown Jacobian mode {mode!r}")


def burgers_apply_jacobian(params, u, t, B, mode="sparse"):
    u = np.asarray(u, dtype=float)
    B = np.asarray(B, dtype=float)
    n = params.num_cells
    if u.shape != (n,) or B.ndim != 2 or B.shape[0] != n:
        raise ContractViolation(f"state {u.shape} / operand {B.shape} do not match N={n}")
    return np.asfortranarray(burgers_jacobian(params, u, t, mode) @ B)


class BurgersFom:
    """Full-mesh adapter (velocity plus Jacobian action)."""

    def __init__(self, params=None, jacobian="sparse"):
        self.params = params or BurgersParams()
        if jacobian not in ("sparse", "dense"):
            raise ContractViolation(f"unknown Jacobian mode {jacobian!r}")
        self.jacobian_mode = jacobian
        self.state_size = self.velocity_size = self.params.num_cells
        self._source = self.params.source()

    def velocity(self, u, t=0.0):
        return burgers_velocity(self.params, u, t, self._source)

    def jacobian_matrix(self, u, t=0.0):
        return burgers_jacobian(self.params, u, t, self.jacobian_mode)

    def apply_jacobian(self, u, t, B):
        return burgers_apply_jacobian(self.params, u, t, B, self.jacobian_mode)

    def initial_condition(self):
        return self.params.initial_condition()


class BurgersSampleMesh:
    """Burgers evaluated only on the residual cells of a sample mesh.

    States and operands are gathered onto ``topology.state_cells``; outputs
    have one row per residual cell. Each residual cell needs its left
    neighbour in the closure (the inflow ghost replaces it for cell 0). When
    the right neighbour is absent the outflow face is evaluated with the cell
    itself as right state, which matches the full-mesh flux for positive
    states.
    """

    def __init__(self, params, topology):
        self.params = params
        self.topology = topology
        if topology.size != params.num_cells:
            raise ContractViolation("topology built for a different mesh size")
        cells = topology.residual_cells
        pos = topology.state_position
        left = np.where(cells > 0, pos[np.maximum(cells - 1, 0)], -1)
        missing = (cells > 0) & (left < 0)
        if np.any(missing):
            raise TopologyError(f"closure lacks left neighbours of cells {cells[missing][:5].tolist()}")
        right_cells = np.minimum(cells + 1, params.num_cells - 1)
        right = np.where(cells < params.num_cells - 1, pos[right_cells], -1)
        self._self = topology.residual_positions
        self._left = left
        self._right = np.where(right >= 0, right, self._self)
        self._inflow = cells == 0
        self._source = params.source()[cells]
        self.state_size = topology.state_cells.size
        self.velocity_size = cells.size

    def _check(self, u):
        u = np.asarray(u, dtype=float)
        if u.shape != (self.state_size,):
            raise ContractViolation(f"gathered state of shape {u.shape}, expected ({self.state_size},)")
        return u

    def velocity(self, u, t=0.0):
        u = self._check(u)
        ui = u[self._self]
        ul = np.where(self._inflow, self.params.gamma, u[self._left])
        flux_in = godunov_flux(ul, ui)
        flux_out = godunov_flux(ui, u[self._right])
        return -(flux_out - flux_in) / self.params.dx + self._source

    def apply_jacobian(self, u, t, B):
        u = self._check(u)
        B = np.asarray(B, dtype=float)
        if B.ndim != 2 or B.shape[0] != self.state_size:
            raise ContractViolation(f"gathered operand of shape {B.shape}")
        slope = np.maximum(u, 0.0) / self.params.dx
        lower = np.where(self._inflow, 0.0, slope[self._left])
        main = -slope[self._self]
        return np.asfortranarray(lower[:, None] * B[self._left] + main[:, None] * B[self._self])
