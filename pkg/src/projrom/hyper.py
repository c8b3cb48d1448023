"""Hyper-reduction: sample selection, weighting operators and sample-mesh topology."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation


class Identity:
    kind = "identity"

    def __init__(self, size):
        self.input_size = self.output_size = int(size)

    def apply(self, v):
        return v

    def apply_matrix(self, M):
        return M


class Diagonal:
    """Row scaling by strictly positive weights."""

    kind = "diagonal"

    def __init__(self, weights):
        d = np.asarray(weights, dtype=float)
        if d.ndim != 1 or np.any(d <= 0) or not np.all(np.isfinite(d)):
            raise ContractViolation("diagonal weights must be a finite positive vector")
        self.weights = d
        self.input_size = self.output_size = d.size

    def apply(self, v):
        return self.weights * v

    def apply_matrix(self, M):
        return self.weights[:, None] * M


class Collocation:
    """Selects rows ``indices`` (a row-subset of the identity)."""

    kind = "collocation"

    def __init__(self, indices, size):
        self.indices = np.asarray(indices, dtype=np.intp)
        self.input_size = int(size)
        self.output_size = self.indices.size
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= size):
            raise ContractViolation("collocation index out of range")

    def apply(self, v):
        return v[self.indices]

    def apply_matrix(self, M):
        return M[self.indices]


class ScaledCollocation:
    """Row selection after diagonal scaling, i.e. the product ``P @ D``."""

    kind = "scaled-collocation"

    def __init__(self, indices, weights):
        d = np.asarray(weights, dtype=float)
        if d.ndim != 1 or np.any(d <= 0):
            raise ContractViolation("weights must be a positive vector")
        self.indices = np.asarray(indices, dtype=np.intp)
        self.input_size = d.size
        self.output_size = self.indices.size
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= d.size):
            raise ContractViolation("collocation index out of range")
        self.selected_weights = d[self.indices]

    def apply(self, v):
        return self.selected_weights * v[self.indices]

    def apply_matrix(self, M):
        return self.selected_weights[:, None] * M[self.indices]


def _check_input(W, n):
    if n != W.input_size:
        raise ContractViolation(f"{W.kind} weighting expects {W.input_size} rows, got {n}")


def apply_weighting(W, v):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ContractViolation("apply_weighting expects a vector")
    _check_input(W, v.shape[0])
    return W.apply(v)


def apply_weighting_matrix(W, M):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ContractViolation("apply_weighting_matrix expects a matrix")
    _check_input(W, M.shape[0])
    return W.apply_matrix(M)


@dataclass(frozen=True)
class SampleIndices:
    indices: np.ndarray
    seed: int
    forced: tuple
    size: int

    def __len__(self):
        return self.indices.size


def select_sample_indices(n, fraction, seed, forced=()):
    """Draw ``ceil(fraction * n)`` distinct cells, always including `forced`.

    The unforced remainder comes from a partial Fisher-Yates shuffle driven
    by a counter-based Philox generator, so a given ``(n, fraction, seed,
    forced)`` always yields the same set.
    """
    if not 0.0 < fraction <= 1.0:
        raise ContractViolation(f"sample fraction must lie in (0, 1], got {fraction}")
    forced = tuple(sorted(set(int(i) for i in forced)))
    if any(i < 0 or i >= n for i in forced):
        raise ContractViolation(f"forced index outside [0, {n})")
    z = math.ceil(fraction * n)
    if z < len(forced):
        raise ContractViolation(f"{len(forced)} forced indices exceed sample size {z}")

    pool = np.setdiff1d(np.arange(n, dtype=np.intp), np.array(forced, dtype=np.intp))
    rng = np.random.Generator(np.random.Philox(seed))
    m = z - len(forced)
    for i in range(m):
        j = i + int(rng.integers(pool.size - i))
        pool[i], pool[j] = pool[j], pool[i]
    chosen = np.sort(np.concatenate([np.array(forced, dtype=np.intp), pool[:m]]))
    chosen.setflags(write=False)
    return SampleIndices(chosen, int(seed), forced, int(n))


@dataclass(frozen=True)
class SampleMeshTopology:
    """Residual cells plus the state cells their stencils read.

    ``residual_positions[j]`` is where residual cell j sits inside
    ``state_cells``; ``state_position`` maps a global cell to its slot in
    ``state_cells`` (-1 when absent).
    """

    residual_cells: np.ndarray
    state_cells: np.ndarray
    residual_positions: np.ndarray
    state_position: np.ndarray
    size: int


def build_stencil_closure(indices, n, left_width=1, right_width=0):
    if left_width < 0 or right_width < 0:
        raise ContractViolation("stencil widths must be nonnegative")
    residual = np.asarray(getattr(indices, "indices", indices), dtype=np.intp)
    offsets = np.arange(-left_width, right_width + 1)
    neighbours = np.clip(residual[:, None] + offsets[None, :], 0, n - 1)
    state = np.unique(np.concatenate([residual, neighbours.ravel()]))
    position = np.full(n, -1, dtype=np.intp)
    position[state] = np.arange(state.size)
    return SampleMeshTopology(residual, state, position[residual], position, int(n))


def control_volume_weights(n, domain_length, dt):
    """Cell volume over time step, on a uniform grid."""
    if dt <= 0:
        raise ContractViolation("time step must be positive")
    return np.full(n, (domain_length / n) / dt)
