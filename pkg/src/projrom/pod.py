"""Snapshot collection and POD bases."""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InsufficientRankError
from .linalg import thin_svd

RANK_TOL = 1e-12


@dataclass(frozen=True)
class SnapshotMatrix:
    values: np.ndarray  # (N, m), one column per observation
    times: np.ndarray
    steps: np.ndarray


class SnapshotCollector:
    """Step observer that records every observed state as a column."""

    def __init__(self):
        self._columns = []
        self._times = []
        self._steps = []

    def observe(self, step, t, state):
        state = np.asarray(state, dtype=float)
        if self._columns and state.shape != self._columns[0].shape:
            raise ContractViolation(f"snapshot of shape {state.shape} after {self._columns[0].shape}")
        self._columns.append(state.copy())
        self._times.append(float(t))
        self._steps.append(int(step))

    def __len__(self):
        return len(self._columns)

    def finalize(self):
        if not self._columns:
            raise ContractViolation("no snapshots were observed")
        values = np.asfortranarray(np.column_stack(self._columns))
        return SnapshotMatrix(values, np.array(self._times), np.array(self._steps))


def snapshot_observer():
    return SnapshotCollector()


def _canonical_signs(U):
    # make the first significant entry of each column positive
    U = U.copy(order="F")
    for j in range(U.shape[1]):
        col = U[:, j]
        big = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max(initial=0.0))
        if big.size and col[big[0]] < 0:
            U[:, j] = -col
    return U


def compute_pod_basis(snapshots, x_ref, p, rank_tol=RANK_TOL):
    """POD basis of the snapshots centred on `x_ref`.

    Parameters
    ----------
    snapshots : SnapshotMatrix or (N, m) array
    x_ref : (N,) array
        Subtracted from every column before the SVD.
    p : int
        Number of modes to keep.
    rank_tol : float or None
        Singular values at or below ``rank_tol * s[0]`` count as zero. Pass
        ``None`` to skip the rank check; modes past the numerical rank are
        then an arbitrary orthonormal completion of the snapshot range.

    Returns
    -------
    basis : (N, p) array with orthonormal columns
    singular_values : all singular values of the centred matrix

    Raises
    ------
    InsufficientRankError
        If fewer than `p` singular values exceed ``rank_tol`` times the largest.
    """
    S = getattr(snapshots, "values", snapshots)
    S = np.asarray(S, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    if S.ndim != 2 or x_ref.shape != (S.shape[0],):
        raise ContractViolation(f"snapshots {S.shape} and reference {x_ref.shape} do not conform")
    if not 1 <= p <= min(S.shape):
        raise ContractViolation(f"requested {p} modes from a {S.shape} snapshot matrix")
    svd = thin_svd(S - x_ref[:, None])
    s = svd.singular_values
    if s[0] == 0.0:
        raise InsufficientRankError("centred snapshots are identically zero", 0)
    rank = int(np.count_nonzero(s > rank_tol * s[0])) if rank_tol is not None else s.size
    if rank < p:
        raise InsufficientRankError(f"centred snapshots have numerical rank {rank} < {p}", rank)
    return _canonical_signs(svd.U[:, :p]), s


def pod_energy_report(singular_values, p):
    """Fraction of snapshot energy captured by the leading `p` modes."""
    s2 = np.asarray(singular_values, dtype=float) ** 2
    if not 1 <= p <= s2.size:
        raise ContractViolation(f"p must lie in [1, {s2.size}]")
    total = s2.sum()
    return float(s2[:p].sum() / total) if total > 0 else 1.0
