"""Dense linear-algebra kernels used by the ROM layer.

All matrices are plain ``numpy.ndarray`` objects. Bases and operands are kept in
Fortran (column-major) order so that tall-skinny products hand BLAS contiguous
columns.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ContractViolation, RankDeficiencyError

#: relative pivot threshold below which a normal matrix is declared singular
PIVOT_TOL = 1e-14


def _as_matrix(M, name="M"):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ContractViolation(f"{name} must be 2-D, got shape {M.shape}")
    return M


def _as_vector(v, name="v"):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ContractViolation(f"{name} must be 1-D, got shape {v.shape}")
    return v


def matvec(M, v):
    """Return ``M @ v`` after checking that the shapes conform."""
    M, v = _as_matrix(M), _as_vector(v)
    if M.shape[1] != v.shape[0]:
        raise ContractViolation(f"matvec: {M.shape} with vector of length {v.shape[0]}")
    return M @ v


def transpose_matvec(M, v):
    """Return ``M.T @ v`` after checking that the shapes conform."""
    M, v = _as_matrix(M), _as_vector(v)
    if M.shape[0] != v.shape[0]:
        raise ContractViolation(f"transpose_matvec: {M.shape} with vector of length {v.shape[0]}")
    return M.T @ v


def matmul(A, B, transpose_a=False):
    """Return ``A @ B``, or ``A.T @ B`` when `transpose_a` is set."""
    A, B = _as_matrix(A, "A"), _as_matrix(B, "B")
    inner = A.shape[0] if transpose_a else A.shape[1]
    if inner != B.shape[0]:
        op = "A.T @ B" if transpose_a else "A @ B"
        raise ContractViolation(f"matmul {op}: A{A.shape}, B{B.shape}")
    return A.T @ B if transpose_a else A @ B


@dataclass(frozen=True)
class SvdResult:
    U: np.ndarray
    singular_values: np.ndarray
    Vt: np.ndarray


def thin_svd(M):
    """Economy-size SVD with singular values in descending order.

    Backed by LAPACK ``gesdd`` through :func:`numpy.linalg.svd`. ``U`` is
    returned in column-major layout.
    """
    M = _as_matrix(M)
    if M.size == 0:
        raise ContractViolation("thin_svd: empty matrix")
    if not np.all(np.isfinite(M)):
        raise ContractViolation("thin_svd: non-finite entries")
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    return SvdResult(np.asfortranarray(U), s, Vt)


class NormalEquations:
    """Factorization of ``J.T @ J`` reusable across right-hand sides.

    Cholesky is tried first. If it breaks down, a symmetric-indefinite
    (Bunch-Kaufman) factorization is attempted before giving up. Either way a
    pivot smaller than ``PIVOT_TOL`` times the largest diagonal entry of the
    normal matrix raises :class:`RankDeficiencyError`.
    """

    def __init__(self, J):
        J = _as_matrix(J, "J")
        m, p = J.shape
        if m < p:
            raise ContractViolation(f"least squares needs rows >= cols, got {J.shape}")
        self.J = J
        H = J.T @ J
        scale = float(np.max(np.diag(H))) if p else 0.0
        if not np.isfinite(scale):
            raise ContractViolation("non-finite Jacobian")
        if scale <= 0.0:
            raise RankDeficiencyError("normal matrix is zero")
        tol = PIVOT_TOL * scale
        try:
            c, lower = scipy.linalg.cho_factor(H, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            self._chol = None
            lu, d, perm = scipy.linalg.ldl(H, lower=True, check_finite=False)
            pivots = np.abs(np.linalg.eigvalsh(d)) if p > 1 else np.abs(d.ravel())
            if pivots.min() < tol:
                raise RankDeficiencyError(
                    f"normal matrix singular: pivot {pivots.min():.3e} < {tol:.3e}"
                ) from None
            self._H = H
        else:
            pivot = np.min(np.diag(c)) ** 2
            if pivot < tol:
                raise RankDeficiencyError(f"normal matrix singular: pivot {pivot:.3e} < {tol:.3e}")
            self._chol = (c, lower)

    def solve_normal(self, g):
        """Solve ``(J.T J) x = g``."""
        if self._chol is not None:
            return scipy.linalg.cho_solve(self._chol, g, check_finite=False)
        return scipy.linalg.solve(self._H, g, assume_a="sym", check_finite=False)

    def step(self, r):
        """Return ``argmin_d ||J d + r||``."""
        return self.solve_normal(-(self.J.T @ r))


def least_squares_solve(J, r):
    """Gauss-Newton correction ``argmin_d ||J d + r||_2`` via the normal equations.

    Parameters
    ----------
    J : (m, p) array, m >= p
    r : (m,) array

    Returns
    -------
    (p,) array
    """
    J, r = _as_matrix(J, "J"), _as_vector(r, "r")
    if J.shape[0] != r.shape[0]:
        raise ContractViolation(f"least_squares_solve: J{J.shape} with r of length {r.shape[0]}")
    return NormalEquations(J).step(r)


def norm2(v):
    return float(np.linalg.norm(np.asarray(v, dtype=float).ravel()))


def norm_inf(v):
    v = np.asarray(v, dtype=float).ravel()
    return float(np.max(np.abs(v))) if v.size else 0.0
