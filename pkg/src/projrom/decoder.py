"""Trial manifolds: maps from reduced coordinates to full-state increments."""

from typing import Protocol

import numpy as np

from .errors import ContractViolation


class Decoder(Protocol):
    full_size: int
    reduced_size: int

    def apply(self, xi: np.ndarray) -> np.ndarray: ...

    def jacobian(self, xi: np.ndarray) -> np.ndarray: ...


class LinearDecoder:
    """Affine trial subspace ``xi -> basis @ xi``.

    The Jacobian is the basis itself and is returned as the same array on
    every call.
    """

    def __init__(self, basis):
        basis = np.asfortranarray(np.asarray(basis, dtype=float))
        if basis.ndim != 2:
            raise ContractViolation(f"basis must be 2-D, got shape {basis.shape}")
        n, p = basis.shape
        if p < 1 or p > n:
            raise ContractViolation(f"basis must be tall with at least one column, got {basis.shape}")
        basis.setflags(write=False)
        self.basis = basis
        self.full_size = n
        self.reduced_size = p

    def apply(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (self.reduced_size,):
            raise ContractViolation(f"reduced state of shape {xi.shape}, expected ({self.reduced_size},)")
        return self.basis @ xi

    def jacobian(self, xi=None):
        return self.basis

    def restrict(self, rows):
        """Decoder for the subset `rows` of the full state (sample-mesh use)."""
        return LinearDecoder(self.basis[np.asarray(rows)])


def reconstruct(decoder, x_ref, xi):
    """Full state ``x_ref + g(xi)``."""
    x_ref = np.asarray(x_ref, dtype=float)
    if x_ref.shape != (decoder.full_size,):
        raise ContractViolation(f"reference state of shape {x_ref.shape}, expected ({decoder.full_size},)")
    return x_ref + decoder.apply(xi)


def project_initial_condition(basis, x0, x_ref, tol=1e-10):
    """Orthogonal projection ``basis.T @ (x0 - x_ref)``; the basis must be orthonormal."""
    basis = np.asarray(basis, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    if basis.ndim != 2 or x0.shape != (basis.shape[0],) or x_ref.shape != x0.shape:
        raise ContractViolation("dimension mismatch between basis, x0 and x_ref")
    gram = basis.T @ basis
    defect = np.max(np.abs(gram - np.eye(basis.shape[1])))
    if defect > tol:
        raise ContractViolation(f"basis is not orthonormal (max |PhiT Phi - I| = {defect:.2e})")
    return basis.T @ (x0 - x_ref)
