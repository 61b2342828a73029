"""Largest singular value by power iteration on M^H M.

One engine serves both the sparse convolution compressions and the dense
Schur-multiplier matrices so there is a single numerics path to validate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10_000
_FLUSH = 1e-200


@dataclass(frozen=True)
class NormEstimate:
    value: float
    converged: bool
    iterations: int
    tol: float

    def __float__(self):
        return self.value


def start_vector(n: int) -> np.ndarray:
    # all-ones plus a fixed perturbation so no eigenvector is missed by symmetry
    v = np.ones(n) + 1e-3 * np.sin(np.arange(1, n + 1, dtype=float))
    return v / np.linalg.norm(v)


def power_norm(M, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> NormEstimate:
    """Estimate ``||M||_2`` for a dense array or scipy sparse matrix.

    Iterates on ``A = M^H M``; the Rayleigh quotients increase monotonically to
    ``||M||^2``.  Stops when the relative change of the estimate is below
    ``tol`` on two consecutive steps and the geometric extrapolation of the
    remaining increments is below ``tol`` as well.  A run that hits
    ``max_iter`` returns its last iterate flagged ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = M.shape[1]
    if n == 0 or M.shape[0] == 0:
        return NormEstimate(0.0, True, 0, tol)
    A = M.conj().T @ M
    if sp.issparse(A):
        A = A.tocsr()
    v = start_vector(n).astype(np.result_type(A.dtype, float))
    sigma = 0.0
    step = 0.0
    calm = 0
    for it in range(1, max_iter + 1):
        w = A @ v
        theta = float(np.vdot(v, w).real)
        if theta <= 0.0:
            # start vector in the kernel of M; only possible for M == 0
            return NormEstimate(0.0, True, it, tol)
        new = float(np.sqrt(theta))
        v = w / np.linalg.norm(w)
        # decaying components otherwise turn subnormal and stall the arithmetic
        v[np.abs(v) < _FLUSH] = 0.0
        prev_step, step = step, new - sigma
        sigma = new
        if abs(step) > tol * sigma:
            calm = 0
            continue
        calm += 1
        if calm < 2:
            continue
        ratio = step / prev_step if prev_step > 0 else 0.0
        if abs(step) <= 1e-14 * sigma or not 0.0 < ratio < 1.0:
            return NormEstimate(sigma, True, it, tol)
        if step * ratio / (1.0 - ratio) <= tol * sigma:
            return NormEstimate(sigma, True, it, tol)
    logger.warning("power iteration did not converge in %d steps (sigma=%g)", max_iter, sigma)
    return NormEstimate(sigma, False, max_iter, tol)


def dense_norm(A) -> float:
    """Reference value from a full SVD."""
    A = np.asarray(A.toarray() if hasattr(A, "toarray") else A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])
