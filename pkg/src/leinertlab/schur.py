"""Schur multipliers on finite matrices.

A symbol ``sigma`` acts entrywise, ``S_sigma T = [sigma(i,j) T(i,j)]``.  Any
factorization ``sigma(i,j) = <xi(j) | eta(i)>`` bounds the multiplier norm by
``sup ||xi|| * sup ||eta||``; any nonzero test matrix bounds it from below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceCapError
from .spectral import DEFAULT_TOL, power_norm

DEFAULT_DIM_CAP = 4096
FACTORIZATION_ATOL = 1e-12


@dataclass(frozen=True)
class SchurSymbol:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"symbol must be square, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def ones(cls, n):
        return cls(np.ones((n, n)))

    @classmethod
    def diagonal(cls, n):
        return cls(np.eye(n))

    @classmethod
    def upper_triangular(cls, n):
        """1 where ``i <= j`` (diagonal kept), 0 below."""
        return cls(np.triu(np.ones((n, n))))


class FactorizationPair:
    """Vectors ``xi[j]``, ``eta[i]`` (rows of two arrays) with
    ``sigma(i, j) = <xi(j) | eta(i)> = sum_k conj(xi[j, k]) eta[i, k]``."""

    def __init__(self, xi, eta, symbol: SchurSymbol | None = None, atol: float = FACTORIZATION_ATOL):
        xi = np.atleast_2d(np.asarray(xi, dtype=complex))
        eta = np.atleast_2d(np.asarray(eta, dtype=complex))
        if xi.shape[1] != eta.shape[1]:
            raise ValueError("xi and eta must live in the same space")
        self.xi = xi
        self.eta = eta
        if symbol is not None:
            if symbol.values.shape != (eta.shape[0], xi.shape[0]):
                raise ValueError("factorization does not match symbol shape")
            err = np.max(np.abs(self.symbol() - symbol.values), initial=0.0)
            if err > atol:
                raise ValueError(f"factorization misses symbol by {err:.3g}")

    def symbol(self) -> np.ndarray:
        return self.eta @ self.xi.conj().T


def schur_apply(sigma: SchurSymbol, T) -> np.ndarray:
    T = np.asarray(T)
    if T.shape != sigma.values.shape:
        raise ValueError(f"dimension mismatch: symbol {sigma.values.shape}, matrix {T.shape}")
    return sigma.values * T


def factorization_upper_bound(p: FactorizationPair) -> float:
    return float(np.linalg.norm(p.xi, axis=1).max() * np.linalg.norm(p.eta, axis=1).max())


def schur_norm_lower_bound(sigma: SchurSymbol, T, tol: float = DEFAULT_TOL) -> float:
    T = np.asarray(T)
    if not T.any():
        raise ValueError("test matrix must be nonzero")
    return power_norm(schur_apply(sigma, T), tol).value / power_norm(T, tol).value


def upper_triangular_factorization(n: int) -> FactorizationPair:
    """Step-function factorization of the ``i <= j`` symbol in dimension n:
    ``eta(i) = e_i`` and ``xi(j) = e_1 + ... + e_j``.

    Its bound is ``sqrt(n)``, far from tight, but it is valid for every n.
    """
    eta = np.eye(n)
    xi = np.tril(np.ones((n, n)))
    return FactorizationPair(xi, eta, SchurSymbol.upper_triangular(n))


def hilbert_kernel(n: int) -> np.ndarray:
    """``H(j, k) = 1/(j - k)`` off the diagonal, 0 on it."""
    j = np.arange(n)
    diff = (j[:, None] - j[None, :]).astype(float)
    with np.errstate(divide="ignore"):
        H = np.where(diff != 0, 1.0 / diff, 0.0)
    return H


@dataclass(frozen=True)
class GrowthRow:
    n: int
    norm_H: float | None
    norm_TriH: float | None
    rho: float | None

    @property
    def skipped(self) -> bool:
        return self.rho is None


def triangular_growth_sweep(dims, tol: float = DEFAULT_TOL, cap: int = DEFAULT_DIM_CAP) -> list[GrowthRow]:
    """Ratio ``||Tri(H_n)|| / ||H_n||`` for each n; n = 1 is skipped (H_1 = 0)."""
    dims = list(dims)
    if dims != sorted(dims):
        raise ValueError("dims must be sorted ascending")
    rows = []
    for n in dims:
        if n < 1:
            raise ValueError("dimensions must be positive")
        if n > cap:
            raise ResourceCapError("Schur sweep dimension", n, cap)
        H = hilbert_kernel(n)
        if not H.any():
            rows.append(GrowthRow(n, None, None, None))
            continue
        norm_h = power_norm(H, tol).value
        norm_t = power_norm(np.triu(H), tol).value
        rows.append(GrowthRow(n, float(norm_h), float(norm_t), float(norm_t / norm_h)))
    return rows
