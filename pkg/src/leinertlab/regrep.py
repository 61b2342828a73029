"""Finitely supported coefficient functions on free groups and the matching
left-convolution operators, compressed to Cayley balls.

For ``a`` supported on a finite set the operator ``sum_h a(h) (x) lambda(h)``
acts on ``C^d (x) l2(F_N)``; its compression to ``l2(B_r)`` has block
``a(g h^-1)`` at position ``(g, h)``.  Compression norms are lower bounds for
the true norm and increase with ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .errors import ResourceCapError
from .freegroup import CayleyBall, GroupElementSet, Word, _mul, enumerate_ball
from .spectral import DEFAULT_TOL, NormEstimate, power_norm

DEFAULT_ENTRY_CAP = 50_000_000
DEFAULT_SEED = 20_240_601


class CoefficientFunction:
    """Map from words to scalars or ``d x d`` complex matrices.

    Zero values are dropped on construction, so ``support`` is exactly the set
    of stored keys.
    """

    def __init__(self, values: Mapping[Word, object] | None = None, block_dim: int | None = None):
        vals: dict[Word, object] = {}
        d = block_dim
        for w, x in (values or {}).items():
            if not isinstance(w, Word):
                raise TypeError(f"keys must be Word, got {type(w).__name__}")
            if np.ndim(x) == 0:
                x = complex(x)
                xd = 1
                if x == 0:
                    continue
            else:
                x = np.array(x, dtype=complex)
                if x.ndim != 2 or x.shape[0] != x.shape[1]:
                    raise ValueError("matrix values must be square")
                xd = x.shape[0]
                if not x.any():
                    continue
                x.setflags(write=False)
            if d is None:
                d = xd
            elif xd != d:
                raise ValueError(f"mixed block dimensions {d} and {xd}")
            vals[w] = x
        self.block_dim = 1 if d is None else d
        self.values = vals

    @property
    def is_scalar(self) -> bool:
        return all(np.ndim(x) == 0 for x in self.values.values())

    @property
    def support(self) -> frozenset[Word]:
        return frozenset(self.values)

    def __getitem__(self, w: Word):
        if w in self.values:
            return self.values[w]
        return 0j if self.is_scalar else np.zeros((self.block_dim, self.block_dim), complex)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, CoefficientFunction):
            return NotImplemented
        if self.values.keys() != other.values.keys():
            return False
        return all(np.array_equal(self.values[w], other.values[w]) for w in self.values)

    def __repr__(self):
        body = ", ".join(f"{w}: {x!r}" for w, x in self.values.items())
        return f"CoefficientFunction({{{body}}}, block_dim={self.block_dim})"

    def block(self, w: Word) -> np.ndarray:
        x = self[w]
        return np.array([[x]], dtype=complex) if np.ndim(x) == 0 else np.asarray(x)

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.values), default=0)

    @property
    def max_generator(self) -> int:
        return max((w.max_generator for w in self.values), default=0)

    def l1_bound(self) -> float:
        """Triangle-inequality upper bound: sum of spectral norms of the values."""
        return float(sum(np.linalg.norm(self.block(w), 2) for w in self.values))


def delta(w: Word, value=1.0) -> CoefficientFunction:
    return CoefficientFunction({w: value})


def pointwise_product(v: CoefficientFunction, T: CoefficientFunction) -> CoefficientFunction:
    """Module action of a scalar function ``v`` on ``T = sum c(h) lambda(h)``:
    ``v . T = sum v(h) c(h) lambda(h)``."""
    if not v.is_scalar:
        raise ValueError("the acting function must be scalar-valued")
    return CoefficientFunction(
        {w: v.values[w] * c for w, c in T.values.items() if w in v.values},
        block_dim=T.block_dim,
    )


def vn_restrict(T: CoefficientFunction, E) -> CoefficientFunction:
    """Keep the coefficients of ``T`` at points of ``E``, zero the rest."""
    members = E if isinstance(E, (set, frozenset, GroupElementSet)) else set(E)
    return CoefficientFunction(
        {w: c for w, c in T.values.items() if w in members}, block_dim=T.block_dim
    )


# --- compressions ----------------------------------------------------------

@dataclass
class SparseConvolutionOperator:
    ball: CayleyBall
    block_dim: int
    matrix: sp.spmatrix

    @property
    def shape(self):
        return self.matrix.shape

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def norm(self, tol: float = DEFAULT_TOL) -> NormEstimate:
        return operator_norm(self, tol)


def build_compression(
    a: CoefficientFunction,
    radius: int,
    num_generators: int | None = None,
    cap: int = DEFAULT_ENTRY_CAP,
    ball: CayleyBall | None = None,
) -> SparseConvolutionOperator:
    """Compress ``sum_h a(h) (x) lambda(h)`` to ``C^d (x) l2(B_r)``.

    ``num_generators`` defaults to the largest generator index used by ``a``
    (at least 1).
    """
    N = num_generators or max(a.max_generator, 1)
    if a.max_generator > N:
        raise ValueError(f"support uses generator x{a.max_generator} outside F_{N}")
    if ball is None:
        ball = enumerate_ball(N, radius)
    d = a.block_dim
    nb = len(ball)
    work = d * d * nb * max(len(a), 1)
    if work > cap:
        raise ResourceCapError("compression entries", work, cap)

    index = ball.index
    keys = ball.keys
    rows, cols, blocks = [], [], []
    for j, (s, val) in enumerate(a.values.items()):
        ss = s.syms
        # column k maps to row s.k when s.k stays inside the ball
        for col, k in enumerate(keys):
            row = index.get(_mul(ss, k))
            if row is not None:
                rows.append(row)
                cols.append(col)
                blocks.append(j)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    blocks = np.asarray(blocks, dtype=np.int64)

    if d == 1:
        vals = np.array([complex(x) for x in a.values.values()])
        data = vals[blocks] if len(blocks) else np.zeros(0, complex)
        if not np.iscomplexobj(data) or not np.any(data.imag):
            data = data.real
        M = sp.csr_matrix((data, (rows, cols)), shape=(nb, nb))
    else:
        stack = np.array([np.asarray(x) for x in a.values.values()]).reshape(-1, d, d)
        order = np.lexsort((cols, rows))
        rows, cols, blocks = rows[order], cols[order], blocks[order]
        indptr = np.searchsorted(rows, np.arange(nb + 1))
        data = stack[blocks] if len(blocks) else np.zeros((0, d, d), complex)
        M = sp.bsr_matrix((data, cols, indptr), shape=(nb * d, nb * d), blocksize=(d, d))
    return SparseConvolutionOperator(ball, d, M)


def operator_norm(M, tol: float = DEFAULT_TOL) -> NormEstimate:
    mat = M.matrix if isinstance(M, SparseConvolutionOperator) else M
    if sp.issparse(mat):
        mat = mat.tocsr()
    return power_norm(mat, tol)


def row_column_bounds(a: CoefficientFunction) -> tuple[float, float]:
    """``(||sum a a*||^1/2, ||sum a* a||^1/2)``, i.e. ``(row, col)``."""
    d = a.block_dim
    row = np.zeros((d, d), complex)
    col = np.zeros((d, d), complex)
    for w in a.values:
        b = a.block(w)
        row += b @ b.conj().T
        col += b.conj().T @ b
    return (
        float(np.sqrt(np.linalg.eigvalsh(row)[-1].clip(min=0))),
        float(np.sqrt(np.linalg.eigvalsh(col)[-1].clip(min=0))),
    )


def haagerup_sup(phi: CoefficientFunction) -> float:
    if not phi.is_scalar:
        raise ValueError("phi must be scalar-valued")
    return max((abs(x) * (1 + len(w)) ** 2 for w, x in phi.values.items()), default=0.0)


def haagerup_bound(phi: CoefficientFunction) -> float:
    """Multiplier-norm bound ``2 sup |phi(g)| (1 + |g|)^2``."""
    return 2 * haagerup_sup(phi)


# --- constant estimates ----------------------------------------------------

@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    seed: int
    trials: int
    block_dim: int
    radius: int
    worst_norm: float
    worst_row: float
    worst_col: float


def random_coefficients(E, d: int, rng: np.random.Generator) -> CoefficientFunction:
    vals = {}
    for w in E:
        z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        vals[w] = z if d > 1 else complex(z[0, 0])
    return CoefficientFunction(vals, block_dim=d)


def leinert_constant_estimate(
    E,
    trials: int,
    d: int,
    radius: int,
    seed: int = DEFAULT_SEED,
    coefficients: str = "gaussian",
    num_generators: int | None = None,
    tol: float = DEFAULT_TOL,
) -> ConstantEstimate:
    """Largest observed ratio of compressed norm to ``max(row, col)``.

    With ``coefficients="uniform"`` every trial uses ``a(h) = I_d``; otherwise
    entries are complex Gaussians drawn from ``seed``.
    """
    E = list(E)
    if radius < max((len(w) for w in E), default=0):
        raise ValueError("radius must cover every element of E")
    N = num_generators or max(max((w.max_generator for w in E), default=1), 1)
    ball = enumerate_ball(N, radius)
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(trials):
        if coefficients == "uniform":
            a = CoefficientFunction(
                {w: (np.eye(d) if d > 1 else 1.0) for w in E}, block_dim=d
            )
        elif coefficients == "gaussian":
            a = random_coefficients(E, d, rng)
        else:
            raise ValueError(f"unknown coefficient model {coefficients!r}")
        norm = operator_norm(build_compression(a, radius, N, ball=ball), tol).value
        row, col = row_column_bounds(a)
        ratio = norm / max(row, col)
        if best is None or ratio > best[0]:
            best = (ratio, norm, row, col)
    if best is None:
        raise ValueError("trials must be >= 1")
    return ConstantEstimate(best[0], seed, trials, d, radius, *best[1:])
