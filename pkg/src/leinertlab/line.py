"""Interpolation and complementing projection on the real line with E = Z.

The bump is the triangle ``u(x) = max(0, 1 - |x|/delta)``, the autocorrelation
of the normalized indicator of ``(-delta/2, delta/2)``.  Its transform
``u_hat(w) = delta * sinc^2(w delta / 2)`` is nonnegative with
``(1/2pi) int u_hat = u(0) = 1``.

Fourier convention: ``f_hat(w) = int f(x) e^{-iwx} dx`` and
``f(x) = (1/2pi) int f_hat(w) e^{iwx} dw``; the A-norm of ``f`` is
``(1/2pi) int |f_hat|``.

A ``SampledLineFunction`` is the sum of two parts:

* a band-limited part given by samples of its transform on the grid
  ``w_j = j * 2pi/M``, ``-K M <= j < K M`` (so ``Omega = 2 pi K``), and
* a lattice part ``sum_n c_n u(x - n)`` whose transform ``u_hat(w) C(w)`` with
  ``C(w) = sum_n c_n e^{-inw}`` is kept in closed form.

``u_hat`` decays only like ``w^-2`` so no practical grid captures its tail.
The lattice part is therefore integrated period by period: over any
``[2pi k, 2pi (k+1))`` the factor ``C`` repeats, and the sum of ``u_hat`` over
all periods is the finite trigonometric sum ``sum_m u(m) e^{-imw}`` (Poisson
summation), identically 1 for ``delta <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import GridResolutionError

DEFAULT_DELTA = 0.5
DEFAULT_M = 4096
DEFAULT_K = 8


def bump(x, delta: float = DEFAULT_DELTA):
    return np.maximum(0.0, 1.0 - np.abs(np.asarray(x, dtype=float)) / delta)


def bump_hat(w, delta: float = DEFAULT_DELTA):
    return delta * np.sinc(np.asarray(w, dtype=float) * delta / (2 * np.pi)) ** 2


def bump_periodized(w, delta: float = DEFAULT_DELTA):
    """``sum_k u_hat(w + 2 pi k)``, evaluated as ``sum_m u(m) e^{-imw}``."""
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w, dtype=complex)
    for m in range(-math.ceil(delta), math.ceil(delta) + 1):
        um = float(bump(m, delta))
        if um:
            out += um * np.exp(-1j * m * w)
    return out


def _check_delta(delta):
    if not 0 < delta <= 0.5:
        raise ValueError(f"half-width must satisfy 0 < delta <= 1/2, got {delta}")


# --- containers ------------------------------------------------------------

class IntegerSequence:
    """Finitely supported complex sequence on Z."""

    def __init__(self, values: Mapping[int, complex] | None = None):
        self.values = {int(n): complex(v) for n, v in (values or {}).items() if v != 0}

    @classmethod
    def from_array(cls, start: int, arr) -> "IntegerSequence":
        return cls({start + i: v for i, v in enumerate(arr)})

    def __getitem__(self, n):
        return self.values.get(n, 0j)

    def __len__(self):
        return len(self.values)

    @property
    def support(self):
        return sorted(self.values)

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.values.values()))

    def __sub__(self, other):
        keys = set(self.values) | set(other.values)
        return IntegerSequence({n: self[n] - other[n] for n in keys})


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid with spacing ``2 pi / M`` on ``[-2 pi K, 2 pi K)``."""

    M: int = DEFAULT_M
    K: int = DEFAULT_K

    def __post_init__(self):
        if self.M < 2 or self.K < 1:
            raise ValueError("need M >= 2 and K >= 1")

    @classmethod
    def from_header(cls, omega: float, domega: float) -> "FrequencyGrid":
        M = 2 * np.pi / domega
        K = omega / (2 * np.pi)
        if abs(M - round(M)) > 1e-9 * M or abs(K - round(K)) > 1e-9 * max(K, 1):
            raise GridResolutionError(
                "grid needs 2pi/domega and omega/2pi to be integers, "
                f"got {M:.12g} and {K:.12g}"
            )
        return cls(int(round(M)), int(round(K)))

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.M

    @property
    def omega(self) -> float:
        return 2 * np.pi * self.K

    @property
    def size(self) -> int:
        return 2 * self.K * self.M

    def points(self) -> np.ndarray:
        return np.arange(-self.K * self.M, self.K * self.M) * self.spacing

    def integer_window(self) -> range:
        """Integers whose values the grid resolves without aliasing."""
        return range(-(self.M // 2), self.M - self.M // 2)


@dataclass
class SampledLineFunction:
    grid: FrequencyGrid
    band: np.ndarray | None = None
    lattice: IntegerSequence = field(default_factory=IntegerSequence)
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        if self.band is None:
            self.band = np.zeros(self.grid.size, dtype=complex)
        else:
            self.band = np.asarray(self.band, dtype=complex)
            if self.band.shape != (self.grid.size,):
                raise ValueError(f"expected {self.grid.size} samples, got {self.band.shape}")
        _check_delta(self.delta)
        win = self.grid.integer_window()
        outside = [n for n in self.lattice.values if n not in win]
        if outside:
            raise GridResolutionError(
                f"lattice coefficients at {outside[:3]} fall outside the resolved window "
                f"[{win.start}, {win.stop}); increase M"
            )

    # folded views: row k holds the period [2pi(k-K), 2pi(k-K+1))
    def _folded_band(self):
        return self.band.reshape(2 * self.grid.K, self.grid.M)

    def _folded_bump(self):
        return bump_hat(self.grid.points(), self.delta).reshape(2 * self.grid.K, self.grid.M)

    def _lattice_dft(self):
        M = self.grid.M
        arr = np.zeros(M, dtype=complex)
        for n, c in self.lattice.values.items():
            arr[n % M] += c
        return np.fft.fft(arr)

    def spectrum_samples(self) -> np.ndarray:
        """Full transform ``f_hat`` on the grid points."""
        C = self._lattice_dft()
        return (self._folded_band() + self._folded_bump() * C).ravel()

    def values_at_integers(self) -> IntegerSequence:
        """``f(n)`` for every n in the grid's integer window, computed in the
        frequency domain from the folded spectrum."""
        M = self.grid.M
        C = self._lattice_dft()
        per = bump_periodized(np.arange(M) * self.grid.spacing, self.delta)
        total = self._folded_band().sum(axis=0) + C * per
        g = np.fft.ifft(total)
        win = self.grid.integer_window()
        return IntegerSequence({n: g[n % M] for n in win})

    def evaluate(self, x) -> np.ndarray:
        """Direct reconstruction at arbitrary points (slow for many points)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        w = self.grid.points()
        out = np.zeros(x.shape, dtype=complex)
        if self.band.any():
            out += (np.exp(1j * np.outer(x, w)) @ self.band) / self.grid.M
        for n, c in self.lattice.values.items():
            out += c * bump(x - n, self.delta)
        return out

    def _combine(self, other, sign):
        if self.grid != other.grid:
            raise ValueError("grids differ")
        if self.lattice.values and other.lattice.values and self.delta != other.delta:
            raise ValueError("lattice parts use different bumps")
        delta = self.delta if self.lattice.values else other.delta
        keys = set(self.lattice.values) | set(other.lattice.values)
        lat = IntegerSequence({n: self.lattice[n] + sign * other.lattice[n] for n in keys})
        return SampledLineFunction(self.grid, self.band + sign * other.band, lat, delta)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)


# --- A-norm ----------------------------------------------------------------

@dataclass(frozen=True)
class ANorm:
    value: float
    inside: float  # quadrature over [-Omega, Omega)
    tail: float  # lattice part beyond Omega, summed per period

    def __float__(self):
        return self.value


def a_norm_parts(f: SampledLineFunction) -> ANorm:
    M = f.grid.M
    C = f._lattice_dft()
    uh = f._folded_bump()
    inside = float(np.abs(f._folded_band() + uh * C).sum() / M)
    if f.lattice.values:
        per = bump_periodized(np.arange(M) * f.grid.spacing, f.delta).real
        outer = np.clip(per - uh.sum(axis=0), 0.0, None)
        tail = float((np.abs(C) * outer).sum() / M)
    else:
        tail = 0.0
    return ANorm(inside + tail, inside, tail)


def a_norm(f: SampledLineFunction) -> float:
    return a_norm_parts(f).value


# --- operations ------------------------------------------------------------

def check_uniformly_discrete(points: Iterable[float], delta: float) -> bool:
    """True iff the open intervals ``(p - delta, p + delta)`` are disjoint."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    pts = sorted(float(p) for p in points)
    return all(b - a >= 2 * delta for a, b in zip(pts, pts[1:]))


def ons_gram(E: Iterable[int], delta: float = DEFAULT_DELTA) -> np.ndarray:
    """Gram matrix of the translates ``lambda(h) xi``: entry ``u(h1 - h2)``."""
    _check_delta(delta)
    E = np.asarray(list(E), dtype=float)
    return bump(E[:, None] - E[None, :], delta)


def conjugation_invariant(delta: float, shifts: Iterable[float], points: Iterable[float]) -> bool:
    """``u(h + x - h) == u(x)``; holds for every abelian group."""
    pts = list(points)
    return all(
        math.isclose(float(bump((h + x) - h, delta)), float(bump(x, delta)), abs_tol=1e-12)
        for h in shifts
        for x in pts
    )


def gamma_interpolate(
    phi: IntegerSequence | Mapping[int, complex],
    delta: float = DEFAULT_DELTA,
    grid: FrequencyGrid | None = None,
) -> SampledLineFunction:
    """``x -> sum_n phi(n) u(x - n)``; agrees with ``phi`` on the integers."""
    _check_delta(delta)
    if not isinstance(phi, IntegerSequence):
        phi = IntegerSequence(phi)
    return SampledLineFunction(grid or FrequencyGrid(), None, phi, delta)


def restrict_to_integers(v: SampledLineFunction) -> IntegerSequence:
    return v.values_at_integers()


def complement_projection(v: SampledLineFunction, delta: float | None = None) -> SampledLineFunction:
    """``Pv = v - Gamma(v|_Z)``, which vanishes on every resolved integer."""
    if delta is None:
        delta = v.delta
    if v.lattice.values and delta != v.delta:
        raise ValueError("projection bump differs from the function's lattice bump")
    restricted = v.values_at_integers()
    return v - gamma_interpolate(restricted, delta, v.grid)


def random_bandlimited(
    grid: FrequencyGrid,
    rng: np.random.Generator,
    terms: int = 8,
    spread: float = 20.0,
    width: float = 4.0,
    delta: float = DEFAULT_DELTA,
) -> SampledLineFunction:
    """Sum of Gaussian pulses at random centres in ``[-spread, spread]``;
    the transform carries the envelope ``exp(-w^2 / (2 width^2))``."""
    w = grid.points()
    centres = rng.uniform(-spread, spread, terms)
    amps = (rng.standard_normal(terms) + 1j * rng.standard_normal(terms)) / np.sqrt(2)
    band = np.exp(-(w**2) / (2 * width**2)) * (amps[None, :] * np.exp(-1j * np.outer(w, centres))).sum(axis=1)
    return SampledLineFunction(grid, band, delta=delta)
