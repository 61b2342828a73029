import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from leinertlab.errors import ResourceCapError
from leinertlab.schur import (
    FactorizationPair,
    SchurSymbol,
    factorization_upper_bound,
    hilbert_kernel,
    schur_apply,
    schur_norm_lower_bound,
    triangular_growth_sweep,
    upper_triangular_factorization,
)
from leinertlab.spectral import dense_norm

rng = np.random.default_rng(3)
T5 = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))


def test_apply_ones():
    assert np.array_equal(schur_apply(SchurSymbol.ones(5), T5), T5)


def test_apply_diagonal():
    assert np.array_equal(schur_apply(SchurSymbol.diagonal(5), T5), np.diag(np.diag(T5)))


def test_apply_upper_triangular():
    assert np.array_equal(schur_apply(SchurSymbol.upper_triangular(5), T5), np.triu(T5))


def test_apply_shape_mismatch():
    with pytest.raises(ValueError):
        schur_apply(SchurSymbol.ones(3), T5)


def test_rank_one_factorization():
    u = np.array([[0.6, 0.8]])
    v = np.array([[0.0, 1.0]])
    p = FactorizationPair(u, v)
    assert factorization_upper_bound(p) == pytest.approx(1.0)


def test_ones_factorization():
    n = 6
    e = np.zeros((n, 1))
    e[:, 0] = 1
    p = FactorizationPair(e, e, SchurSymbol.ones(n))
    assert factorization_upper_bound(p) == 1.0


@pytest.mark.parametrize("n", [1, 4, 16, 64])
def test_triangular_factorization(n):
    p = upper_triangular_factorization(n)
    assert np.allclose(p.symbol(), np.triu(np.ones((n, n))))
    assert factorization_upper_bound(p) == pytest.approx(np.sqrt(n))


def test_factorization_rejected_when_off():
    n = 4
    p = upper_triangular_factorization(n)
    with pytest.raises(ValueError):
        FactorizationPair(p.xi, p.eta + 1e-9, SchurSymbol.upper_triangular(n))
    with pytest.raises(ValueError):
        FactorizationPair(p.xi, p.eta, SchurSymbol.ones(n))


def test_lower_bound_ones():
    assert schur_norm_lower_bound(SchurSymbol.ones(5), T5) == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("n", [2, 5, 10])
def test_lower_bound_diagonal_vs_all_ones(n):
    assert schur_norm_lower_bound(SchurSymbol.diagonal(n), np.ones((n, n))) == pytest.approx(1 / n, rel=1e-9)


def test_lower_bound_zero_matrix():
    with pytest.raises(ValueError):
        schur_norm_lower_bound(SchurSymbol.ones(3), np.zeros((3, 3)))


def test_triangular_hilbert_ratio_dense_oracle():
    n = 256
    H = hilbert_kernel(n)
    got = schur_norm_lower_bound(SchurSymbol.upper_triangular(n), H)
    assert got == pytest.approx(dense_norm(np.triu(H)) / dense_norm(H), rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_sandwich_consistency(n, k, seed):
    g = np.random.default_rng(seed)
    xi = g.standard_normal((n, k)) + 1j * g.standard_normal((n, k))
    eta = g.standard_normal((n, k)) + 1j * g.standard_normal((n, k))
    p = FactorizationPair(xi, eta)
    sigma = SchurSymbol(p.symbol())
    T = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    assert schur_norm_lower_bound(sigma, T) <= factorization_upper_bound(p) + 1e-8


@given(
    arrays(np.float64, (4, 4), elements=st.floats(-3, 3)),
    arrays(np.float64, (4, 4), elements=st.floats(-3, 3)),
)
def test_max_entry_contraction(sig, T):
    out = schur_apply(SchurSymbol(sig), T)
    assert np.abs(out).max() <= np.abs(sig).max() * np.abs(T).max()


@given(
    arrays(np.float64, (3, 3), elements=st.floats(-3, 3)),
    arrays(np.float64, (3, 3), elements=st.floats(-3, 3)),
    st.floats(-2, 2),
)
def test_apply_linear(A, B, c):
    s = SchurSymbol.upper_triangular(3)
    assert np.allclose(schur_apply(s, A + c * B), schur_apply(s, A) + c * schur_apply(s, B))


def test_hilbert_kernel_shape():
    H = hilbert_kernel(3)
    assert np.array_equal(H, [[0, -1, -0.5], [1, 0, -1], [0.5, 1, 0]])


def test_sweep_small_dims():
    one, two = triangular_growth_sweep([1, 2])
    assert one.skipped and one.rho is None
    assert two.rho == pytest.approx(1.0)
    assert two.norm_H == pytest.approx(1.0)


def test_sweep_monotone_and_bounded():
    rows = triangular_growth_sweep([8, 16, 32, 64, 128])
    rhos = [r.rho for r in rows]
    assert rhos == sorted(rhos)
    assert all(r.norm_H <= np.pi + 1e-6 for r in rows)


def test_sweep_arguments():
    with pytest.raises(ValueError):
        triangular_growth_sweep([16, 8])
    with pytest.raises(ResourceCapError):
        triangular_growth_sweep([8, 64], cap=32)
