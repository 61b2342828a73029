import numpy as np
import pytest
from scipy.integrate import quad

from leinertlab.errors import GridResolutionError
from leinertlab.line import (
    FrequencyGrid,
    IntegerSequence,
    SampledLineFunction,
    a_norm,
    a_norm_parts,
    bump,
    bump_hat,
    check_uniformly_discrete,
    complement_projection,
    conjugation_invariant,
    gamma_interpolate,
    ons_gram,
    random_bandlimited,
    restrict_to_integers,
)

GRID = FrequencyGrid(512, 4)


def test_uniformly_discrete_examples():
    assert check_uniformly_discrete([0, 1, 2], 0.4)
    assert not check_uniformly_discrete([0, 0.5], 0.4)
    assert check_uniformly_discrete(range(100), 0.5)


def test_ons_gram_examples():
    assert np.array_equal(ons_gram([0, 1, 2], 0.5), np.eye(3))
    assert np.array_equal(ons_gram([0], 0.2), [[1.0]])
    assert np.array_equal(ons_gram([0, 1], 0.3), np.eye(2))
    assert np.array_equal(ons_gram([0, 3, 7, 20], 0.5), np.eye(4))


@pytest.mark.parametrize("delta", [0.1, 0.25, 0.5])
def test_bump_transform_matches_quadrature(delta):
    for w in (0.0, 1.3, 7.0, 40.0):
        re, _ = quad(lambda x: bump(x, delta) * np.cos(w * x), -delta, delta)
        assert bump_hat(w, delta) == pytest.approx(re, abs=1e-12)
    assert np.all(bump_hat(np.linspace(-200, 200, 4001), delta) >= 0)


def test_bump_is_autocorrelation_of_indicator():
    delta = 0.5
    xs = np.linspace(-0.7, 0.7, 15)
    # overlap of (-d/2, d/2) and its shift by x, normalized by d
    overlap = np.clip(delta - np.abs(xs), 0, None) / delta
    assert np.allclose(bump(xs, delta), overlap)


def test_interpolate_single_bump():
    f = gamma_interpolate({0: 1.0}, 0.5, GRID)
    vals = restrict_to_integers(f)
    assert vals[0] == pytest.approx(1.0, abs=1e-12)
    assert vals[1] == pytest.approx(0.0, abs=1e-12) and vals[-1] == pytest.approx(0.0, abs=1e-12)


def test_interpolate_two_points():
    f = gamma_interpolate({0: 1.0, 1: -1.0}, 0.5, GRID)
    vals = restrict_to_integers(f)
    for n in GRID.integer_window():
        expect = {0: 1.0, 1: -1.0}.get(n, 0.0)
        assert abs(vals[n] - expect) <= 1e-12


def test_interpolate_random_matches_time_domain():
    rng = np.random.default_rng(11)
    phi = IntegerSequence.from_array(-25, rng.standard_normal(50))
    f = gamma_interpolate(phi, 0.4, GRID)
    vals = restrict_to_integers(f)
    assert max(abs(vals[n] - phi[n]) for n in GRID.integer_window()) <= 1e-8
    xs = np.linspace(-30, 30, 121) + 0.123
    direct = sum(phi[n] * bump(xs - n, 0.4) for n in phi.support)
    assert np.allclose(f.evaluate(xs), direct, atol=1e-12)


def test_a_norm_of_bump():
    f = gamma_interpolate({0: 1.0}, 0.5)
    assert a_norm(f) == pytest.approx(1.0, abs=1e-9)
    parts = a_norm_parts(f)
    assert parts.inside + parts.tail == pytest.approx(parts.value)


def test_a_norm_zero():
    assert a_norm(SampledLineFunction(GRID)) == 0.0


def test_interpolation_contracts():
    rng = np.random.default_rng(5)
    for _ in range(20):
        z = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        phi = IntegerSequence.from_array(-25, z / np.linalg.norm(z))
        assert a_norm(gamma_interpolate(phi, 0.5)) <= 1 + 1e-6


def test_band_part_a_norm_matches_quadrature():
    # f = Gaussian, f_hat(w) = sqrt(2 pi) exp(-w^2/2) >= 0, so ||f||_A = f(0) = 1
    w = GRID.points()
    f = SampledLineFunction(GRID, np.sqrt(2 * np.pi) * np.exp(-(w**2) / 2))
    assert a_norm(f) == pytest.approx(1.0, abs=1e-9)
    assert f.evaluate([0.0])[0] == pytest.approx(1.0, abs=1e-9)


def test_projection_of_bump_is_zero():
    P = complement_projection(gamma_interpolate({0: 1.0}, 0.5, GRID))
    assert a_norm(P) <= 1e-12


def test_projection_fixes_functions_vanishing_on_integers():
    rng = np.random.default_rng(2)
    Pv = complement_projection(random_bandlimited(GRID, rng))
    PPv = complement_projection(Pv)
    assert a_norm(PPv - Pv) <= 1e-8


def test_projection_laws_random():
    rng = np.random.default_rng(9)
    for _ in range(5):
        v = random_bandlimited(GRID, rng)
        Pv = complement_projection(v)
        assert max(abs(x) for x in restrict_to_integers(Pv).values.values()) <= 1e-8
        assert a_norm(complement_projection(Pv) - Pv) <= 1e-8
        assert a_norm(Pv) <= 2 * a_norm(v) + 1e-8


def test_integer_values_match_direct_reconstruction():
    rng = np.random.default_rng(4)
    v = random_bandlimited(GRID, rng, spread=10)
    ns = np.arange(-12, 13)
    from_freq = np.array([restrict_to_integers(v)[n] for n in ns])
    assert np.allclose(from_freq, v.evaluate(ns), atol=1e-10)


def test_abelian_conjugation_invariance():
    assert conjugation_invariant(0.5, [-3.5, 0.0, 2.25, 17.0], np.linspace(-1, 1, 41))


def test_grid_from_header():
    g = FrequencyGrid.from_header(2 * np.pi * 4, 2 * np.pi / 512)
    assert (g.M, g.K) == (512, 4)
    with pytest.raises(GridResolutionError):
        FrequencyGrid.from_header(10.0, 0.01)


def test_lattice_outside_window():
    with pytest.raises(GridResolutionError):
        gamma_interpolate({1000: 1.0}, 0.5, GRID)


def test_delta_range():
    with pytest.raises(ValueError):
        gamma_interpolate({0: 1.0}, 0.75)
    with pytest.raises(ValueError):
        ons_gram([0, 1], 0.0)
