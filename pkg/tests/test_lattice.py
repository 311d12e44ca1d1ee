import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperlab.lattice import (
    FREQUENCY, SPACE, WaveState, from_function, inner, l2_norm, make_grid, mode_index,
    plane_wave, random_band_limited, transform, zeros,
)


def test_grid_arithmetic():
    g = make_grid(1, 2, 8.0, 32)
    assert g.size == 1024 and g.shape == (32, 32)
    assert g.hx == 0.5
    g3 = make_grid(3, 1, 10.0, 16)
    assert g3.size == 4096
    np.testing.assert_allclose(np.sort(g3.omega), np.pi / 10 * np.arange(-8, 8))


@pytest.mark.parametrize("args, msg", [
    ((1, 2, 8.0, 33), "n must be even"),
    ((1, 2, 8.0, 24), "power of two"),
    ((1, 2, -1.0, 32), "L must be positive"),
    ((4, 1, 8.0, 32), "d must be"),
    ((3, 3, 8.0, 32), "infeasible"),
])
def test_grid_preconditions(args, msg):
    with pytest.raises(ValueError, match=msg):
        make_grid(*args)


def test_constant_goes_to_dc():
    g = make_grid(1, 2, 8.0, 32)
    f = transform(WaveState(g, np.ones(g.shape, complex)), FREQUENCY).coeffs
    assert abs(f[0, 0]) > 0
    f[0, 0] = 0
    assert np.abs(f).max() < 1e-12


def test_plane_wave_single_coefficient():
    g = make_grid(1, 2, 4.0, 16)
    k = (3, -5)
    f = transform(plane_wave(g, k), FREQUENCY).coeffs
    idx = mode_index(g, k)
    assert abs(f[idx]) > 1
    f[idx] = 0
    assert np.abs(f).max() < 1e-12


def test_round_trip_matches_double_transform(rng):
    g = make_grid(2, 2, 3.0, 8)
    u = WaveState(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    back = transform(transform(u, FREQUENCY), SPACE)
    assert np.abs(back.coeffs - u.coeffs).max() < 1e-12
    # independent oracle: numpy's unnormalized fft with explicit scaling
    ref = np.fft.fftn(u.coeffs) / np.sqrt(g.size)
    assert np.abs(transform(u, FREQUENCY).coeffs - ref).max() < 1e-12


def test_norm_examples():
    g = make_grid(1, 2, 8.0, 32)
    assert l2_norm(zeros(g)) == 0.0
    assert l2_norm(from_function(g, lambda a, b: np.ones_like(a + b))) == pytest.approx(16.0, abs=1e-12)


def test_gaussian_norm_closed_form():
    # prod_i (pi sigma^2)^(-1/4) exp(-x_i^2/(2 sigma^2)) has unit norm in R^2
    sigma = 1.0
    g = make_grid(1, 2, 8.0, 64)
    c = (np.pi * sigma**2) ** -0.25
    u = from_function(g, lambda a, b: c * c * np.exp(-(a**2 + b**2) / (2 * sigma**2)))
    assert abs(l2_norm(u) - 1.0) < 1e-6


def test_norm_same_in_both_representations(rng):
    g = make_grid(1, 3, 2.0, 8)
    u = random_band_limited(g, rng)
    assert l2_norm(u) == pytest.approx(l2_norm(u.to(FREQUENCY)), rel=1e-13)
    assert inner(u, u).real == pytest.approx(l2_norm(u) ** 2, rel=1e-13)


def test_mismatched_grids_rejected():
    a = zeros(make_grid(1, 2, 4.0, 8))
    b = zeros(make_grid(1, 2, 4.0, 16))
    with pytest.raises(ValueError):
        a + b


@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_inner_is_sesquilinear(seed, re, im):
    rng = np.random.default_rng(seed)
    g = make_grid(1, 2, 2.0, 8)
    u, v = random_band_limited(g, rng), random_band_limited(g, rng)
    c = complex(re, im)
    assert abs(inner(u * c, v) - np.conj(c) * inner(u, v)) <= 1e-10 * (1 + abs(inner(u, v)))
    assert abs(inner(u, v) - np.conj(inner(v, u))) < 1e-10 * (1 + abs(inner(u, v)))
