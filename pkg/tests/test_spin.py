import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperlab.lattice import WaveState, l2_norm, make_grid, random_band_limited, transform, FREQUENCY
from hyperlab.multipliers import apply_K
from hyperlab.spin import (
    SpinPartition, antisymmetrize, gaussian_orbital, pauli_residual, point_orbital, slater_init,
    swap_particles,
)


@pytest.fixture
def grid():
    return make_grid(1, 2, 4.0, 32)


def test_partition_classes():
    p = SpinPartition((1, 2, 1, 2, 3))
    assert p.classes == ((0, 2), (1, 3), (4,))
    assert p.s == 3 and p.N == 5
    assert p.transpositions() == [(0, 2), (1, 3)]
    assert p.class_of(3) == 1


def test_two_term_antisymmetrization(grid):
    x = grid.particle_grid().x
    phi, psi = np.exp(-x**2), x * np.exp(-(x - 1) ** 2)
    u = WaveState(grid, np.multiply.outer(phi, psi).astype(complex))
    a = antisymmetrize(u, SpinPartition((1, 1)))
    expected = (np.multiply.outer(phi, psi) - np.multiply.outer(psi, phi)) / 2
    assert np.abs(a.coeffs - expected).max() < 1e-14


def test_symmetric_product_vanishes(grid):
    x = grid.particle_grid().x
    phi = np.exp(-x**2)
    u = WaveState(grid, np.multiply.outer(phi, phi).astype(complex))
    assert l2_norm(antisymmetrize(u, SpinPartition((1, 1)))) == 0.0
    assert pauli_residual(u, SpinPartition((1, 1))) == pytest.approx(2.0)


@given(st.integers(0, 2**32 - 1), st.sampled_from([(1, 1, 1), (1, 2, 1), (1, 2, 3)]))
def test_antisymmetrizer_is_projector(seed, sigma):
    g = make_grid(1, 3, 2.0, 8)
    part = SpinPartition(sigma)
    u = random_band_limited(g, np.random.default_rng(seed))
    a = antisymmetrize(u, part)
    assert l2_norm(antisymmetrize(a, part) - a) < 1e-12 * l2_norm(u)
    assert pauli_residual(a, part) < 1e-12
    # orthogonal projector: norm does not grow
    assert l2_norm(a) <= l2_norm(u) * (1 + 1e-12)
    # commutes with the transform
    af = antisymmetrize(transform(u, FREQUENCY), part)
    assert l2_norm(transform(af, "space") - a) < 1e-12 * l2_norm(u)


@given(st.integers(0, 2**32 - 1))
def test_pauli_residual_range(seed):
    g = make_grid(1, 2, 2.0, 8)
    u = random_band_limited(g, np.random.default_rng(seed))
    r = pauli_residual(u, SpinPartition((1, 1)))
    assert 0.0 <= r <= 2.0 + 1e-12


def test_swap_is_involution(rng):
    g = make_grid(2, 2, 2.0, 8)
    u = random_band_limited(g, rng)
    assert np.array_equal(swap_particles(swap_particles(u, 0, 1), 0, 1).coeffs, u.coeffs)


def test_budget(rng):
    g = make_grid(1, 6, 2.0, 4)
    with pytest.raises(ValueError, match="budget"):
        antisymmetrize(random_band_limited(g, rng), SpinPartition((1,) * 6))


def test_slater_gaussians(grid):
    part = SpinPartition((1, 1))
    u = slater_init([[gaussian_orbital([-1.0], 0.7), gaussian_orbital([1.0], 0.7)]], part, grid)
    assert l2_norm(u) == pytest.approx(1.0, abs=1e-13)
    assert pauli_residual(u, part) < 1e-13


def test_slater_identical_orbitals_rejected(grid):
    orb = gaussian_orbital([0.0], 1.0)
    with pytest.raises(ValueError, match="rank-deficient"):
        slater_init([[orb, orb]], SpinPartition((1, 1)), grid)


def test_slater_wrong_orbital_count(grid):
    with pytest.raises(ValueError):
        slater_init([[gaussian_orbital([0.0], 1.0)]], SpinPartition((1, 1)), grid)


def test_two_classes_product(grid):
    part = SpinPartition((1, 2))
    u = slater_init([[gaussian_orbital([0.0], 1.0)], [gaussian_orbital([0.0], 1.0)]], part, grid)
    assert l2_norm(u) == pytest.approx(1.0)


def _shaped(n):
    g = make_grid(1, 2, 4.0, n)
    pg = g.particle_grid()
    part = SpinPartition((1, 1))
    return slater_init([[point_orbital(pg, [-1.0]), point_orbital(pg, [1.0])]], part, g, s_decay=1.1)


def test_shaping_first_order_finite_second_order_divergent():
    # Point orbitals have a flat spectrum, so after shaping the mode sums
    # behave like sum_k k^(2r - 2 s_decay - 1) per axis: the first-order tail
    # shrinks by 2^(-0.2) per doubling of n while the second-order norm grows
    # like 2^(1.8).
    K1, K2 = [], []
    for n in (32, 64, 128, 256):
        u = _shaped(n)
        k = apply_K(u, (0, 1))
        K1.append(l2_norm(k))
        K2.append(l2_norm(apply_K(k, (0, 1))))
    inc = np.diff(K1)
    assert np.all(inc > 0)
    np.testing.assert_allclose(inc[1:] / inc[:-1], 2 ** -0.2, rtol=0.05)
    np.testing.assert_allclose(np.array(K2[1:]) / K2[:-1], 2**1.8, rtol=0.05)
