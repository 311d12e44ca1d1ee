import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperlab.hypercross import enumerate_cross, project, residual
from hyperlab.inequalities import projection_bound
from hyperlab.lattice import FREQUENCY, l2_norm, make_grid, plane_wave, random_band_limited
from hyperlab.spin import SpinPartition


def brute_count(grid, sigma, R):
    """Loop over every lattice mode and evaluate the cross weight directly."""
    w = np.pi / grid.L * np.fft.fftfreq(grid.n, 1.0 / grid.n)
    count = 0
    for ks in itertools.product(range(grid.n), repeat=grid.N * grid.d):
        total = 0.0
        for lab in set(sigma):
            prod = 1.0
            for i, s in enumerate(sigma):
                if s == lab:
                    prod *= np.sqrt(1 + sum(w[ks[i * grid.d + c]] ** 2 for c in range(grid.d)))
            total += prod
        count += total <= R
    return count


def test_radius_one_single_particle_is_dc_only():
    g = make_grid(1, 1, 4.0, 16)
    cross = enumerate_cross(g, SpinPartition((1,)), 1.0)
    assert cross.members.tolist() == [0]


def test_matches_brute_force_scan():
    g = make_grid(1, 2, 4.0, 32)
    part = SpinPartition((1, 1))
    for R in (2.0, 3.7, 9.0):
        assert len(enumerate_cross(g, part, R)) == brute_count(g, (1, 1), R)


# counts frozen from the brute-force loop oracle above (grid L=4)
FROZEN = [
    ((1, 2, 4.0, 64), (1, 1), [41, 125, 321]),
    ((1, 3, 4.0, 32), (1, 1, 2), [111, 917, 5338]),
    ((2, 2, 4.0, 16), (1, 2), [569, 14613, 65399]),
    ((1, 4, 4.0, 16), (1, 1, 2, 2), [353, 4261, 22113]),
]


@pytest.mark.parametrize("args, sigma, counts", FROZEN)
def test_frozen_counts(args, sigma, counts):
    g = make_grid(*args)
    part = SpinPartition(sigma)
    got = [len(enumerate_cross(g, part, R)) for R in (4, 8, 16)]
    assert got == counts
    assert got == sorted(got)


def test_pruned_equals_scan():
    g = make_grid(1, 3, 4.0, 32)
    part = SpinPartition((1, 1, 2))
    for R in (3, 6, 12):
        a = enumerate_cross(g, part, R, method="scan")
        b = enumerate_cross(g, part, R, method="prune")
        assert np.array_equal(a.members, b.members)


def test_vacuous_radius_warns():
    g = make_grid(1, 2, 4.0, 16)
    with pytest.warns(UserWarning):
        cross = enumerate_cross(g, SpinPartition((1, 2)), 1.5)
    assert cross.vacuous and len(cross) == 0


def test_single_mode_inside_and_outside():
    g = make_grid(1, 2, 4.0, 16)
    cross = enumerate_cross(g, SpinPartition((1, 1)), 4.0)
    inside = plane_wave(g, (1, 0))
    outside = plane_wave(g, (7, 7))
    assert cross.contains_mode((1, 0)) and not cross.contains_mode((7, 7))
    assert l2_norm(project(inside, cross) - inside) < 1e-12 * l2_norm(inside)
    assert l2_norm(project(outside, cross)) < 1e-12
    assert l2_norm(residual(inside, cross)) < 1e-12


@given(st.integers(0, 2**32 - 1), st.floats(2.0, 30.0))
def test_projection_idempotent_and_pythagoras(seed, R):
    g = make_grid(1, 2, 4.0, 16)
    cross = enumerate_cross(g, SpinPartition((1, 1)), R)
    u = random_band_limited(g, np.random.default_rng(seed))
    pu = project(u, cross)
    assert l2_norm(project(pu, cross) - pu) <= 1e-12 * l2_norm(u)
    total = l2_norm(pu) ** 2 + l2_norm(residual(u, cross)) ** 2
    assert total == pytest.approx(l2_norm(u) ** 2, rel=1e-12)


@given(st.integers(0, 2**32 - 1), st.sampled_from([2.5, 4.0, 8.0, 16.0]))
def test_residual_bound(seed, R):
    g = make_grid(1, 2, 4.0, 32)
    cross = enumerate_cross(g, SpinPartition((1, 1)), R)
    u = random_band_limited(g, np.random.default_rng(seed), decay=1.0)
    lhs, rhs, ok = projection_bound(u, cross)
    assert ok and lhs <= rhs * (1 + 1e-12)


def test_single_outside_mode_bound_is_weight_over_R():
    g = make_grid(1, 2, 4.0, 16)
    cross = enumerate_cross(g, SpinPartition((1, 1)), 4.0)
    u = plane_wave(g, (5, 3))
    w = np.sqrt(1 + (5 * np.pi / 4) ** 2) * np.sqrt(1 + (3 * np.pi / 4) ** 2)
    lhs, rhs, ok = projection_bound(u, cross)
    assert lhs == pytest.approx(l2_norm(u), rel=1e-12)
    assert rhs == pytest.approx(w / 4.0 * l2_norm(u), rel=1e-12)
    assert ok


def test_tapered_cutoff_between_zero_and_one():
    g = make_grid(1, 2, 4.0, 32)
    cross = enumerate_cross(g, SpinPartition((1, 1)), 6.0, cutoff="raised_cosine", taper_width=0.5)
    chi = cross.chi
    assert chi.min() >= 0 and chi.max() <= 1
    assert np.all(chi.ravel()[cross.members] == 1)
    assert len(cross.support) > len(cross)


def test_csv_columns(tmp_path):
    g = make_grid(1, 2, 4.0, 16)
    cross = enumerate_cross(g, SpinPartition((1, 1)), 4.0)
    path = tmp_path / "cross.csv"
    cross.to_csv(path)
    header = path.read_text().splitlines()[0].split(",")
    assert header[0] == "flat_index" and header[-2:] == ["cross_weight", "chi"]
    assert len(path.read_text().splitlines()) == len(cross) + 1
