import numpy as np
import pytest

from hyperlab.hypercross import enumerate_cross, residual
from hyperlab.lattice import from_function, l2_norm, make_grid, plane_wave, random_band_limited
from hyperlab.mixed_norms import Trajectory
from hyperlab.multipliers import free_propagate
from hyperlab.potentials import Nucleus, PotentialSpec, contraction_T
from hyperlab.propagators import (
    EvolveConfig, PicardDivergence, PotentialModel, apply_Q, duhamel_S, duhamel_S_all, energy,
    evolve, lanczos_expm, picard_solve, strang_step,
)
from hyperlab.spin import SpinPartition, gaussian_orbital, slater_init


def _gauss(grid, center=0.0, sigma=0.7):
    u = from_function(grid, lambda x: np.exp(-(x - center) ** 2 / (2 * sigma**2)) + 0j)
    return u * (1 / l2_norm(u))


def _nucleus_model(grid, Z=1.0, eps=0.5):
    return PotentialModel(grid, PotentialSpec((Nucleus.static(Z, [0.0] * grid.d),), eps, True))


def test_zero_potential_step_is_free(rng):
    g = make_grid(1, 2, 4.0, 32)
    u = random_band_limited(g, rng)
    model = PotentialModel(g, None)
    assert model.is_zero
    v = strang_step(u, model, 0.0, 0.01)
    assert l2_norm(v - free_propagate(u, 0.01)) < 1e-12 * l2_norm(u)


def test_strang_local_error_is_third_order():
    g = make_grid(1, 1, 8.0, 128)
    model = _nucleus_model(g)
    # keep the packet away from the kink of 1/(|x| + eps) at the nucleus, which
    # lowers the observed order for states that overlap it
    u = _gauss(g, 4.0)

    def fine(dt, m=64):
        v = u
        for k in range(m):
            v = strang_step(v, model, k * dt / m, dt / m)
        return v

    errs = [l2_norm(strang_step(u, model, 0.0, dt) - fine(dt)) for dt in (0.04, 0.02)]
    assert errs[0] / errs[1] == pytest.approx(8.0, rel=0.1)


def test_norm_after_1000_steps(rng):
    g = make_grid(1, 2, 4.0, 32)
    model = _nucleus_model(g, eps=0.1)
    u0 = random_band_limited(g, rng)
    traj = evolve(u0, EvolveConfig(1.0, 1e-3, snapshot_stride=250), model)
    assert len(traj) == 5
    assert max(abs(l2_norm(s) - l2_norm(u0)) for s in traj.states) < 1e-10 * l2_norm(u0)


def test_zero_potential_evolve_matches_free(rng):
    g = make_grid(1, 2, 4.0, 32)
    u0 = random_band_limited(g, rng)
    traj = evolve(u0, EvolveConfig(0.2, 0.01, snapshot_stride=5), PotentialModel(g, None))
    for s, t in zip(traj.states, traj.times):
        assert l2_norm(s - free_propagate(u0, t)) < 1e-12 * l2_norm(u0)


def test_energy_drift_static_nucleus():
    g = make_grid(1, 1, 8.0, 128)
    model = _nucleus_model(g, eps=0.1)
    u0 = _gauss(g, 1.0)
    traj = evolve(u0, EvolveConfig(1.0, 1e-3, snapshot_stride=100), model)
    e = [energy(s, model) for s in traj.states]
    assert max(abs(x - e[0]) for x in e) < 1e-4


def test_projected_snapshots_stay_in_cross():
    g = make_grid(1, 2, 4.0, 32)
    part = SpinPartition((1, 1))
    u0 = slater_init([[gaussian_orbital([-1.0], 0.6), gaussian_orbital([1.0], 0.6)]], part, g)
    cross = enumerate_cross(g, part, 8.0)
    model = _nucleus_model(g, eps=0.1)
    traj = evolve(u0, EvolveConfig(0.05, 1e-3, projected=cross, snapshot_stride=10), model, part)
    for s in traj.states:
        assert l2_norm(residual(s, cross)) < 1e-13
    # Galerkin step is unitary on the cross
    assert l2_norm(traj[-1]) == pytest.approx(l2_norm(traj[0]), abs=1e-12)
    assert traj.meta["krylov_max"] <= 40


def test_naive_projection_leaks():
    g = make_grid(1, 2, 4.0, 32)
    part = SpinPartition((1, 1))
    u0 = slater_init([[gaussian_orbital([-1.0], 0.6), gaussian_orbital([1.0], 0.6)]], part, g)
    cross = enumerate_cross(g, part, 8.0)
    cfg = EvolveConfig(0.05, 1e-3, projected=cross, projection_mode="naive", snapshot_stride=50)
    traj = evolve(u0, cfg, _nucleus_model(g, eps=0.1), part)
    assert traj.meta["leakage"] > 0
    assert l2_norm(traj[-1]) < l2_norm(traj[0])


def test_evolve_rejects_non_pauli(rng):
    g = make_grid(1, 2, 4.0, 16)
    sym = from_function(g, lambda a, b: np.exp(-a**2 - b**2) + 0j)
    with pytest.raises(ValueError, match="antisymmetry"):
        evolve(sym, EvolveConfig(0.01, 1e-3), PotentialModel(g, None), SpinPartition((1, 1)))


def test_lanczos_matches_dense_expm(rng):
    from scipy.linalg import expm

    A = rng.standard_normal((30, 30))
    H = A + A.T
    v = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    out, dim = lanczos_expm(lambda x: H @ x, v, 0.05)
    assert np.abs(out - expm(-0.05j * H) @ v).max() < 1e-12 * np.linalg.norm(v)


def test_duhamel_zero_and_linear(rng):
    g = make_grid(1, 1, 4.0, 32)
    times = np.linspace(0, 0.1, 11)
    zero = Trajectory([0 * random_band_limited(g, rng)] * 11, times)
    assert all(l2_norm(s) == 0 for s in duhamel_S_all(zero))
    a = Trajectory([random_band_limited(g, rng) for _ in times], times)
    b = Trajectory([random_band_limited(g, rng) for _ in times], times)
    comb = Trajectory([x * 2.0 + y * 3j for x, y in zip(a.states, b.states)], times)
    lhs = duhamel_S(comb, 0.1)
    rhs = duhamel_S(a, 0.1) * 2.0 + duhamel_S(b, 0.1) * 3j
    assert l2_norm(lhs - rhs) < 1e-12 * l2_norm(lhs)


def test_duhamel_single_mode_closed_form():
    # int_0^t exp(-i (t - tau) lam) dtau = (1 - exp(-i lam t)) / (i lam)
    g = make_grid(1, 1, 4.0, 32)
    k = 2
    lam = (k * np.pi / 4) ** 2
    f = plane_wave(g, (k,))
    T = 1.0
    times = np.linspace(0, T, 2001)
    S = duhamel_S(Trajectory([f] * len(times), times), T)
    exact = f * ((1 - np.exp(-1j * lam * T)) / (1j * lam))
    assert l2_norm(S - exact) / l2_norm(f) < 1e-6


def test_Q_zero_potential_and_linearity(rng):
    g = make_grid(1, 1, 4.0, 32)
    times = np.linspace(0, 0.05, 6)
    traj = Trajectory([random_band_limited(g, rng) for _ in times], times)
    assert all(l2_norm(s) == 0 for s in apply_Q(traj, PotentialModel(g, None)).states)
    model = _nucleus_model(g)
    other = Trajectory([random_band_limited(g, rng) for _ in times], times)
    both = Trajectory([a + b * 2.0 for a, b in zip(traj.states, other.states)], times)
    lhs = apply_Q(both, model)[-1]
    rhs = apply_Q(traj, model)[-1] + apply_Q(other, model)[-1] * 2.0
    assert l2_norm(lhs - rhs) < 1e-12 * l2_norm(lhs)


def test_first_picard_correction_is_second_order():
    # u1 = U0 u0 + i Q U0 u0 is the first-order Dyson term; its error is O(T^2)
    g = make_grid(1, 1, 8.0, 64)
    model = _nucleus_model(g, Z=1.0, eps=0.5)
    u0 = plane_wave(g, (1,))
    u0 = u0 * (1 / l2_norm(u0))
    errs = []
    for T in (0.04, 0.02):
        times = np.linspace(0, T, 81)
        free = Trajectory([free_propagate(u0, t) for t in times], times)
        u1 = free[-1] + apply_Q(free, model)[-1] * 1j
        exact = evolve(u0, EvolveConfig(T, T / 400), model)[-1]
        errs.append(l2_norm(u1 - exact))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_picard_zero_potential_one_iteration(rng):
    g = make_grid(1, 1, 4.0, 32)
    u0 = random_band_limited(g, rng)
    res = picard_solve(u0, EvolveConfig(0.05, 1e-3, scheme="picard", snapshot_stride=5), PotentialModel(g, None))
    assert res.converged and res.iterations == 1


def test_picard_weak_potential_matches_strang():
    g = make_grid(1, 1, 8.0, 64)
    model = PotentialModel(g, PotentialSpec((Nucleus.static(0.2, [0.0]),), 0.5))
    u0 = _gauss(g, 0.5, 0.8)
    res = picard_solve(u0, EvolveConfig(0.1, 1e-3, scheme="picard"), model)
    assert res.converged and all(r < 1 for r in res.ratios)
    ref = evolve(u0, EvolveConfig(0.1, 1e-3), model)
    assert l2_norm(res.trajectory[-1] - ref[-1]) < 1e-4


def test_picard_refuses_outside_window_and_flags_in_override():
    g = make_grid(1, 1, 8.0, 64)
    model = PotentialModel(g, PotentialSpec((Nucleus.static(5.0, [0.0]),), 0.05))
    u0 = _gauss(g, 0.5, 0.5)
    cfg = EvolveConfig(2.0, 1e-2, scheme="picard")
    window = contraction_T(1, 1, 5.0, 4, "existence")
    with pytest.raises(ValueError, match="contraction window"):
        picard_solve(u0, cfg, model, window=window)
    res = picard_solve(u0, cfg, model, max_iter=5, window=window, override=True)
    assert res.flagged and not res.converged
    with pytest.raises(PicardDivergence):
        picard_solve(u0, cfg, model, max_iter=5)
