"""Time integration: Strang splitting, projected (Galerkin) dynamics, Duhamel
quadrature and Picard iteration.

Sign conventions. With F = -V + W the multiplication part of H, the
equation i u_t = -Delta u + F u has the mild form

    u(t) = U0(t) u0 + i Q u(t),   Q u = -S(F u),

so Q u = S(V u) - S(W u). The repulsion term carries a plain minus sign here.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np
import scipy.fft
import scipy.linalg

from .hypercross import CrossIndexSet, project, residual
from .lattice import FREQUENCY, SPACE, GridSpec, WaveState, inner, l2_norm, transform
from .mixed_norms import Trajectory, x_norm
from .multipliers import free_propagate
from .potentials import ContractionWindow, PotentialSpec, eval_nuclear, eval_pair
from .spin import SpinPartition, pauli_residual

#: admissibility threshold for the Pauli precondition of evolve
PAULI_TOL = 1e-10


class PotentialModel:
    """F(t) = -V(t) + W on a grid; cached when the nuclei are static."""

    def __init__(self, grid: GridSpec, spec: PotentialSpec | None):
        self.grid = grid
        self.spec = spec if spec is not None else PotentialSpec((), 0.1, False)
        self._W = eval_pair(grid, self.spec)
        self._static = self._W - eval_nuclear(grid, self.spec, 0.0) if self.spec.is_static else None

    @property
    def is_zero(self) -> bool:
        return self.spec.is_zero or (self._static is not None and not np.any(self._static))

    @property
    def is_static(self) -> bool:
        return self._static is not None

    def field(self, t: float) -> np.ndarray:
        if self._static is not None:
            return self._static
        return self._W - eval_nuclear(self.grid, self.spec, t)


def energy(state: WaveState, model: PotentialModel, t: float | None = None) -> float:
    """<u, H u> with H = -Delta + F."""
    grid = state.grid
    f = transform(state, FREQUENCY).coeffs
    kin = float(np.sum(grid.kinetic_symbol * np.abs(f) ** 2) * grid.cell_volume)
    s = transform(state, SPACE).coeffs
    t = state.t if t is None else t
    pot = float(np.sum(model.field(t) * np.abs(s) ** 2) * grid.cell_volume)
    return kin + pot


@dataclasses.dataclass
class EvolveConfig:
    T: float
    dt: float
    scheme: str = "strang"
    projected: CrossIndexSet | None = None
    snapshot_stride: int = 1
    projection_mode: str = "galerkin"
    krylov_tol: float = 1e-14
    krylov_max: int = 40

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.T < 0:
            raise ValueError("T must be nonnegative")
        steps = round(self.T / self.dt)
        if abs(steps * self.dt - self.T) > 1e-9 * max(self.T, self.dt):
            raise ValueError(f"T = {self.T} is not an integer multiple of dt = {self.dt}")
        if self.scheme not in ("strang", "picard"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.projection_mode not in ("galerkin", "naive"):
            raise ValueError(f"unknown projection mode {self.projection_mode!r}")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")

    @property
    def steps(self) -> int:
        return round(self.T / self.dt)


# -- Krylov exponential on the cross ----------------------------------------------


def lanczos_expm(matvec: Callable, v: np.ndarray, tau: float, tol: float = 1e-14, max_dim: int = 40):
    """exp(-i tau A) v for Hermitian A given by ``matvec``.

    Lanczos with full reorthogonalization; stops when the a-posteriori
    estimate beta_m |[exp(-i tau T_m)]_{m,0}| drops below tol ||v||.
    Returns (result, krylov dimension).
    """
    beta0 = np.linalg.norm(v)
    if beta0 == 0:
        return v.copy(), 0
    basis = [v / beta0]
    alphas: list[float] = []
    betas: list[float] = []
    for m in range(max_dim):
        w = matvec(basis[-1])
        a = float(np.vdot(basis[-1], w).real)
        alphas.append(a)
        w = w - a * basis[-1]
        if m > 0:
            w = w - betas[-1] * basis[-2]
        for b in basis:
            w = w - np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))
        Tm = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        small = scipy.linalg.expm(-1j * tau * Tm)[:, 0]
        if beta * abs(small[-1]) < tol or beta < 1e-300 or m == max_dim - 1:
            if m == max_dim - 1 and beta * abs(small[-1]) >= tol:
                raise RuntimeError("Krylov exponential did not converge; reduce dt")
            return beta0 * (np.array(basis).T @ small), m + 1
        betas.append(beta)
        basis.append(w / beta)
    raise AssertionError("unreachable")


class _CrossOperator:
    """P F P restricted to the cross, acting on member coefficient vectors."""

    def __init__(self, cross: CrossIndexSet):
        if cross.cutoff_kind != "indicator":
            raise ValueError("projected dynamics needs the indicator cutoff")
        self.cross = cross
        self.grid = cross.grid
        self.members = cross.members
        self.field = None

    def embed(self, vec: np.ndarray) -> np.ndarray:
        full = np.zeros(self.grid.size, np.complex128)
        full[self.members] = vec
        return full.reshape(self.grid.shape)

    def gather(self, dense: np.ndarray) -> np.ndarray:
        return dense.reshape(-1)[self.members]

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        space = scipy.fft.ifftn(self.embed(vec), norm="ortho")
        return self.gather(scipy.fft.fftn(self.field * space, norm="ortho"))


# -- stepping ---------------------------------------------------------------------


def strang_step(
    state: WaveState,
    model: PotentialModel,
    t: float,
    dt: float,
    cross: CrossIndexSet | None = None,
    mode: str = "galerkin",
    stats: dict | None = None,
) -> WaveState:
    """One Strang step from t to t + dt; the field is taken at the midpoint.

    With ``cross`` the potential substep is exp(-i dt P F P) on the cross
    ("galerkin", norm conserving) or P o exp(-i dt F) ("naive", leaks norm;
    the leaked norm is accumulated in ``stats['leakage']``).
    """
    rep = state.rep
    u = free_propagate(state, dt / 2)
    F = model.field(t + dt / 2)
    if cross is None:
        s = transform(u, SPACE)
        u = s.replace(coeffs=s.coeffs * np.exp(-1j * dt * F))
    elif mode == "galerkin":
        op = _CrossOperator(cross)
        op.field = F
        f = transform(u, FREQUENCY)
        vec, dim = lanczos_expm(op, op.gather(f.coeffs), dt)
        if stats is not None:
            stats["krylov_max"] = max(stats.get("krylov_max", 0), dim)
        u = f.replace(coeffs=op.embed(vec))
    else:
        s = transform(u, SPACE)
        u = s.replace(coeffs=s.coeffs * np.exp(-1j * dt * F))
        leak = l2_norm(residual(u, cross))
        u = project(u, cross)
        if stats is not None:
            stats["leakage"] = stats.get("leakage", 0.0) + leak
    u = free_propagate(u, dt / 2)
    return transform(u, rep).replace(t=state.t + dt)


def evolve(
    u0: WaveState,
    config: EvolveConfig,
    model: PotentialModel,
    partition: SpinPartition | None = None,
    callback: Callable[[WaveState], None] | None = None,
) -> Trajectory:
    """Strang evolution over [u0.t, u0.t + T]; snapshots every ``snapshot_stride`` steps.

    In projected mode the initial state is P_R u0 and every snapshot lies in
    the span of the cross modes. ``callback`` receives each snapshot (used for
    checkpointing).
    """
    if config.scheme != "strang":
        raise ValueError("evolve integrates with the strang scheme; use picard_solve for picard")
    if u0.grid != model.grid:
        raise ValueError("state and potential live on different grids")
    if partition is not None and pauli_residual(u0, partition) > PAULI_TOL:
        raise ValueError("initial state violates the exchange antisymmetry of the partition")
    cross = config.projected
    u = transform(u0, FREQUENCY)
    if cross is not None:
        u = project(u, cross)
    stats: dict = {}
    t0 = u0.t
    states, times = [transform(u, SPACE)], [t0]
    if callback:
        callback(states[0])
    for m in range(1, config.steps + 1):
        u = strang_step(u, model, t0 + (m - 1) * config.dt, config.dt, cross, config.projection_mode, stats)
        if m % config.snapshot_stride == 0 or m == config.steps:
            snap = transform(u, SPACE).replace(t=t0 + m * config.dt)
            states.append(snap)
            times.append(t0 + m * config.dt)
            if callback:
                callback(snap)
    meta = {"dt": config.dt, "scheme": "strang", "projected": cross is not None}
    meta.update(stats)
    return Trajectory(states, np.array(times), meta)


# -- Duhamel and Picard -----------------------------------------------------------


def _uniform_step(times: np.ndarray) -> float:
    if len(times) < 2:
        raise ValueError("Duhamel quadrature needs at least two snapshots")
    h = np.diff(times)
    if np.ptp(h) > 1e-9 * h.mean():
        raise ValueError("Duhamel quadrature needs uniformly spaced snapshots")
    return float(h.mean())


def duhamel_S_all(forcing: Trajectory) -> list[WaveState]:
    """(S f)(t_m) = int_{t_0}^{t_m} U0(t_m - tau) f(tau) dtau at every snapshot, trapezoid rule."""
    grid = forcing.grid
    times = forcing.times
    h = _uniform_step(times)
    lam = grid.kinetic_symbol
    rel = times - times[0]
    out = []
    acc = np.zeros(grid.shape, np.complex128)
    prev = None
    for m, f in enumerate(forcing.states):
        g = np.exp(1j * lam * rel[m]) * transform(f, FREQUENCY).coeffs
        if prev is not None:
            acc = acc + 0.5 * h * (prev + g)
        prev = g
        out.append(WaveState(grid, np.exp(-1j * lam * rel[m]) * acc, FREQUENCY, times[m]).to(SPACE))
    return out


def duhamel_S(forcing: Trajectory, t: float) -> WaveState:
    """(S f)(t) for a snapshot time t of the forcing trajectory."""
    times = forcing.times
    if t > times[-1] + 1e-12 or t < times[0] - 1e-12:
        raise ValueError(f"t = {t} outside the forcing horizon [{times[0]}, {times[-1]}]")
    m = int(np.argmin(np.abs(times - t)))
    if abs(times[m] - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError("t must coincide with a snapshot time")
    if m == 0:
        return WaveState(forcing.grid, np.zeros(forcing.grid.shape), SPACE, t)
    sub = Trajectory(forcing.states[: m + 1], times[: m + 1])
    return duhamel_S_all(sub)[-1]


def apply_Q(traj: Trajectory, model: PotentialModel) -> Trajectory:
    """Q u = -S(F u) = S(V u) - S(W u) at every snapshot."""
    forcing = []
    for s, t in zip(traj.states, traj.times):
        sp = transform(s, SPACE)
        forcing.append(sp.replace(coeffs=-model.field(t) * sp.coeffs))
    return Trajectory(duhamel_S_all(Trajectory(forcing, traj.times)), traj.times.copy())


def free_trajectory(u0: WaveState, times: np.ndarray) -> Trajectory:
    return Trajectory([free_propagate(u0, t - u0.t).to(SPACE) for t in times], np.asarray(times))


class PicardDivergence(RuntimeError):
    def __init__(self, message: str, result: PicardResult):
        super().__init__(message)
        self.result = result


@dataclasses.dataclass
class PicardResult:
    trajectory: Trajectory
    ratios: list
    differences: list
    converged: bool
    flagged: bool
    iterations: int


def picard_solve(
    u0: WaveState,
    config: EvolveConfig,
    model: PotentialModel,
    tol: float = 1e-10,
    max_iter: int = 50,
    p: float = 4.0,
    q: float = 4.0,
    window: ContractionWindow | None = None,
    override: bool = False,
) -> PicardResult:
    """Iterate u <- U0 u0 + i Q u on the snapshot grid until the X-norm update is below tol.

    ``ratios[m]`` is the ratio of successive X-norm updates. Outside the
    contraction window (when one is given) the call is refused unless
    ``override``; failure to converge raises :class:`PicardDivergence` unless
    ``override``, in which case the result is returned flagged.
    """
    if window is not None and not window.admits(config.T) and not override:
        raise ValueError(
            f"T = {config.T} is outside the contraction window T_max = {float(window.T_max):.4g} "
            "(conditional on C_est); pass override to run anyway"
        )
    h = config.dt * config.snapshot_stride
    count = round(config.T / h)
    times = u0.t + h * np.arange(count + 1)
    cross = config.projected
    start = project(u0, cross) if cross is not None else u0
    base = free_trajectory(start, times)
    current = base
    diffs: list[float] = []
    ratios: list[float] = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        Q = apply_Q(current, model)
        states = [b + 1j * qv for b, qv in zip(base.states, Q.states)]
        if cross is not None:
            states = [project(s, cross) for s in states]
        nxt = Trajectory(states, times)
        diff = x_norm(nxt - current, p, q).x
        if diffs and diffs[-1] > 0:
            ratios.append(diff / diffs[-1])
        diffs.append(diff)
        current = nxt
        if diff < tol:
            converged = True
            break
    flagged = any(r >= 1 for r in ratios) or not converged
    result = PicardResult(current, ratios, diffs, converged, flagged, it)
    if not converged and not override:
        raise PicardDivergence(f"no convergence within {max_iter} iterations; ratios {ratios}", result)
    return result
