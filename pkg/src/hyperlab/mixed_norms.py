"""Mixed L^{p,2} norms, pair coordinates and space-time norms.

Pair coordinates
----------------
For particles i, j the map (x_i, x_j) -> (r, D) = (x_i - x_j, x_i + x_j) is
2:1 from the torus T^2 (T = [-L, L)) onto T^2. It becomes a bijection onto
the quotient of R^2 by the image lattice, whose fundamental domain we take as
r in [-L, L), D in [-2L, 2L). On the lattice, r keeps spacing hx while D
takes every second point of a 2hx-spaced grid, with parity tied to r; the two
halves of the D range are the two sheets of the torus cover. Storing D by its
half index keeps the relabeling an exact permutation of the n^2 samples.

The change of variables carries |det d(x_i, x_j)/d(r, D)| = 2^-d. Folding it
into the inner (D) measure, the D step 2hx times 1/2 equals hx, so every
sample of the resampled tensor keeps the plain cell weight hx^(dN).
"""
from __future__ import annotations

import dataclasses
import json
import math
from typing import Callable, Sequence, Union

import numpy as np

from .lattice import SPACE, GridSpec, WaveState, l2_norm, transform

Field = Union[WaveState, Sequence[WaveState]]

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

#: constant C in ||f(x_i - x_j) g(x_i + x_j)||_{p,2; i,j} = C ||f||_p ||g||_2 (g one period)
PAIR_JACOBIAN_CONSTANT = 1.0


@dataclasses.dataclass(frozen=True, eq=False)
class PairFrame:
    """A state resampled to pair coordinates for particles (i, j).

    In ``coeffs`` the axes of particle i hold the r index (r = (rho - n/2) hx)
    and the axes of particle j hold the half index h of
    D = (2h + rho mod 2 - n) hx, component by component.
    """

    grid: GridSpec
    i: int
    j: int
    coeffs: np.ndarray

    def r_values(self) -> np.ndarray:
        n, hx = self.grid.n, self.grid.hx
        return (np.arange(n) - n // 2) * hx

    def D_values(self) -> np.ndarray:
        """(n, n) table of D indexed by (rho, h)."""
        n, hx = self.grid.n, self.grid.hx
        rho = np.arange(n)[:, None]
        h = np.arange(n)[None, :]
        return (2 * h + rho % 2 - n) * hx

    def sheet(self) -> np.ndarray:
        """Sheet label (0 for D < 0, 1 otherwise) per half index h."""
        return (np.arange(self.grid.n) >= self.grid.n // 2).astype(int)


def _pair_maps(n: int):
    """Index maps (a, b) -> (rho, h) for one coordinate component."""
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    xa, xb = a - n // 2, b - n // 2
    r = xa - xb
    D = xa + xb
    hi = r >= n // 2
    lo = r < -n // 2
    r = np.where(hi, r - n, np.where(lo, r + n, r))
    D = np.where(hi, D - n, np.where(lo, D + n, D))
    D = (D + n) % (2 * n) - n
    rho = r + n // 2
    delta = D + n
    if np.any((rho + delta) % 2):
        raise AssertionError("pair lattice parity violated")
    return np.broadcast_to(rho, (n, n)), np.broadcast_to(delta // 2, (n, n))


def _check_pair(grid: GridSpec, i: int, j: int) -> None:
    if i == j or not (0 <= i < grid.N and 0 <= j < grid.N):
        raise ValueError(f"invalid particle pair ({i}, {j}) for N={grid.N}")


def pair_resample(state: WaveState, i: int, j: int) -> PairFrame:
    """Exact relabeling of the space samples into (r_ij, D_ij) coordinates."""
    grid = state.grid
    _check_pair(grid, i, j)
    n = grid.n
    rho, h = _pair_maps(n)
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    c = transform(state, SPACE).coeffs
    for comp in range(grid.d):
        ai, aj = grid.axis(i, comp), grid.axis(j, comp)
        moved = np.moveaxis(c, (ai, aj), (0, 1))
        out = np.empty_like(moved)
        out[rho, h] = moved[np.broadcast_to(a, (n, n)), np.broadcast_to(b, (n, n))]
        c = np.moveaxis(out, (0, 1), (ai, aj))
    return PairFrame(grid, i, j, c)


def pair_unresample(frame: PairFrame) -> WaveState:
    """Inverse of :func:`pair_resample`."""
    grid, n = frame.grid, frame.grid.n
    rho, h = _pair_maps(n)
    a = np.broadcast_to(np.arange(n)[:, None], (n, n))
    b = np.broadcast_to(np.arange(n)[None, :], (n, n))
    c = frame.coeffs
    for comp in reversed(range(grid.d)):
        ai, aj = grid.axis(frame.i, comp), grid.axis(frame.j, comp)
        moved = np.moveaxis(c, (ai, aj), (0, 1))
        out = np.empty_like(moved)
        out[a, b] = moved[rho, h]
        c = np.moveaxis(out, (0, 1), (ai, aj))
    return WaveState(grid, c, SPACE)


def _density(field: Field) -> tuple[GridSpec, np.ndarray]:
    """Pointwise squared modulus (summed over components), space samples."""
    if isinstance(field, WaveState):
        field = [field]
    grid = field[0].grid
    dens = np.zeros(grid.shape)
    for f in field:
        c = transform(f, SPACE).coeffs
        dens += c.real**2 + c.imag**2
    return grid, dens


def _profile_norm(grid: GridSpec, dens: np.ndarray, k: int, p: float) -> float:
    keep = grid.particle_axes(k)
    others = tuple(a for a in range(grid.ndim) if a not in keep)
    profile = dens.sum(axis=others) * grid.hx ** (grid.d * (grid.N - 1))
    if math.isinf(p):
        return float(np.sqrt(profile.max()))
    return float((np.sum(profile ** (p / 2.0)) * grid.hx**grid.d) ** (1.0 / p))


def norm_single(field: Field, k: int, p: float) -> float:
    """||u||_{L^p_{x_k}(L^2(rest))}; ``field`` may be a list of components."""
    if p < 1:
        raise ValueError("p must be >= 1")
    grid, dens = _density(field)
    return _profile_norm(grid, dens, k, p)


def norm_pair(field: Field, i: int, j: int, p: float) -> float:
    """L^p in r_ij of the L^2 norm over D_ij and the other particles."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if isinstance(field, WaveState):
        field = [field]
    grid = field[0].grid
    dens = np.zeros(grid.shape)
    for f in field:
        c = pair_resample(f, i, j).coeffs
        dens += c.real**2 + c.imag**2
    return _profile_norm(grid, dens, i, p)


@dataclasses.dataclass(eq=False)
class Trajectory:
    """Time-ordered snapshots on a common grid."""

    states: list
    times: np.ndarray
    meta: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.states) != len(self.times):
            raise ValueError("one time stamp per snapshot required")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("snapshot times must be strictly increasing")
        grids = {id(s.grid) for s in self.states}
        if len(grids) > 1 and any(s.grid != self.states[0].grid for s in self.states):
            raise ValueError("all snapshots must share a grid")

    @property
    def grid(self) -> GridSpec:
        return self.states[0].grid

    @property
    def T(self) -> float:
        return float(self.times[-1])

    def __len__(self):
        return len(self.states)

    def __getitem__(self, m):
        return self.states[m]

    def map(self, fn: Callable[[WaveState], WaveState]) -> Trajectory:
        return Trajectory([fn(s) for s in self.states], self.times.copy(), dict(self.meta))

    def __sub__(self, other: Trajectory) -> Trajectory:
        if len(self) != len(other) or not np.allclose(self.times, other.times, rtol=0, atol=1e-12):
            raise ValueError("trajectories are sampled at different times")
        return Trajectory([a - b for a, b in zip(self.states, other.states)], self.times.copy())


@dataclasses.dataclass(frozen=True)
class NormSelector:
    """Spatial norm used inside a space-time norm.

    ``family`` is ``"l2"``, ``"single"`` (indices ``(k,)``) or ``"pair"``
    (indices ``(i, j)``).
    """

    family: str
    indices: tuple = ()
    p: float = 2.0

    def __call__(self, state: WaveState) -> float:
        if self.family == "l2":
            return l2_norm(state)
        if self.family == "single":
            return norm_single(state, self.indices[0], self.p)
        if self.family == "pair":
            return norm_pair(state, self.indices[0], self.indices[1], self.p)
        raise ValueError(f"unknown norm family {self.family!r}")

    @property
    def label(self) -> str:
        if self.family == "l2":
            return "Linf_t(L2)"
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.family}({idx}) p={self.p:g}"


def spacetime_norm(traj: Trajectory, theta: float, selector) -> float:
    """(int_0^T ||u(t)||^theta dt)^(1/theta) by the trapezoid rule; max for theta = inf."""
    values = np.array([selector(s) for s in traj.states])
    return _time_norm(traj.times, values, theta)


def _time_norm(times: np.ndarray, values: np.ndarray, theta: float) -> float:
    if math.isinf(theta):
        return float(values.max())
    if theta < 1:
        raise ValueError("theta must be >= 1")
    if len(values) < 2:
        raise ValueError("a finite time exponent needs at least two snapshots")
    return float(_trapezoid(values**theta, times) ** (1.0 / theta))


@dataclasses.dataclass
class NormReport:
    """Constituents of the X(T) norm and their maximum."""

    entries: dict
    x: float
    meta: dict

    def to_json(self) -> str:
        return json.dumps({"entries": self.entries, "x": self.x, "meta": self.meta}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> NormReport:
        data = json.loads(text)
        return cls(data["entries"], data["x"], data["meta"])

    def trace_rows(self) -> list:
        """Per-time rows (t, family, indices, value); empty unless traces were kept."""
        return [tuple(row) for row in self.meta.get("traces", [])]


def x_norm(traj: Trajectory, p: float, q: float, keep_traces: bool = False) -> NormReport:
    """max{ Linf_t L2, L^{theta_p}_t L^{p,2}_{ij} (i<j), L^{theta_q}_t L^{q,2}_k }."""
    from .potentials import theta_p as _theta

    if not (2 <= p <= 6 and 2 <= q <= 6):
        raise ValueError("p and q must lie in [2, 6]")
    grid = traj.grid
    th_p, th_q = float(_theta(p)), float(_theta(q))
    entries: dict[str, float] = {}
    traces: list[tuple[float, str, str, float]] = []

    def run(name: str, theta: float, sel):
        vals = np.array([sel(s) for s in traj.states])
        entries[name] = _time_norm(traj.times, vals, theta)
        if keep_traces:
            traces.extend((float(t), sel.family, ",".join(map(str, sel.indices)), float(v))
                          for t, v in zip(traj.times, vals))

    run("Linf_t(L2)", math.inf, NormSelector("l2"))
    for i in range(grid.N):
        for j in range(i + 1, grid.N):
            run(f"L{th_p:g}_t(L{p:g},2_pair({i},{j}))", th_p, NormSelector("pair", (i, j), p))
    for k in range(grid.N):
        run(f"L{th_q:g}_t(L{q:g},2_single({k}))", th_q, NormSelector("single", (k,), q))
    meta = {
        "p": p, "q": q, "theta_p": th_p, "theta_q": th_q,
        "grid": {"d": grid.d, "N": grid.N, "L": grid.L, "n": grid.n},
        "T": float(traj.times[-1] - traj.times[0]),
        "pair_jacobian_constant": PAIR_JACOBIAN_CONSTANT,
    }
    if keep_traces:
        meta["traces"] = traces
    return NormReport(entries, max(entries.values()), meta)
