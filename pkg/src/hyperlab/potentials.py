"""Soft-core Coulomb fields, moving nuclei and exponent arithmetic.

Distances on the torus are minimum-image distances. Nuclear attraction enters
the Hamiltonian with a minus sign, electron repulsion with a plus sign:
H = -sum Delta_j - V + W with
V(x) = sum_j sum_mu Z_mu / (|x_j - a_mu(t)| + eps),
W(x) = sum_{j<k} 1 / (|x_j - x_k| + eps).

Exponent helpers return :class:`fractions.Fraction` for exact (int/Fraction)
input and floats otherwise; the value ``math.inf`` stands for an infinite
exponent.
"""
from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .lattice import GridSpec

#: distance below which a point counts as coinciding with a nucleus
SINGULAR_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class Nucleus:
    """Charge Z > 0 on a piecewise polynomial path.

    ``pieces`` is a sequence of ``(t_start, coeffs)`` with ``coeffs[m][c]`` the
    coefficient of ``(t - t_start)**m`` in coordinate ``c``. A piece is active
    from its start time until the next one begins; the first piece also
    covers earlier times.
    """

    Z: float
    pieces: tuple

    def __post_init__(self):
        if not self.Z > 0:
            raise ValueError("nuclear charge must be positive")
        pieces = tuple(
            (float(t0), np.atleast_2d(np.asarray(c, dtype=float))) for t0, c in self.pieces
        )
        if not pieces:
            raise ValueError("a nucleus needs at least one trajectory piece")
        starts = [t0 for t0, _ in pieces]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("trajectory pieces must have increasing start times")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def static(cls, Z: float, position) -> Nucleus:
        return cls(Z, ((0.0, [np.atleast_1d(position)]),))

    @classmethod
    def polynomial(cls, Z: float, coeffs) -> Nucleus:
        """Single piece a(t) = sum_m coeffs[m] t^m."""
        return cls(Z, ((0.0, coeffs),))

    @property
    def dim(self) -> int:
        return self.pieces[0][1].shape[1]

    @property
    def is_static(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0][1].shape[0] == 1

    def position(self, t: float) -> np.ndarray:
        t0, coeffs = self.pieces[0]
        for start, c in self.pieces:
            if t >= start:
                t0, coeffs = start, c
        powers = (t - t0) ** np.arange(coeffs.shape[0])
        return powers @ coeffs


@dataclasses.dataclass(frozen=True)
class PotentialSpec:
    nuclei: tuple = ()
    eps: float = 0.1
    pair_interaction: bool = True

    def __post_init__(self):
        object.__setattr__(self, "nuclei", tuple(self.nuclei))
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        dims = {nuc.dim for nuc in self.nuclei}
        if len(dims) > 1:
            raise ValueError("all nuclei must live in the same dimension")

    @property
    def M(self) -> int:
        return len(self.nuclei)

    @property
    def Z_sum(self) -> float:
        return float(sum(nuc.Z for nuc in self.nuclei))

    @property
    def is_static(self) -> bool:
        return all(nuc.is_static for nuc in self.nuclei)

    @property
    def is_zero(self) -> bool:
        return self.M == 0 and not self.pair_interaction

    def scaled(self, factor: float) -> PotentialSpec:
        nuclei = tuple(Nucleus(nuc.Z * factor, nuc.pieces) for nuc in self.nuclei)
        return PotentialSpec(nuclei, self.eps, self.pair_interaction)


def min_image(delta: np.ndarray, L: float) -> np.ndarray:
    """Wrap coordinate differences into [-L, L)."""
    return (delta + L) % (2.0 * L) - L


def torus_gap(delta: np.ndarray, L: float) -> np.ndarray:
    """|min_image(delta)|, computed so that torus_gap(-x) == torus_gap(x) bit for bit."""
    a = np.abs(delta) % (2.0 * L)
    return np.minimum(a, 2.0 * L - a)


def _one_particle_distance(grid: GridSpec, center) -> np.ndarray:
    pg = grid.particle_grid()
    mesh = pg.particle_mesh()
    sq = sum(min_image(x - c, grid.L) ** 2 for x, c in zip(mesh, center))
    return np.sqrt(sq)


def eval_nuclear(grid: GridSpec, spec: PotentialSpec, t: float = 0.0) -> np.ndarray:
    """Dense V(x, t) (positive for attraction)."""
    one = np.zeros((grid.n,) * grid.d)
    for nuc in spec.nuclei:
        a = nuc.position(t)
        if len(a) != grid.d:
            raise ValueError(f"nucleus lives in {len(a)} dimensions, grid in {grid.d}")
        dist = _one_particle_distance(grid, a)
        if spec.eps == 0 and dist.min() < SINGULAR_TOL:
            raise ValueError("singular evaluation: a nucleus sits on a grid point with eps = 0")
        one = one + nuc.Z / (dist + spec.eps)
    total = np.zeros(grid.shape)
    for j in range(grid.N):
        shape = [1] * grid.ndim
        for c in range(grid.d):
            shape[grid.axis(j, c)] = grid.n
        total = total + one.reshape(shape)
    return total


def eval_pair(grid: GridSpec, spec: PotentialSpec) -> np.ndarray:
    """Dense W(x) = sum_{j<k} 1/(|x_j - x_k| + eps); zero if the interaction is off."""
    total = np.zeros(grid.shape)
    if not spec.pair_interaction or grid.N < 2:
        return total
    if spec.eps <= 0:
        raise ValueError("pair interaction needs eps > 0 (singular on the coincidence set)")
    terms = []
    for j in range(grid.N):
        for k in range(j + 1, grid.N):
            sq = 0.0
            for c in range(grid.d):
                sq = sq + torus_gap(grid.coordinate(j, c) - grid.coordinate(k, c), grid.L) ** 2
            terms.append(np.broadcast_to(1.0 / (np.sqrt(sq) + spec.eps), grid.shape))
    # summing the sorted terms makes the field exactly invariant under relabeling
    if len(terms) == 1:
        return total + terms[0]
    return np.sort(np.stack(terms), axis=0).sum(axis=0)


def potential_field(grid: GridSpec, spec: PotentialSpec, t: float = 0.0) -> np.ndarray:
    """The multiplication part of H: -V + W."""
    return eval_pair(grid, spec) - eval_nuclear(grid, spec, t)


# -- exponent arithmetic ----------------------------------------------------------


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return math.inf
    if isinstance(x, Rational):
        return Fraction(x)
    return float(x)


def _inv(x):
    x = _num(x)
    if x == math.inf:
        return 0
    return 1 / x if isinstance(x, Fraction) else 1.0 / x


def _out(x):
    """Pass Fractions through, drop to float otherwise."""
    return x if isinstance(x, Fraction) else float(x)


def theta_p(p):
    """Time exponent with 2/theta_p = 3(1/2 - 1/p); infinite at p = 2."""
    p = _num(p)
    if p == math.inf or not 2 <= p <= 6:
        raise ValueError(f"p must lie in [2, 6], got {p}")
    if p == 2:
        return math.inf
    return _out(4 * p / (3 * (p - 2)))


@dataclasses.dataclass(frozen=True)
class ExponentSet:
    p: float = 4
    q: float = 4
    pt: float = 4
    qt: float = 4
    alpha: float = Fraction(1, 4)
    alpha_p: float = math.inf
    alpha_q: float = math.inf
    beta_p: float = math.inf
    beta_q: float = math.inf

    @property
    def theta_p(self):
        return theta_p(self.p)

    @property
    def theta_q(self):
        return theta_p(self.q)

    @property
    def theta_alpha_beta(self):
        return theta_alpha_beta(self)

    @property
    def theta(self):
        return theta_mixed(self.p, self.pt, self.q, self.qt)

    def window_violations(self) -> list[str]:
        """Admissibility windows for the regularity statement; empty when satisfied."""
        out = []
        a = _num(self.alpha)
        if not 0 < a < Fraction(1, 2):
            out.append("alpha must lie in (0, 1/2)")
            return out
        lo, lo_t = 6 / (3 - 2 * a), 6 / (1 + 2 * a)
        for name, v, bound in (("p", self.p, lo), ("q", self.q, lo), ("pt", self.pt, lo_t), ("qt", self.qt, lo_t)):
            if not bound < _num(v) <= 6:
                out.append(f"{name} = {v} outside ({float(bound):.6g}, 6]")
        return out


def theta_alpha_beta(ex: ExponentSet):
    """1 / min{3/p - 1/2 - 1/alpha_p, 3/q - 1/2 - 1/alpha_q, 1 - 1/beta_p, 1 - 1/beta_q}."""
    p, q = _num(ex.p), _num(ex.q)
    for name, v in (("p", p), ("q", q)):
        if v == math.inf or not 2 <= v < 6:
            raise ValueError(f"{name} must lie in [2, 6), got {v}")
    half = Fraction(1, 2)
    entries = [
        3 * _inv(p) - half - _inv(ex.alpha_p),
        3 * _inv(q) - half - _inv(ex.alpha_q),
        1 - _inv(ex.beta_p),
        1 - _inv(ex.beta_q),
    ]
    m = min(entries)
    if m <= 0:
        raise ValueError(f"nonpositive minimum {m}: the time exponent is undefined")
    return _out(1 / m)


def theta_mixed(p, pt, q, qt):
    """1/theta = min{3/(2p) + 3/(2pt) - 1/2, 3/(2q) + 3/(2qt) - 1/2}."""
    half = Fraction(1, 2)
    entries = [
        Fraction(3, 2) * (_inv(p) + _inv(pt)) - half,
        Fraction(3, 2) * (_inv(q) + _inv(qt)) - half,
    ]
    m = min(entries)
    if m <= 0:
        raise ValueError(f"nonpositive 1/theta = {m}")
    return _out(1 / m)


CONTRACTION_TAGS = ("existence", "regularity")


@dataclasses.dataclass(frozen=True)
class ContractionWindow:
    """Horizon below which the selected smallness condition holds.

    The condition is ``C * factor * T**(1/theta) < 1/2`` with
    ``factor = N(N+1)`` ("existence") or ``(Z_sum + N) N`` ("regularity").
    The constant C is a configuration input; results are conditional on it.
    """

    C_est: float
    factor: float
    theta: float
    T_max: float
    tag: str

    def lhs(self, T: float) -> float:
        if math.isinf(self.theta):
            return float(self.C_est * self.factor)
        return float(self.C_est * self.factor * T ** (1.0 / float(self.theta)))

    def margin(self, T: float) -> float:
        """1/2 - lhs(T); positive inside the window."""
        return 0.5 - self.lhs(T)

    def admits(self, T: float) -> bool:
        return self.margin(T) > 0


def contraction_T(C_est, N: int, Z_sum, theta, tag: str = "existence") -> ContractionWindow:
    if tag not in CONTRACTION_TAGS:
        raise ValueError(f"unknown tag {tag!r}; expected one of {CONTRACTION_TAGS}")
    C_est, Z_sum, theta = _num(C_est), _num(Z_sum), _num(theta)
    if not (C_est > 0 and N >= 1 and theta > 0) or Z_sum < 0:
        raise ValueError("C_est, N and theta must be positive and Z_sum nonnegative")
    factor = N * (N + 1) if tag == "existence" else (Z_sum + N) * N
    base = 1 / (2 * C_est * factor)
    if theta == math.inf:
        T_max = math.inf if base > 1 else 0.0
    elif isinstance(base, Fraction) and isinstance(theta, Fraction) and theta.denominator == 1:
        T_max = base ** int(theta)
    else:
        T_max = float(base) ** float(theta)
    return ContractionWindow(C_est, factor, theta, T_max, tag)


def nuclei_from_config(entries: Sequence[dict]) -> tuple:
    """Nuclei from config dicts ``{Z, position}`` or ``{Z, pieces: [{t0, coeffs}]}``."""
    out = []
    for e in entries:
        if "pieces" in e:
            out.append(Nucleus(e["Z"], tuple((p.get("t0", 0.0), p["coeffs"]) for p in e["pieces"])))
        elif "coeffs" in e:
            out.append(Nucleus.polynomial(e["Z"], e["coeffs"]))
        else:
            out.append(Nucleus.static(e["Z"], e.get("position", [0.0])))
    return tuple(out)
