"""Hyperbolic-cross frequency sets, the cutoff chi_R, projection and residual.

A lattice mode omega belongs to the cross of radius R when
sum_l prod_{i in I_l} (1 + |omega_i|^2)^(1/2) <= R (ties included).
"""
from __future__ import annotations

import csv
import dataclasses
import warnings
from functools import cached_property

import numpy as np

from .lattice import FREQUENCY, GridSpec, WaveState, transform
from .spin import SpinPartition

#: enumerate by full scan up to this many modes, prune above
FULL_SCAN_LIMIT = 2**20

CUTOFFS = ("indicator", "raised_cosine")


@dataclasses.dataclass(frozen=True, eq=False)
class CrossIndexSet:
    """Members of the cross as sorted flat (C-order) mode indices.

    ``weights`` holds chi_R on ``support`` (a superset of ``members`` for the
    tapered cutoff, equal to it for the indicator).
    """

    R: float
    partition: SpinPartition
    grid: GridSpec
    members: np.ndarray
    cross_values: np.ndarray
    support: np.ndarray
    weights: np.ndarray
    cutoff_kind: str = "indicator"
    taper_width: float = 0.0
    vacuous: bool = False

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members.tolist())

    def __contains__(self, flat_index) -> bool:
        return int(flat_index) in self._member_set

    def contains_mode(self, kvec) -> bool:
        idx = tuple(int(k) % self.grid.n for k in kvec)
        return np.ravel_multi_index(idx, self.grid.shape) in self

    @cached_property
    def mask(self) -> np.ndarray:
        """Dense boolean member mask in FFT order."""
        m = np.zeros(self.grid.size, bool)
        m[self.members] = True
        return m.reshape(self.grid.shape)

    @cached_property
    def chi(self) -> np.ndarray:
        """Dense cutoff values chi_R."""
        c = np.zeros(self.grid.size)
        c[self.support] = self.weights
        return c.reshape(self.grid.shape)

    def mode_vectors(self) -> np.ndarray:
        """Integer wave numbers of the members, shape (len, dN)."""
        idx = np.unravel_index(self.members, self.grid.shape)
        return np.stack([self.grid.k[i] for i in idx], axis=1)

    def to_csv(self, path) -> None:
        """Columns: flat_index, |omega_i| for each particle, cross_weight, chi."""
        grid = self.grid
        idx = np.unravel_index(self.support, grid.shape)
        radii = []
        for p in range(grid.N):
            sq = sum(grid.omega[idx[a]] ** 2 for a in grid.particle_axes(p))
            radii.append(np.sqrt(sq))
        cw = cross_weight_at(grid, self.partition, self.support)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["flat_index"] + [f"abs_omega_{p}" for p in range(grid.N)] + ["cross_weight", "chi"])
            for row in range(len(self.support)):
                w.writerow(
                    [int(self.support[row])]
                    + [repr(float(r[row])) for r in radii]
                    + [repr(float(cw[row])), repr(float(self.weights[row]))]
                )


def _particle_weights(grid: GridSpec) -> np.ndarray:
    """(1 + |omega|^2)^(1/2) for every one-particle mode, C-order over (n,)*d."""
    pg = grid.particle_grid()
    return np.sqrt(1.0 + pg.kinetic_symbol).ravel()


def cross_weight_at(grid: GridSpec, partition: SpinPartition, flat: np.ndarray) -> np.ndarray:
    """Cross weight of the given flat mode indices, same float operations as the dense scan."""
    w1 = _particle_weights(grid)
    per = grid.n**grid.d
    digits = np.unravel_index(np.asarray(flat, dtype=np.int64), (per,) * grid.N)
    total = np.zeros(len(np.atleast_1d(flat)))
    for cls in partition.classes:
        prod = np.ones_like(total)
        for i in cls:
            prod = prod * w1[digits[i]]
        total = total + prod
    return total


def _scan(grid: GridSpec, partition: SpinPartition, bound: float) -> np.ndarray:
    # same product order as cross_weight_at
    flat = np.arange(grid.size, dtype=np.int64)
    return flat[cross_weight_at(grid, partition, flat) <= bound]


def _pruned(grid: GridSpec, partition: SpinPartition, bound: float) -> np.ndarray:
    """Level-wise expansion over particles with a monotone lower-bound prune.

    A partial assignment of particles 0..m-1 is kept only if the sum over
    classes of the partial products (unassigned factors >= 1) is <= bound.
    """
    w1 = _particle_weights(grid)
    per = len(w1)
    order = np.argsort(w1, kind="stable")
    w_sorted = w1[order]
    cls_of = [partition.class_of(i) for i in range(grid.N)]
    s = partition.s
    prefix = np.zeros(1, dtype=np.int64)
    partial = np.ones((1, s))
    for i in range(grid.N):
        c = cls_of[i]
        others = partial.sum(axis=1) - partial[:, c]
        # admissible w: partial[c] * w + others <= bound
        limit = (bound - others) / partial[:, c]
        counts = np.searchsorted(w_sorted, limit * (1 + 1e-12), side="right")
        keep = counts > 0
        prefix, partial, counts, others = prefix[keep], partial[keep], counts[keep], others[keep]
        reps = np.repeat(np.arange(len(prefix)), counts)
        starts = np.cumsum(counts) - counts
        pos = np.arange(counts.sum()) - np.repeat(starts, counts)
        chosen = order[pos]
        prefix = prefix[reps] * per + chosen
        partial = partial[reps].copy()
        partial[:, c] = partial[:, c] * w1[chosen]
    flat = np.sort(prefix)
    # exact filter with the reference operation order
    return flat[cross_weight_at(grid, partition, flat) <= bound]


def enumerate_cross(
    grid: GridSpec,
    partition: SpinPartition,
    R: float,
    cutoff: str = "indicator",
    taper_width: float = 0.25,
    method: str = "auto",
) -> CrossIndexSet:
    """All lattice modes in the cross of radius R, with cutoff weights.

    For ``R < s`` the set is empty and flagged vacuous (with a warning).
    The raised-cosine cutoff is 1 on the cross and decays smoothly to 0 at
    cross weight R (1 + taper_width).
    """
    partition.check_grid(grid)
    if cutoff not in CUTOFFS:
        raise ValueError(f"unknown cutoff {cutoff!r}")
    if method not in ("auto", "scan", "prune"):
        raise ValueError(f"unknown method {method!r}")
    s = partition.s
    empty = np.zeros(0, dtype=np.int64)
    if R < s:
        warnings.warn(f"R = {R} < s = {s}: the cross is empty", stacklevel=2)
        return CrossIndexSet(float(R), partition, grid, empty, np.zeros(0), empty, np.zeros(0),
                             cutoff, taper_width if cutoff != "indicator" else 0.0, True)
    outer = R if cutoff == "indicator" else R * (1.0 + taper_width)
    if method == "scan" or (method == "auto" and grid.size <= FULL_SCAN_LIMIT):
        support = _scan(grid, partition, outer)
    else:
        support = _pruned(grid, partition, outer)
    values = cross_weight_at(grid, partition, support)
    inside = values <= R
    members = support[inside]
    if cutoff == "indicator":
        weights = np.ones(len(support))
        tw = 0.0
    else:
        tw = taper_width
        frac = np.clip((values - R) / (R * tw), 0.0, 1.0)
        weights = 0.5 * (1.0 + np.cos(np.pi * frac))
        weights[inside] = 1.0
        nz = weights > 0
        support, weights = support[nz], weights[nz]
    return CrossIndexSet(float(R), partition, grid, members, values[inside], support, weights, cutoff, tw, False)


def _check(state: WaveState, cross: CrossIndexSet) -> None:
    if state.grid != cross.grid:
        raise ValueError("state and cross live on different grids")


def project(state: WaveState, cross: CrossIndexSet) -> WaveState:
    """P_R u: frequency coefficients times chi_R; keeps the input representation."""
    _check(state, cross)
    f = transform(state, FREQUENCY)
    return transform(f.replace(coeffs=f.coeffs * cross.chi), state.rep)


def residual(state: WaveState, cross: CrossIndexSet) -> WaveState:
    """(1 - P_R) u."""
    _check(state, cross)
    f = transform(state, FREQUENCY)
    return transform(f.replace(coeffs=f.coeffs * (1.0 - cross.chi)), state.rep)

