"""Spin classes, the Pauli exchange condition and Slater-type initial data.

A fixed spin assignment sigma_1..sigma_N splits the particles into classes
I_l = {i : sigma_i = l}. Admissible states change sign under the exchange of
two particles from the same class. Particle permutations act on the lattice
by transposing blocks of coefficient axes, so they are exact.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from functools import reduce

import numpy as np

from .lattice import FREQUENCY, SPACE, GridSpec, WaveState, l2_norm, transform

#: largest class the antisymmetrizer will sum over (|I|! terms)
DEFAULT_FACTORIAL_BUDGET = 5


@dataclasses.dataclass(frozen=True)
class SpinPartition:
    """Spin labels per particle; classes are the nonempty label groups.

    Particles are indexed from 0. Labels are arbitrary integers (configs use
    1-based labels such as ``[1, 1, 2]``).
    """

    sigma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))
        if not self.sigma:
            raise ValueError("partition needs at least one particle")

    @classmethod
    def single_class(cls, N: int) -> SpinPartition:
        return cls((1,) * N)

    @property
    def N(self) -> int:
        return len(self.sigma)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.sigma)))

    @property
    def s(self) -> int:
        return len(self.labels)

    @property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(i for i, lab in enumerate(self.sigma) if lab == label) for label in self.labels
        )

    def class_of(self, i: int) -> int:
        return self.labels.index(self.sigma[i])

    def transpositions(self) -> list[tuple[int, int]]:
        """All exchanges (i, j), i < j, inside a common class."""
        return [pair for cls in self.classes for pair in itertools.combinations(cls, 2)]

    def check_grid(self, grid: GridSpec) -> None:
        if grid.N != self.N:
            raise ValueError(f"partition has {self.N} particles, grid has {grid.N}")


def permute_particles(coeffs: np.ndarray, grid: GridSpec, perm) -> np.ndarray:
    """Relabel particles: axis block m of the result is block ``perm[m]`` of the input."""
    axes = [a for m in range(grid.N) for a in grid.particle_axes(perm[m])]
    return np.transpose(coeffs, axes)


def swap_particles(state: WaveState, i: int, j: int) -> WaveState:
    """u o P_ij as a state (same representation)."""
    perm = list(range(state.grid.N))
    perm[i], perm[j] = perm[j], perm[i]
    return state.replace(coeffs=permute_particles(state.coeffs, state.grid, perm))


def _parity(perm) -> int:
    perm = list(perm)
    sign = 1
    for a in range(len(perm)):
        while perm[a] != a:
            b = perm[a]
            perm[a], perm[b] = perm[b], perm[a]
            sign = -sign
    return sign


def antisymmetrize(
    state: WaveState, partition: SpinPartition, budget: int = DEFAULT_FACTORIAL_BUDGET
) -> WaveState:
    """Apply the class-wise antisymmetrizer (1/|I|!) sum_P sign(P) u o P.

    The projector commutes with the DFT, so either representation is accepted
    and returned unchanged in kind.
    """
    grid = state.grid
    partition.check_grid(grid)
    for cls in partition.classes:
        if len(cls) > budget:
            raise ValueError(
                f"class of size {len(cls)} exceeds the factorial budget of {budget}"
            )
    c = state.coeffs
    for cls in partition.classes:
        if len(cls) < 2:
            continue
        acc = np.zeros_like(c)
        for order in itertools.permutations(range(len(cls))):
            perm = list(range(grid.N))
            for a, b in enumerate(order):
                perm[cls[a]] = cls[b]
            acc += _parity(order) * permute_particles(c, grid, perm)
        c = acc / math.factorial(len(cls))
    return state.replace(coeffs=c)


def pauli_residual(state: WaveState, partition: SpinPartition) -> float:
    """max over same-class exchanges of ||u o P_ij + u|| / ||u||; 0 for the zero state."""
    partition.check_grid(state.grid)
    norm = l2_norm(state)
    if norm == 0.0:
        return 0.0
    worst = 0.0
    for i, j in partition.transpositions():
        worst = max(worst, l2_norm(swap_particles(state, i, j) + state) / norm)
    return worst


def _sample_orbital(orbital, grid: GridSpec) -> np.ndarray:
    if callable(orbital):
        values = orbital(*grid.particle_mesh())
    else:
        values = orbital
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != (grid.n,) * grid.d:
        raise ValueError(f"orbital has shape {values.shape}, expected {(grid.n,) * grid.d}")
    return values


def decay_weight(grid: GridSpec, s_decay: float) -> np.ndarray:
    """prod_i (1 + |omega_i|^2)^(-(s_decay + d/2)/2) on the full lattice.

    Applied to lattice-localized orbitals (flat spectrum) this yields data whose
    mixed Sobolev norms of order r are finite uniformly in n exactly when
    r < s_decay.
    """
    expo = -(s_decay + grid.d / 2.0) / 2.0
    w = 1.0
    for i in range(grid.N):
        w = w * (1.0 + grid.omega_sq(i)) ** expo
    return np.broadcast_to(w, grid.shape)


def slater_init(
    orbitals,
    partition: SpinPartition,
    grid: GridSpec,
    s_decay: float | None = None,
    rank_tol: float = 1e-10,
) -> WaveState:
    """Normalized product over classes of Slater determinants.

    Parameters
    ----------
    orbitals : sequence of sequences
        ``orbitals[l]`` lists one single-particle orbital per member of class
        ``l`` (in :attr:`SpinPartition.classes` order). Each orbital is an
        array of shape ``(n,)*d`` or a callable of the d coordinate meshes.
    s_decay : float, optional
        Frequency shaping, see :func:`decay_weight`. The state is shaped, then
        re-antisymmetrized and normalized.

    Raises
    ------
    ValueError
        If a class gets the wrong number of orbitals or the orbitals of a class
        are linearly dependent on the grid.
    """
    partition.check_grid(grid)
    classes = partition.classes
    if len(orbitals) != len(classes):
        raise ValueError(f"expected orbitals for {len(classes)} classes, got {len(orbitals)}")
    pgrid = grid.particle_grid()
    assigned: list = [None] * grid.N
    for cls, orbs in zip(classes, orbitals):
        if len(orbs) != len(cls):
            raise ValueError(f"class {cls} needs {len(cls)} orbitals, got {len(orbs)}")
        sampled = [_sample_orbital(o, pgrid) for o in orbs]
        mat = np.array([s.ravel() for s in sampled])
        gram = mat.conj() @ mat.T
        ev = np.linalg.eigvalsh(gram)
        if ev[0] <= rank_tol * max(ev[-1], np.finfo(float).tiny):
            raise ValueError("rank-deficient orbital set: the determinant vanishes identically")
        for i, s in zip(cls, sampled):
            assigned[i] = s
    product = reduce(np.multiply.outer, assigned)
    state = antisymmetrize(WaveState(grid, product), partition)
    if s_decay is not None:
        f = transform(state, FREQUENCY)
        state = antisymmetrize(f.replace(coeffs=f.coeffs * decay_weight(grid, s_decay)), partition)
        state = transform(state, SPACE)
    norm = l2_norm(state)
    if norm == 0.0:
        raise ValueError("rank-deficient orbital set: the determinant vanishes identically")
    return state * (1.0 / norm)


def gaussian_orbital(center, sigma: float, momentum=None):
    """exp(-|x-c|^2 / (2 sigma^2) + i p.x) as a callable for :func:`slater_init`."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    momentum = np.zeros_like(center) if momentum is None else np.atleast_1d(momentum)

    def orbital(*coords):
        r2 = sum((x - c) ** 2 for x, c in zip(coords, center))
        phase = sum(p * x for x, p in zip(coords, momentum))
        return np.exp(-r2 / (2 * sigma**2) + 1j * phase)

    return orbital


def point_orbital(grid: GridSpec, center) -> np.ndarray:
    """Lattice delta at the grid point nearest ``center``; flat spectrum."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    values = np.zeros((grid.n,) * grid.d, np.complex128)
    idx = tuple(int(np.argmin(np.abs(grid.x - c))) for c in center)
    values[idx] = 1.0 / np.sqrt(grid.hx**grid.d)
    return values
