"""Periodic tensor lattice for N particles in d dimensions.

Configuration space is truncated to the box [-L, L)^(dN) with n points per
axis. Axes are ordered particle-major: axis ``i*d + c`` is component ``c`` of
particle ``i``. Frequency coefficients are stored in FFT order along every
axis, with wave numbers omega_k = (pi/L) k, k in {-n/2, ..., n/2 - 1}.

The transform is the unitary DFT (1/sqrt(n^(dN)) in both directions), so the
quadrature norm (sum |u|^2 hx^(dN))^(1/2) has the same value in either
representation.
"""
from __future__ import annotations

import dataclasses
from functools import cached_property

import numpy as np
import scipy.fft

SPACE = "space"
FREQUENCY = "frequency"
REPRESENTATIONS = (SPACE, FREQUENCY)

#: default ceiling on n^(dN); complex128 at 2**24 modes is 256 MiB per array
DEFAULT_MAX_MODES = 2**24


@dataclasses.dataclass(frozen=True)
class GridSpec:
    """Lattice descriptor. Build with :func:`make_grid`, which validates."""

    d: int
    N: int
    L: float
    n: int
    max_modes: int = dataclasses.field(default=DEFAULT_MAX_MODES, compare=False)

    @property
    def ndim(self) -> int:
        return self.d * self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.ndim

    @property
    def size(self) -> int:
        return self.n**self.ndim

    @property
    def hx(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.hx**self.ndim

    @property
    def volume(self) -> float:
        return (2.0 * self.L) ** self.ndim

    @cached_property
    def x(self) -> np.ndarray:
        """Axis coordinates, ascending from -L."""
        return -self.L + self.hx * np.arange(self.n)

    @cached_property
    def k(self) -> np.ndarray:
        """Integer wave numbers in FFT order."""
        return np.fft.fftfreq(self.n, 1.0 / self.n).round().astype(np.int64)

    @cached_property
    def omega(self) -> np.ndarray:
        """Angular frequencies pi*k/L in FFT order (Nyquist row kept)."""
        return (np.pi / self.L) * self.k

    @cached_property
    def omega_deriv(self) -> np.ndarray:
        """Frequencies used by derivative operators: Nyquist row zeroed."""
        w = self.omega.copy()
        w[self.k == -self.n // 2] = 0.0
        return w

    def axis(self, particle: int, comp: int = 0) -> int:
        return particle * self.d + comp

    def particle_axes(self, particle: int) -> tuple[int, ...]:
        return tuple(range(particle * self.d, (particle + 1) * self.d))

    def along(self, vec: np.ndarray, axis: int) -> np.ndarray:
        """Reshape a length-n vector so it broadcasts along ``axis``."""
        shape = [1] * self.ndim
        shape[axis] = self.n
        return np.asarray(vec).reshape(shape)

    def coordinate(self, particle: int, comp: int = 0) -> np.ndarray:
        return self.along(self.x, self.axis(particle, comp))

    def omega_sq(self, particle: int, deriv: bool = False) -> np.ndarray:
        """|omega_i|^2 for one particle, broadcastable to :attr:`shape`."""
        w = self.omega_deriv if deriv else self.omega
        total = 0.0
        for c in range(self.d):
            total = total + self.along(w**2, self.axis(particle, c))
        return total

    @cached_property
    def kinetic_symbol(self) -> np.ndarray:
        """Dense sum_j |omega_j|^2."""
        total = np.zeros(self.shape)
        for i in range(self.N):
            total = total + self.omega_sq(i)
        return total

    def particle_grid(self) -> GridSpec:
        """The one-particle lattice with the same box and resolution."""
        return GridSpec(self.d, 1, self.L, self.n, self.max_modes)

    def particle_mesh(self) -> list[np.ndarray]:
        """Dense coordinate arrays of a single particle, shape (n,)*d each."""
        return list(np.meshgrid(*([self.x] * self.d), indexing="ij"))


def make_grid(d: int, N: int, L: float, n: int, max_modes: int = DEFAULT_MAX_MODES) -> GridSpec:
    """Validated :class:`GridSpec`.

    Raises ``ValueError`` for odd or non power-of-two ``n``, nonpositive ``L``,
    dimensions outside 1..3, or a mode count above ``max_modes``.
    """
    if int(d) != d or not 1 <= d <= 3:
        raise ValueError(f"d must be 1, 2 or 3, got {d}")
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if int(n) != n or n % 2:
        raise ValueError("n must be even")
    if n < 4:
        raise ValueError("n must be at least 4")
    if n & (n - 1):
        raise ValueError("n must be a power of two")
    if not L > 0:
        raise ValueError("L must be positive")
    modes = int(n) ** (int(d) * int(N))
    if modes > max_modes:
        raise ValueError(
            f"resolution infeasible: {modes} modes exceeds the memory ceiling of {max_modes}"
        )
    return GridSpec(int(d), int(N), float(L), int(n), int(max_modes))


@dataclasses.dataclass(frozen=True, eq=False)
class WaveState:
    """Complex field on a lattice, in space or frequency representation."""

    grid: GridSpec
    coeffs: np.ndarray
    rep: str = SPACE
    t: float = 0.0

    def __post_init__(self):
        if self.rep not in REPRESENTATIONS:
            raise ValueError(f"unknown representation {self.rep!r}")
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.size != self.grid.size:
            raise ValueError(f"coefficient count {c.size} does not match grid size {self.grid.size}")
        object.__setattr__(self, "coeffs", c.reshape(self.grid.shape))

    def replace(self, **changes) -> WaveState:
        return dataclasses.replace(self, **changes)

    def to(self, rep: str) -> WaveState:
        return transform(self, rep)

    @property
    def space(self) -> np.ndarray:
        return transform(self, SPACE).coeffs

    @property
    def freq(self) -> np.ndarray:
        return transform(self, FREQUENCY).coeffs

    def __add__(self, other: WaveState) -> WaveState:
        other = _match(self, other)
        return self.replace(coeffs=self.coeffs + other.coeffs)

    def __sub__(self, other: WaveState) -> WaveState:
        other = _match(self, other)
        return self.replace(coeffs=self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> WaveState:
        return self.replace(coeffs=self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> WaveState:
        return self.replace(coeffs=-self.coeffs)


def _match(a: WaveState, b: WaveState) -> WaveState:
    if a.grid != b.grid:
        raise ValueError("states live on different grids")
    return transform(b, a.rep)


def transform(state: WaveState, target_rep: str) -> WaveState:
    """Switch representation with the unitary DFT. A no-op if already there."""
    if target_rep not in REPRESENTATIONS:
        raise ValueError(f"unknown representation {target_rep!r}")
    if state.rep == target_rep:
        return state
    if target_rep == FREQUENCY:
        c = scipy.fft.fftn(state.coeffs, norm="ortho")
    else:
        c = scipy.fft.ifftn(state.coeffs, norm="ortho")
    return WaveState(state.grid, c, target_rep, state.t)


def l2_norm(state: WaveState) -> float:
    """Quadrature L2 norm; identical in both representations."""
    c = state.coeffs
    return float(np.sqrt(np.vdot(c, c).real * state.grid.cell_volume))


def inner(u: WaveState, v: WaveState) -> complex:
    """Quadrature inner product <u, v>, conjugate-linear in u."""
    v = _match(u, v)
    return complex(np.vdot(u.coeffs, v.coeffs) * u.grid.cell_volume)


def from_function(grid: GridSpec, fn, t: float = 0.0) -> WaveState:
    """Sample ``fn(*coords)`` where coords are the dN broadcast coordinate arrays."""
    coords = [grid.coordinate(i, c) for i in range(grid.N) for c in range(grid.d)]
    values = np.broadcast_to(fn(*coords), grid.shape)
    return WaveState(grid, np.array(values, dtype=np.complex128), SPACE, t)


def zeros(grid: GridSpec, rep: str = SPACE) -> WaveState:
    return WaveState(grid, np.zeros(grid.shape, np.complex128), rep)


def plane_wave(grid: GridSpec, kvec) -> WaveState:
    """exp(i omega_k . x) for the integer wave-number vector ``kvec`` (length dN)."""
    kvec = np.asarray(kvec)
    phase = 0.0
    for a in range(grid.ndim):
        phase = phase + grid.along(np.pi / grid.L * kvec[a] * grid.x, a)
    return WaveState(grid, np.broadcast_to(np.exp(1j * phase), grid.shape).copy())


def mode_index(grid: GridSpec, kvec) -> tuple[int, ...]:
    """Tensor index of the frequency coefficient with integer wave numbers ``kvec``."""
    return tuple(int(k) % grid.n for k in kvec)


def random_band_limited(
    grid: GridSpec, rng: np.random.Generator, kmax: int | None = None, decay: float = 0.0
) -> WaveState:
    """Random state with |k| <= kmax on every axis and no Nyquist content.

    ``decay`` damps coefficients by prod_axes (1 + omega^2)^(-decay/2).
    """
    if kmax is None:
        kmax = grid.n // 2 - 1
    c = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    for a in range(grid.ndim):
        keep = (np.abs(grid.k) <= kmax) & (grid.k != -grid.n // 2)
        damp = np.where(keep, (1.0 + grid.omega**2) ** (-decay / 2), 0.0)
        c = c * grid.along(damp, a)
    return WaveState(grid, c, FREQUENCY).to(SPACE)
