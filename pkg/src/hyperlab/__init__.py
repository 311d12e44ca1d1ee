"""hyperlab: spectral experiments for many-particle Schroedinger evolution on
hyperbolic-cross frequency sets.

Submodules
----------
lattice       periodic tensor grid, unitary DFT, wave states
spin          spin partitions, antisymmetrization, Slater initial data
multipliers   Sobolev-type Fourier multipliers and the pair-rotation check
hypercross    hyperbolic cross index sets, projection and residual
potentials    soft-core Coulomb fields, nuclei, exponent arithmetic
mixed_norms   single-particle and pair mixed norms, trajectories, X norm
propagators   split-step and Galerkin evolution, Duhamel operator, Picard
inequalities  numerical checks of Hardy, Sobolev and dispersive bounds
experiments   configured drivers; cli wraps them, io persists results
"""
from .lattice import GridSpec, WaveState, make_grid, l2_norm, inner, transform
from .spin import SpinPartition, antisymmetrize, pauli_residual, slater_init
from .hypercross import CrossIndexSet, enumerate_cross, project, residual
from .potentials import PotentialSpec, Nucleus, ExponentSet, theta_p, contraction_T
from .mixed_norms import Trajectory, x_norm, norm_single, norm_pair
from .propagators import EvolveConfig, PotentialModel, evolve, picard_solve

__version__ = "0.1.0"

__all__ = [
    "GridSpec", "WaveState", "make_grid", "l2_norm", "inner", "transform",
    "SpinPartition", "antisymmetrize", "pauli_residual", "slater_init",
    "CrossIndexSet", "enumerate_cross", "project", "residual",
    "PotentialSpec", "Nucleus", "ExponentSet", "theta_p", "contraction_T",
    "Trajectory", "x_norm", "norm_single", "norm_pair",
    "EvolveConfig", "PotentialModel", "evolve", "picard_solve",
]
