"""Fidelity-induced Riemannian geometry of quantum ground-state manifolds.

Submodules
----------
geometry   fidelity, Fubini-Study distance, quantum geometric tensor
spin       exact diagonalization of the periodic XY chain
quasifree  quadratic fermion Hamiltonians: polar factor, determinant overlap, log T
xy         XY-chain metric (finite size and thermodynamic limit), scalar curvature
curvature  scalar curvature of a sampled 2D metric
thermal    Uhlmann and Gibbs-state fidelities, specific heat
cli        parameter scans written as CSV/JSON
"""

from .errors import (
    BranchError,
    CriticalPointError,
    DegeneracyError,
    GeometryError,
    LevelCrossingError,
    ParitySectorError,
)
from .geometry import (
    GeometricTensor,
    StateMap,
    adiabatic_generator_metric,
    fidelity,
    fubini_study_distance,
    metric_from_fidelity,
    qgt_finite_difference,
    qgt_perturbative,
)

__version__ = "0.1.0"
