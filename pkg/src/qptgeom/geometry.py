"""Fidelity, Fubini-Study distance and the quantum geometric tensor.

The geometric tensor of a ground-state map ``lam -> |psi(lam)>`` is

    Q_mn = <d_m psi| (1 - |psi><psi|) |d_n psi>

Its real part is the Riemannian metric pulled back to parameter space and its
imaginary part is the Berry curvature form (returned raw; the curvature
two-form is sometimes defined as ``-2 Im Q``).  Three independent routes are
provided: finite differences of states, second differences of the fidelity,
and the sum over states. A fourth builds the metric as the ground-state
covariance of the adiabatic generators ``X_m = i (d_m O) O^dagger``.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegeneracyError, LevelCrossingError

NORM_TOL = 1e-8
DEFAULT_STEP = 1e-4


def _check_state(psi, name="state"):
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d amplitude vector")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"{name} is not normalized (norm = {norm:.12g})")
    return psi


def fidelity(psi, phi):
    """Overlap modulus ``|<psi|phi>|`` of two normalized pure states."""
    psi = _check_state(psi, "psi")
    phi = _check_state(phi, "phi")
    if psi.shape != phi.shape:
        raise ValueError(f"dimension mismatch: {psi.size} vs {phi.size}")
    return float(min(abs(np.vdot(psi, phi)), 1.0))


def fubini_study_distance(psi, phi):
    """Fubini-Study distance ``arccos F``, in ``[0, pi/2]``."""
    return float(np.arccos(np.clip(fidelity(psi, phi), -1.0, 1.0)))


@dataclass(frozen=True)
class StateMap:
    """A deterministic map from parameter points to normalized states.

    ``evaluate`` receives a float array of length ``dim`` and must return a
    state of length ``hilbert_dim``.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    dim: int
    hilbert_dim: int

    def __call__(self, point):
        psi = np.asarray(self.evaluate(np.asarray(point, dtype=float)), dtype=complex)
        if psi.shape != (self.hilbert_dim,):
            raise ValueError(f"state map returned shape {psi.shape}, expected ({self.hilbert_dim},)")
        return psi


@dataclass(frozen=True)
class GeometricTensor:
    """Hermitian geometric tensor ``Q`` at ``point``.

    The constructor symmetrizes ``values`` and checks that the real part is
    positive semidefinite.
    """

    values: np.ndarray
    point: np.ndarray

    def __post_init__(self):
        q = np.atleast_2d(np.asarray(self.values, dtype=complex))
        if q.shape[0] != q.shape[1]:
            raise ValueError("geometric tensor must be square")
        q = 0.5 * (q + q.conj().T)
        scale = max(1.0, float(np.abs(q).max()))
        lowest = np.linalg.eigvalsh(q.real).min()
        if lowest < -1e-10 * scale:
            raise AssertionError(f"metric is not positive semidefinite (min eigenvalue {lowest:.3e})")
        object.__setattr__(self, "values", q)
        object.__setattr__(self, "point", np.atleast_1d(np.asarray(self.point, dtype=float)))

    @property
    def metric(self):
        return self.values.real.copy()

    @property
    def berry_curvature(self):
        return self.values.imag.copy()


def _as_point(point, dim):
    lam = np.atleast_1d(np.asarray(point, dtype=float))
    if lam.shape != (dim,):
        raise ValueError(f"expected a point with {dim} coordinates, got shape {lam.shape}")
    if not np.all(np.isfinite(lam)):
        raise ValueError("parameter point has non-finite coordinates")
    return lam


def _align_phase(psi, reference):
    """Multiply ``psi`` by the phase making ``<reference|psi>`` real positive."""
    ov = np.vdot(reference, psi)
    if abs(ov) == 0.0:
        return psi
    return psi * (abs(ov) / ov)


def qgt_finite_difference(state_map, point, step=DEFAULT_STEP):
    """Geometric tensor from central differences of the (phase-aligned) states."""
    if step <= 0:
        raise ValueError("step must be positive")
    lam = _as_point(point, state_map.dim)
    psi = state_map(lam)
    derivs = np.empty((psi.size, lam.size), dtype=complex)
    for mu in range(lam.size):
        shift = np.zeros_like(lam)
        shift[mu] = step
        plus = _align_phase(state_map(lam + shift), psi)
        minus = _align_phase(state_map(lam - shift), psi)
        derivs[:, mu] = (plus - minus) / (2 * step)
    horizontal = derivs - np.outer(psi, psi.conj() @ derivs)
    return GeometricTensor(derivs.conj().T @ horizontal, lam)


def metric_from_fidelity(state_map, point, step=DEFAULT_STEP):
    """Metric from ``ds^2 ~ 2 (1 - F)`` evaluated on a symmetric stencil.

    Diagonal entries come from displacements along the coordinate axes,
    off-diagonal ones from the polarization identity on ``e_m +/- e_n``.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    lam = _as_point(point, state_map.dim)
    psi = state_map(lam)

    def quadratic_form(direction):
        drops = [1.0 - fidelity(psi, state_map(lam + s * step * direction)) for s in (1.0, -1.0)]
        return sum(drops) / step**2

    m = lam.size
    eye = np.eye(m)
    g = np.empty((m, m))
    for mu in range(m):
        g[mu, mu] = quadratic_form(eye[mu])
        for nu in range(mu):
            g[mu, nu] = g[nu, mu] = 0.25 * (
                quadratic_form(eye[mu] + eye[nu]) - quadratic_form(eye[mu] - eye[nu])
            )
    return g


def qgt_perturbative(eigensystem, dH, gap_tol=1e-10, point=None):
    """Sum-over-states geometric tensor.

        Q_mn = sum_{n>0} <0|d_m H|n><n|d_n H|0> / (E_n - E_0)^2

    Parameters
    ----------
    eigensystem : EigenSystem
        Complete spectrum of ``H(lam)`` (ascending energies, column vectors).
    dH : sequence of ndarray
        The operators ``d H / d lam^m``.
    gap_tol : float
        Minimal allowed gap above the ground state.
    """
    E = np.asarray(eigensystem.energies)
    V = np.asarray(eigensystem.vectors)
    gap = E[1] - E[0]
    if gap < gap_tol:
        raise DegeneracyError(
            f"sum over states diverges: ground-state gap {gap:.3e} below {gap_tol:.1e}", gap=gap
        )
    psi0 = V[:, 0]
    # rows: <n|d_m H|0> for n >= 1
    elements = np.stack([V[:, 1:].conj().T @ (np.asarray(op) @ psi0) for op in dH], axis=1)
    weighted = elements / (E[1:] - E[0])[:, None]
    q = weighted.conj().T @ weighted
    if point is None:
        point = np.full(len(dH), np.nan)
    return GeometricTensor(q, point)


def _clusters(energies, tol):
    groups, start = [], 0
    for i in range(1, len(energies) + 1):
        if i == len(energies) or energies[i] - energies[i - 1] > tol:
            groups.append(np.arange(start, i))
            start = i
    return groups


def match_eigenbasis(center, shifted, degeneracy_tol=1e-8, min_overlap=0.5):
    """Reorder and rotate the eigenvectors of ``shifted`` to follow those of ``center``.

    States are paired by a maximal-overlap assignment; inside each degenerate
    cluster of ``center`` the paired vectors are rotated by the unitary that
    best aligns them (phase alignment for non-degenerate levels).
    """
    V0 = np.asarray(center.vectors, dtype=complex)
    V1 = np.asarray(shifted.vectors, dtype=complex)
    E1 = np.asarray(shifted.energies)
    overlap = V0.conj().T @ V1
    _, perm = linear_sum_assignment(-np.abs(overlap) ** 2)
    if abs(E1[perm[0]] - E1[0]) > degeneracy_tol:
        raise LevelCrossingError(
            f"ground state is followed to level {perm[0]} (energy {E1[perm[0]]:.6g} "
            f"vs {E1[0]:.6g}): level crossing inside the stencil"
        )
    V1 = V1[:, perm]
    for cluster in _clusters(np.asarray(center.energies), degeneracy_tol):
        block = V0[:, cluster].conj().T @ V1[:, cluster]
        u, s, vh = np.linalg.svd(block)
        if s.min() < min_overlap:
            raise LevelCrossingError(
                f"levels {cluster[0]}..{cluster[-1]} lost adiabatic continuity "
                f"(overlap {s.min():.3g})"
            )
        V1[:, cluster] = V1[:, cluster] @ (u @ vh).conj().T
    return V1


def adiabatic_generator_metric(center, forward, step, backward=None, degeneracy_tol=1e-8):
    """Metric as the ground-state covariance of the adiabatic generators.

    For each direction the unitary ``O = sum_n |n(lam + d)><n(lam)|`` is built
    from the matched eigenbases, ``X_m = i (d_m O) O^dagger`` is formed by
    finite differences and

        g_mn = 1/2 <{X_m - <X_m>, X_n - <X_n>}>

    is evaluated in the ground state at ``lam``.

    Parameters
    ----------
    center : EigenSystem
        Spectrum at ``lam``.
    forward : sequence of EigenSystem
        Spectra at ``lam + step e_m``.
    step : float
    backward : sequence of EigenSystem, optional
        Spectra at ``lam - step e_m``; when given, central differences are used.
    """
    V0 = np.asarray(center.vectors, dtype=complex)
    d = V0.shape[0]
    generators = []
    for mu, fwd in enumerate(forward):
        O_plus = match_eigenbasis(center, fwd, degeneracy_tol) @ V0.conj().T
        if backward is None:
            dO = (O_plus - np.eye(d)) / step
        else:
            O_minus = match_eigenbasis(center, backward[mu], degeneracy_tol) @ V0.conj().T
            dO = (O_plus - O_minus) / (2 * step)
        # O(lam, 0) is the identity, so O^dagger drops out at the base point
        generators.append(1j * dO)

    psi0 = V0[:, 0]
    centered = []
    for X in generators:
        mean = np.vdot(psi0, X @ psi0)
        centered.append(X - mean * np.eye(d))
    m = len(centered)
    g = np.empty((m, m))
    for mu in range(m):
        for nu in range(m):
            anti = centered[mu] @ centered[nu] + centered[nu] @ centered[mu]
            g[mu, nu] = 0.5 * np.vdot(psi0, anti @ psi0).real
    return 0.5 * (g + g.T)


def hamiltonian_eigensystems(hamiltonian, point, step):
    """Spectra at ``point`` and on the +/- stencil, for :func:`adiabatic_generator_metric`."""
    from .spin import full_spectrum

    lam = np.atleast_1d(np.asarray(point, dtype=float))
    center = full_spectrum(hamiltonian(lam))
    eye = np.eye(lam.size)
    forward = [full_spectrum(hamiltonian(lam + step * e)) for e in eye]
    backward = [full_spectrum(hamiltonian(lam - step * e)) for e in eye]
    return center, forward, backward


def relative_difference(a, b):
    """Max-norm difference of two arrays relative to the max-norm of ``b``."""
    a, b = np.asarray(a), np.asarray(b)
    scale = np.abs(b).max()
    if scale == 0:
        return float(np.abs(a).max())
    return float(np.abs(a - b).max() / scale)
