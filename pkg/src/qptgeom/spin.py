"""Exact diagonalization of the periodic transverse-field XY chain.

The Hamiltonian is

    H = sum_j [ -(1+gamma)/4 sx_j sx_{j+1} - (1-gamma)/4 sy_j sy_{j+1} + h/2 sz_j ]

with site ``L`` identified with site ``0``. Basis states are labelled by the
integer whose binary digits are the spins, site 0 being the most significant
bit; bit value 0 is spin up (sz = +1). In this basis H is real symmetric.
"""

from dataclasses import dataclass
import warnings

import numpy as np
import scipy.linalg

from .errors import DegeneracyError
from .geometry import StateMap

MAX_SITES = 14


class EvenChainWarning(UserWarning):
    """Even chain lengths are allowed but the closed XY formulas assume odd L."""


@dataclass(frozen=True)
class SpinChainSpec:
    """Periodic XY chain with ``L`` sites, field ``h`` and anisotropy ``gamma``."""

    L: int
    h: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if int(self.L) != self.L:
            raise ValueError(f"L must be an integer, got {self.L!r}")
        if self.L < 2:
            raise ValueError("L = 1 has no bonds in a periodic chain; need L >= 2")
        if self.L > MAX_SITES:
            raise ValueError(f"L = {self.L} exceeds the dense budget L <= {MAX_SITES}")
        if not (np.isfinite(self.h) and np.isfinite(self.gamma)):
            raise ValueError("h and gamma must be finite")
        if self.L % 2 == 0:
            warnings.warn(
                f"L = {self.L} is even; the closed-form XY results assume odd L",
                EvenChainWarning,
                stacklevel=3,
            )

    @property
    def is_odd(self):
        return self.L % 2 == 1

    @property
    def dim(self):
        return 2**self.L


@dataclass(frozen=True)
class EigenSystem:
    """Full eigendecomposition: ascending ``energies`` and column ``vectors``."""

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def ground_state(self):
        return self.vectors[:, 0]

    @property
    def gap(self):
        if len(self.energies) < 2:
            return np.inf
        return float(self.energies[1] - self.energies[0])

    def check(self, H=None, residual_tol=1e-9, ortho_tol=1e-10):
        """Assert the decomposition invariants, optionally against ``H``."""
        E, V = self.energies, self.vectors
        if np.any(np.diff(E) < 0):
            raise AssertionError("energies are not sorted ascending")
        gram = V.conj().T @ V
        if np.abs(gram - np.eye(len(E))).max() > ortho_tol:
            raise AssertionError("eigenvectors are not orthonormal")
        if H is not None:
            res = np.linalg.norm(H @ V - V * E, axis=0)
            if res.max() > residual_tol:
                raise AssertionError(f"eigen-residual {res.max():.3g} exceeds {residual_tol}")
        return self


def _spin_bits(L):
    idx = np.arange(2**L)
    bits = (idx[:, None] >> (L - 1 - np.arange(L))[None, :]) & 1
    return idx, bits


def _two_site_flip(L, same, different):
    """Operator flipping both spins of every bond (j, j+1).

    The matrix element is ``same`` when the two spins are parallel and
    ``different`` when antiparallel.
    """
    idx, bits = _spin_bits(L)
    out = np.zeros((2**L, 2**L))
    for j in range(L):
        k = (j + 1) % L
        flipped = idx ^ (1 << (L - 1 - j)) ^ (1 << (L - 1 - k))
        vals = np.where(bits[:, j] == bits[:, k], same, different)
        np.add.at(out, (flipped, idx), vals)
    return out


def _field_operator(L):
    _, bits = _spin_bits(L)
    return np.diag(0.5 * (1 - 2 * bits).sum(axis=1).astype(float))


def dH(spec, direction):
    """Exact derivative of the XY Hamiltonian along ``'h'`` or ``'gamma'``.

    The family is affine in both couplings, so the result does not depend on
    ``spec.h`` or ``spec.gamma``::

        dH/dh     = sum_j sz_j / 2
        dH/dgamma = sum_j (-sx_j sx_{j+1} + sy_j sy_{j+1}) / 4
    """
    if direction == "h":
        return _field_operator(spec.L)
    if direction in ("gamma", "γ", "g"):
        return _two_site_flip(spec.L, same=-0.5, different=0.0)
    raise ValueError(f"unknown direction {direction!r}; expected 'h' or 'gamma'")


def build_xy_hamiltonian(spec):
    """Dense real-symmetric XY Hamiltonian of dimension ``2**L``."""
    hopping = _two_site_flip(spec.L, same=0.0, different=-0.5)
    return hopping + spec.h * dH(spec, "h") + spec.gamma * dH(spec, "gamma")


def _fix_phase(psi):
    # largest-magnitude amplitude made real positive
    i = int(np.argmax(np.abs(psi)))
    return psi * (abs(psi[i]) / psi[i])


def ground_state(H, gap_tol=1e-10):
    """Lowest eigenpair of a Hermitian matrix.

    Returns
    -------
    energy : float
    state : ndarray
        Normalized, with its largest-magnitude amplitude real and positive.
    gap : float
        ``E_1 - E_0`` (``inf`` for a 1x1 matrix).

    Raises
    ------
    DegeneracyError
        If the gap is below ``gap_tol``.
    """
    H = np.asarray(H)
    d = H.shape[0]
    if d == 1:
        return float(np.real(H[0, 0])), np.ones(1, dtype=complex), np.inf
    E, V = scipy.linalg.eigh(H, subset_by_index=[0, 1])
    gap = float(E[1] - E[0])
    if gap < gap_tol:
        raise DegeneracyError(f"ground state degenerate: gap = {gap:.3e} < {gap_tol:.1e}", gap=gap)
    psi = _fix_phase(V[:, 0].astype(complex))
    return float(E[0]), psi, gap


def full_spectrum(H):
    """Dense Hermitian eigendecomposition wrapped as an :class:`EigenSystem`."""
    E, V = scipy.linalg.eigh(np.asarray(H))
    return EigenSystem(E, V)


def xy_eigensystem(L, h, gamma):
    return full_spectrum(build_xy_hamiltonian(SpinChainSpec(L, h, gamma)))


def xy_state_map(L, gap_tol=1e-10):
    """Ground-state map ``(h, gamma) -> |psi_0>`` of the XY chain."""
    SpinChainSpec(L)
    field = _field_operator(L)
    aniso = _two_site_flip(L, same=-0.5, different=0.0)
    hopping = _two_site_flip(L, same=0.0, different=-0.5)

    def evaluate(point):
        h, gamma = point
        return ground_state(hopping + h * field + gamma * aniso, gap_tol)[1]

    return StateMap(evaluate, dim=2, hilbert_dim=2**L)
