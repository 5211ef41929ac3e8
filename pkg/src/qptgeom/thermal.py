"""Fidelity between mixed and thermal states.

For Gibbs states of one Hamiltonian at inverse temperatures ``b0`` and ``b1``
the Uhlmann fidelity reduces to partition functions,

    F = Z((b0 + b1) / 2) / sqrt(Z(b0) Z(b1)),

and for nearby temperatures ``F(b, b + db) ~ exp(-db^2 c_V / (8 b^2))`` with
``c_V = b^2 Var_b(H)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class GibbsSpec:
    """Energy levels ``energies`` at inverse temperature ``beta``."""

    energies: np.ndarray
    beta: float

    def __post_init__(self):
        E = np.atleast_1d(np.asarray(self.energies, dtype=float))
        if E.ndim != 1 or E.size == 0 or not np.all(np.isfinite(E)):
            raise ValueError("energies must be a non-empty finite 1-d array")
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta must be positive, got {self.beta}")
        object.__setattr__(self, "energies", E)

    def at(self, beta):
        return GibbsSpec(self.energies, beta)


def check_density_matrix(rho, name="rho"):
    """Validate Hermiticity, unit trace and positivity; return a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if np.abs(rho - rho.conj().T).max() > 1e-12:
        raise ValueError(f"{name} is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise ValueError(f"{name} does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -CLAMP_TOL:
        raise ValueError(f"{name} has negative eigenvalues")
    return rho


def _psd_sqrt(M):
    w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    w = np.where(w < 0, 0.0, w)
    return (V * np.sqrt(w)) @ V.conj().T


def uhlmann_fidelity(rho0, rho1):
    """``Tr sqrt(sqrt(rho1) rho0 sqrt(rho1))``, reducing to ``|<psi|phi>|`` for pure states."""
    rho0 = check_density_matrix(rho0, "rho0")
    rho1 = check_density_matrix(rho1, "rho1")
    if rho0.shape != rho1.shape:
        raise ValueError(f"dimension mismatch: {rho0.shape} vs {rho1.shape}")
    s1 = _psd_sqrt(rho1)
    inner = s1 @ rho0 @ s1
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(min(np.sqrt(np.clip(w, 0.0, None)).sum(), 1.0))


def _check_distribution(p, name):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
        raise ValueError(f"{name} is not a probability vector")
    return p


def commuting_fidelity(p0, p1):
    """Bhattacharyya coefficient ``sum_n sqrt(p0_n p1_n)``."""
    p0 = _check_distribution(p0, "p0")
    p1 = _check_distribution(p1, "p1")
    if p0.shape != p1.shape:
        raise ValueError("distributions have different lengths")
    return float(min(np.sqrt(p0 * p1).sum(), 1.0))


def log_partition(energies, beta):
    """``log Z(beta)`` with the energies shifted by their minimum."""
    E = np.asarray(energies, dtype=float)
    e_min = E.min()
    return float(logsumexp(-beta * (E - e_min)) - beta * e_min)


def gibbs_distribution(spec):
    E = spec.energies - spec.energies.min()
    w = -spec.beta * E
    return np.exp(w - logsumexp(w))


def gibbs_fidelity(spec, beta1):
    """Fidelity between the Gibbs states at ``spec.beta`` and ``beta1``."""
    if not (np.isfinite(beta1) and beta1 > 0):
        raise ValueError(f"beta1 must be positive, got {beta1}")
    # shift the spectrum so that the e_min terms cancel identically
    E = spec.energies - spec.energies.min()
    b0 = spec.beta
    log_f = log_partition(E, 0.5 * (b0 + beta1)) - 0.5 * (log_partition(E, b0) + log_partition(E, beta1))
    return float(min(np.exp(log_f), 1.0))


def energy_variance(spec):
    p = gibbs_distribution(spec)
    E = spec.energies - spec.energies.min()
    mean = p @ E
    return float(max(p @ (E - mean) ** 2, 0.0))


def specific_heat(spec):
    """``c_V = beta^2 (<H^2> - <H>^2)``."""
    return spec.beta**2 * energy_variance(spec)


def fidelity_expansion_check(spec, dbeta):
    """Exact ``F(beta, beta + dbeta)`` and its quadratic approximation.

    Returns ``(exact, approx)`` with
    ``approx = exp(-dbeta^2 c_V / (8 beta^2))``.
    """
    exact = gibbs_fidelity(spec, spec.beta + dbeta)
    approx = float(np.exp(-(dbeta**2) * specific_heat(spec) / (8 * spec.beta**2)))
    return exact, approx


def thermal_line_element(spec, dbeta):
    """``ds^2 = c_V beta^-2 dbeta^2 = Var_beta(H) dbeta^2``."""
    return energy_variance(spec) * dbeta**2
