"""Ground-state geometry of quadratic fermionic Hamiltonians.

For real ``A`` (symmetric) and ``B`` (antisymmetric),

    H = sum_ij c_i^+ A_ij c_j + 1/2 sum_ij (c_i^+ B_ij c_j^+ + h.c.)

has a ground state labelled by the orthogonal factor ``T`` of the polar
decomposition of ``Z = A - B``. Overlaps, the metric and the canonical
rotation angles all follow from ``T``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import BranchError, CriticalPointError, DegeneracyError, ParitySectorError

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class QuadraticSpec:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        if A.shape != B.shape or A.shape[0] != A.shape[1]:
            raise ValueError(f"A and B must be square of equal size, got {A.shape} and {B.shape}")
        if np.abs(A - A.T).max() > 1e-12:
            raise ValueError("A must be symmetric")
        if np.abs(B + B.T).max() > 1e-12:
            raise ValueError("B must be antisymmetric")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def L(self):
        return self.A.shape[0]


@dataclass(frozen=True)
class OrthogonalGS:
    """Orthogonal polar factor ``T`` labelling a quasi-free ground state."""

    T: np.ndarray
    det_sign: int
    min_singular_value: float = np.nan


@dataclass(frozen=True)
class AntisymmetricLog:
    """Real antisymmetric ``K`` with ``expm(K) = T`` and its rotation angles."""

    K: np.ndarray
    angles: np.ndarray = field(default_factory=lambda: np.zeros(0))


def z_matrix(spec):
    return spec.A - spec.B


def polar_orthogonal(Z, singular_tol=SINGULAR_TOL):
    """Orthogonal part ``T = U V^T`` of ``Z = U S V^T``.

    Raises
    ------
    CriticalPointError
        If ``Z`` is singular (a zero-energy quasiparticle).
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValueError("Z must be a square matrix")
    U, s, Vt = np.linalg.svd(Z)
    if s.min() <= singular_tol:
        raise CriticalPointError(f"Z is singular: smallest singular value {s.min():.3e}")
    T = U @ Vt
    sign = int(np.sign(np.linalg.det(U) * np.linalg.det(Vt)))
    return OrthogonalGS(T, sign, float(s.min()))


def gs_fidelity_det(T1, T2):
    """Ground-state overlap ``sqrt|det((T + T')/2)|``.

    States with different fermion parity (``det T`` of opposite sign) are
    orthogonal; the determinant then vanishes analytically and 0 is returned
    exactly instead of its rounding noise.
    """
    if T1.T.shape != T2.T.shape:
        raise ValueError(f"dimension mismatch: {T1.T.shape} vs {T2.T.shape}")
    if T1.det_sign != T2.det_sign:
        return 0.0
    return float(min(np.sqrt(abs(np.linalg.det(0.5 * (T1.T + T2.T)))), 1.0))


def log_orthogonal(T, branch_tol=1e-10):
    """Principal logarithm of a special orthogonal matrix.

    ``T`` is brought to real Schur form, which for an orthogonal matrix is
    block diagonal with 2x2 rotations and 1x1 blocks equal to +1. Each rotation
    contributes its angle in ``(-pi, pi)``.

    Raises
    ------
    ParitySectorError
        If ``det T = -1``.
    BranchError
        If ``T`` has an eigenvalue at -1, where the logarithm is not unique.
    """
    if T.det_sign != 1:
        raise ParitySectorError("det T = -1: ground state lies in the odd parity sector")
    S, Q = scipy.linalg.schur(np.asarray(T.T, dtype=float), output="real")
    n = S.shape[0]
    logS = np.zeros_like(S)
    angles = []
    i = 0
    while i < n:
        if i + 1 < n and S[i + 1, i] != 0.0:
            cos_part = 0.5 * (S[i, i] + S[i + 1, i + 1])
            sin_part = 0.5 * (S[i + 1, i] - S[i, i + 1])
            theta = np.arctan2(sin_part, cos_part)
            if abs(np.exp(1j * theta) + 1) < branch_tol:
                raise BranchError(f"eigenvalue at -1 (rotation angle {theta:.12g})")
            logS[i + 1, i] = theta
            logS[i, i + 1] = -theta
            angles.append(theta)
            i += 2
        else:
            if S[i, i] < 0:
                raise BranchError("eigenvalue at -1: logarithm branch is ambiguous")
            i += 1
    K = Q @ logS @ Q.T
    return AntisymmetricLog(0.5 * (K - K.T), np.asarray(angles))


def metric_from_K(K_map, point, step=1e-4):
    """Metric ``g_mn = (1/8) Tr(d_m K^T d_n K)`` by central differences of ``K``.

    ``(1/8) Tr(d_m K d_n K)`` is negative semidefinite for antisymmetric
    ``K``; the transpose gives the nonnegative convention, which matches
    :func:`metric_from_angles`.

    The fidelity depends on ``T^T dT`` rather than ``dK``; the two coincide
    when ``K`` and its derivatives commute, as for translation-invariant
    chains where all ``K`` share the momentum blocks.

    Raises
    ------
    BranchError
        If ``K`` jumps by more than pi/2 (spectral norm) across the stencil.
    """
    lam = np.atleast_1d(np.asarray(point, dtype=float))
    derivs = []
    for mu in range(lam.size):
        shift = np.zeros_like(lam)
        shift[mu] = step
        Kp = _log_K(K_map(lam + shift))
        Km = _log_K(K_map(lam - shift))
        jump = np.linalg.norm(Kp - Km, 2)
        if jump > np.pi / 2:
            raise BranchError(f"K jumps by {jump:.3g} across the stencil in direction {mu}")
        derivs.append((Kp - Km) / (2 * step))
    m = lam.size
    g = np.empty((m, m))
    for mu in range(m):
        for nu in range(m):
            g[mu, nu] = np.trace(derivs[mu].T @ derivs[nu]) / 8
    return 0.5 * (g + g.T)


def _log_K(value):
    return value.K if isinstance(value, AntisymmetricLog) else np.asarray(value, dtype=float)


def metric_from_angles(theta_derivs):
    """``g_mn = (1/4) sum_k (d theta_k / d lam^m)(d theta_k / d lam^n)``.

    ``theta_derivs`` has one row per mode and one column per parameter.
    """
    grads = np.atleast_2d(np.asarray(theta_derivs, dtype=float))
    if not np.all(np.isfinite(grads)):
        raise CriticalPointError("non-finite angle gradient: a quasiparticle energy vanishes")
    return 0.25 * grads.T @ grads


def quadratic_ground_energy(spec):
    """Ground energy ``(Tr A - sum of singular values of Z) / 2``."""
    s = np.linalg.svd(z_matrix(spec), compute_uv=False)
    return 0.5 * (np.trace(spec.A) - s.sum())


def fermion_operators(L):
    """Dense Jordan-Wigner annihilation operators ``c_0 .. c_{L-1}``.

    Mode 0 is the most significant bit of the basis index; bit value 1 means
    occupied.
    """
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    string = np.diag([1.0, -1.0])
    ops = []
    for j in range(L):
        factors = [string] * j + [a] + [np.eye(2)] * (L - j - 1)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def many_body_hamiltonian(spec, ops=None):
    """The ``2^L``-dimensional matrix of the quadratic Hamiltonian."""
    L = spec.L
    c = fermion_operators(L) if ops is None else ops
    cdag = [op.T for op in c]
    H = np.zeros((2**L, 2**L))
    for i in range(L):
        for j in range(L):
            if spec.A[i, j] != 0.0:
                H += spec.A[i, j] * cdag[i] @ c[j]
            if spec.B[i, j] != 0.0:
                pair = cdag[i] @ cdag[j]
                H += 0.5 * spec.B[i, j] * (pair + pair.T)
    return H


def parity_operator(L):
    """Fermion parity ``(-1)^N`` as a diagonal vector."""
    idx = np.arange(2**L)
    counts = np.array([bin(i).count("1") for i in idx])
    return np.where(counts % 2 == 0, 1.0, -1.0)


def ed_overlap_oracle(spec1, spec2, gap_tol=1e-10, max_sites=10):
    """``|<GS|GS'>|`` from exact diagonalization of both many-body Hamiltonians.

    Ground states in different parity sectors are orthogonal; that case is
    detected from the parities and reported as exactly 0.
    """
    if spec1.L != spec2.L:
        raise ValueError("specs must have the same number of modes")
    if spec1.L > max_sites:
        raise ValueError(f"ED oracle limited to L <= {max_sites}")
    ops = fermion_operators(spec1.L)
    parity = parity_operator(spec1.L)
    states = []
    for spec in (spec1, spec2):
        E, V = scipy.linalg.eigh(many_body_hamiltonian(spec, ops), subset_by_index=[0, 1])
        if E[1] - E[0] < gap_tol:
            raise DegeneracyError(f"many-body ground state degenerate (gap {E[1] - E[0]:.3e})", gap=E[1] - E[0])
        psi = V[:, 0]
        states.append((psi, np.sign(psi**2 @ parity)))
    (psi1, p1), (psi2, p2) = states
    if p1 != p2:
        return 0.0
    return float(min(abs(np.vdot(psi1, psi2)), 1.0))
