"""
Quasi-free ground states from an orthogonal matrix
==================================================

A quadratic fermion Hamiltonian with real hopping A and pairing B has its
ground state fixed by the orthogonal polar factor T of Z = A - B. Overlaps
reduce to an L x L determinant instead of a 2^L dimensional eigenproblem.
"""

import numpy as np
import scipy.linalg

from qptgeom import quasifree as qf
from qptgeom import xy

rng = np.random.default_rng(1)

# Two random six-mode Hamiltonians, compared against brute-force diagonalization
L = 6
A, A2, K, K2 = rng.normal(size=(4, L, L))
a = qf.QuadraticSpec(A + A.T, K - K.T)
b = qf.QuadraticSpec(a.A + 0.3 * (A2 + A2.T), a.B + 0.3 * (K2 - K2.T))
Ta, Tb = qf.polar_orthogonal(qf.z_matrix(a)), qf.polar_orthogonal(qf.z_matrix(b))

print(f"det T signs (ground-state parity): {Ta.det_sign:+d}, {Tb.det_sign:+d}")
print(f"overlap from sqrt|det((T + T')/2)|: {qf.gs_fidelity_det(Ta, Tb):.12f}")
print(f"overlap from 2^{L} diagonalization:  {qf.ed_overlap_oracle(a, b):.12f}")

# The logarithm K = ln T turns small changes of T into a flat quadratic form:
# 2 (1 - F) ~ Tr(dK^T dK) / 8 for commuting changes.
J = np.array([[0.0, -1.0], [1.0, 0.0]])
angles = np.array([0.4, -1.1, 2.0])
d_angles = 1e-3 * np.array([1.0, -2.0, 0.5])
K0 = scipy.linalg.block_diag(*(t * J for t in angles))
dK = scipy.linalg.block_diag(*(t * J for t in d_angles))
T0 = qf.OrthogonalGS(scipy.linalg.expm(K0), 1)
T1 = qf.OrthogonalGS(scipy.linalg.expm(K0 + dK), 1)
print(f"\n2 (1 - F)         = {2 * (1 - qf.gs_fidelity_det(T0, T1)):.6e}")
print(f"Tr(dK^T dK) / 8   = {np.trace(dK.T @ dK) / 8:.6e}")
print("recovered angles  =", np.round(np.sort(np.abs(qf.log_orthogonal(T0).angles)), 12))

# On the XY ring the same construction gives the metric from the rotation
# angles theta_k = arccos(eps_k / Lambda_k) of each momentum pair.
L, point = 101, (0.5, 0.5)


def K_map(lam):
    spec = xy.xy_quadratic_spec(L, lam[0], lam[1], "antiperiodic")
    return qf.log_orthogonal(qf.polar_orthogonal(qf.z_matrix(spec)))


print(f"\nXY ring L={L}, even-parity sector, (h, gamma) = {point}")
print("  from dK       ", np.round(qf.metric_from_K(K_map, point), 8).tolist())
print("  from angles   ", np.round(xy.metric_finite_size(xy.XYPoint(*point, L), sector="antiperiodic"), 8).tolist())
