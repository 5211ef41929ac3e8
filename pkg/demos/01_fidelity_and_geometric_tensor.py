"""
Fidelity and the quantum geometric tensor
=========================================

Ground states of a parameter-dependent Hamiltonian trace out a surface in
Hilbert space. Its metric can be read off the overlap of neighbouring ground
states, from derivatives of the states themselves, or from a sum over excited
states. This script runs all of them on a single spin and on a seven-site XY
chain.
"""

import numpy as np

from qptgeom import geometry, spin

sx = np.array([[0, 1], [1, 0]], dtype=complex)
sy = np.array([[0, -1j], [1j, 0]])
sz = np.diag([1.0, -1.0]).astype(complex)

# A spin whose field points along (theta, phi). The ground state covers the
# Bloch sphere, so the metric is 1/4 of the round metric and Im Q is sin(theta)/4.


def bloch(point):
    t, p = point
    return -(np.sin(t) * np.cos(p) * sx + np.sin(t) * np.sin(p) * sy + np.cos(t) * sz) / 2


def bloch_state(point):
    return spin.ground_state(bloch(point))[1]


state_map = geometry.StateMap(bloch_state, dim=2, hilbert_dim=2)
q = geometry.qgt_finite_difference(state_map, (1.0, 0.3))
print("Bloch sphere at theta = 1:")
print("  metric        ", np.round(q.metric, 8).tolist())
print("  expected      ", [[0.25, 0.0], [0.0, round(float(np.sin(1.0)) ** 2 / 4, 8)]])
print("  Im Q_(t,p)    ", round(q.berry_curvature[0, 1], 8), " expected", round(np.sin(1.0) / 4, 8))

# The XY chain H = sum_j [-(1+g)/4 sx sx - (1-g)/4 sy sy + h/2 sz] on a ring.

L, point = 7, (0.3, 0.6)
spec = spin.SpinChainSpec(L, *point)
xy_map = spin.xy_state_map(L)
es = spin.full_spectrum(spin.build_xy_hamiltonian(spec))

routes = {
    "state differences": geometry.qgt_finite_difference(xy_map, point).metric,
    "fidelity drops": geometry.metric_from_fidelity(xy_map, point),
    "sum over states": geometry.qgt_perturbative(es, [spin.dH(spec, "h"), spin.dH(spec, "gamma")]).metric,
}


def hamiltonian(lam):
    return spin.build_xy_hamiltonian(spin.SpinChainSpec(L, *lam))


center, fwd, bwd = geometry.hamiltonian_eigensystems(hamiltonian, point, 1e-4)
routes["adiabatic generators"] = geometry.adiabatic_generator_metric(center, fwd, 1e-4, backward=bwd)

print(f"\nXY chain L={L} at (h, gamma) = {point}")
for name, g in routes.items():
    print(f"  {name:22s} g_hh={g[0, 0]:.10f} g_hg={g[0, 1]:+.10f} g_gg={g[1, 1]:.10f}")

# Sweeping the field across the Ising transition: the overlap of neighbouring
# ground states dips where the ground state changes fastest.

hs = np.round(np.arange(0.6, 1.41, 0.01), 10)
states = [spin.xy_state_map(9)((h, 1.0)) for h in np.append(hs, hs[-1] + 0.01)]
F = np.array([geometry.fidelity(a, b) for a, b in zip(states, states[1:])])
print(f"\nL=9, gamma=1: F(h, h+0.01) is smallest at h = {hs[F.argmin()]:.2f} (F = {F.min():.6f})")
print("  the dip sits below h = 1 on a finite ring and moves to 1 as L grows; see 03_xy_metric_and_curvature.py")
