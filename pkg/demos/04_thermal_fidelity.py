"""
Fidelity between thermal states
===============================

Gibbs states of one Hamiltonian commute, so their Uhlmann fidelity is a ratio
of partition functions. For nearby temperatures it is controlled by the
specific heat, F(b, b + db) ~ exp(-db^2 c_V / (8 b^2)).
"""

import numpy as np

from qptgeom import spin, thermal

E = np.array([0.0, 1.0])
spec = thermal.GibbsSpec(E, 1.0)
rho0 = np.diag(thermal.gibbs_distribution(spec))
rho1 = np.diag(thermal.gibbs_distribution(spec.at(2.0)))
print("two-level system, beta 1 -> 2")
print(f"  partition functions  {thermal.gibbs_fidelity(spec, 2.0):.15f}")
print(f"  Uhlmann fidelity     {thermal.uhlmann_fidelity(rho0, rho1):.15f}")

print("\nquadratic approximation; the remainder shrinks 8x per halving of db")
for db in (4e-2, 2e-2, 1e-2, 5e-3):
    exact, approx = thermal.fidelity_expansion_check(spec, db)
    print(f"  db = {db:.0e}:  exact {exact:.12f}  approx {approx:.12f}  diff {abs(exact - approx):.2e}")

# Five-site XY chain: the specific-heat maximum shows up as a fidelity dip when
# the temperature step is proportional to beta.
levels = np.linalg.eigvalsh(spin.build_xy_hamiltonian(spin.SpinChainSpec(5, 0.5, 0.5)))
betas = np.linspace(0.1, 10, 400)
cv = np.array([thermal.specific_heat(thermal.GibbsSpec(levels, b)) for b in betas])
F = np.array([thermal.gibbs_fidelity(thermal.GibbsSpec(levels, b), 1.01 * b) for b in betas])
print("\nXY chain L=5, (h, gamma) = (0.5, 0.5)")
print(f"  c_V peaks at beta = {betas[cv.argmax()]:.3f} (c_V = {cv.max():.4f})")
print(f"  F(beta, 1.01 beta) is lowest at beta = {betas[F.argmin()]:.3f}")
