"""The point-pair map H = Y ^ Yhat into the space of Minkowski 2-planes.

For an adjoint pair H is harmonic.  Its energy density is 2(rho + rho_bar).
A partner nudged off the adjoint loses harmonicity at first order.
"""
import numpy as np

from lightcone import adjoint, chart, pair, pairmap
from lightcone.chart import GridSpec

clifford = chart.catalog("clifford")
grid = GridSpec(32, 32)
run = adjoint.adjoint_transform(clifford, grid, "swillmore")
Y, Yhat = run.frame.Y, run.adjoint.Yhat

pm = pairmap.pairmap_fundamental(Y, Yhat)
pp = pair.pair_invariants(run.frame, Yhat)
print("<H,H> + 1:", np.abs(pm.hh + 1).max())
print("<H_z,H_z> - theta:", np.abs(pm.hz_hz - pp.theta.value).max())
print("<H_z,H_zbar> - Re rho:", np.abs(pm.hz_hzb - pp.rho.value.real).max())

# %% Harmonicity and energy
print("harmonic residual (adjoint pair):", pairmap.harmonic_residual(Y, Yhat))
E = pairmap.pair_energy(pp.rho.value, grid, clifford.domain)
print(f"E(H) = {E.real:.10f}, -4 pi^2 = {-4 * np.pi**2:.10f}")

# %% Perturbed partners: residual grows linearly in eps
for eps in (0.01, 0.02, 0.05):
    bad = pairmap.perturbed_partner(run.frame, eps)
    print(f"eps = {eps}: harmonic residual {pairmap.harmonic_residual(Y, bad):.4f}")
