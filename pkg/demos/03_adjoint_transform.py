"""Adjoint transforms of Willmore surfaces and the duality between them.

mu is obtained from the S-Willmore closed form, from the quadratic
<eta, eta> = 0, or from a solution of Hill's equation.  The adjoint Ytilde
is again Willmore and its own adjoint is the original surface.
"""
import numpy as np

from lightcone import adjoint, chart
from lightcone.chart import GridSpec
from lightcone.jet import Jet

KEYS = ("coto", "willmore_adjoint", "rho_duality", "mutilde_identity", "back_coto",
        "inner_sigma", "round_trip")

# %% Clifford torus: mu = 0, sigma = 1/4, the adjoint is the antipodal torus
run = adjoint.adjoint_transform(chart.catalog("clifford"), GridSpec(16, 16), "swillmore")
print("clifford sigma", run.adjoint.sigma.value.real.mean(), "rho", run.adjoint.rho.value.real.mean())
for k in KEYS:
    print(f"  {k:18s} {run.report[k]:.1e}")

# %% Veronese: <kappa, kappa> = 0, so the quadratic degenerates
run = adjoint.adjoint_transform(chart.catalog("veronese"), GridSpec(16, 16), "quadratic")
print("veronese branch used:", run.mufield.branch)
print("  max residual", max(run.report[k] for k in KEYS))

# %% Quadratic branch on synthetic data with two distinct roots
rng = np.random.default_rng(0)
kap = np.r_[0, 0, rng.normal(size=4) + 1j * rng.normal(size=4)]
Dk = np.r_[0, 0, rng.normal(size=4) + 1j * rng.normal(size=4)]
inner = lambda a, b: -a[0] * b[0] + a[1:] @ b[1:]
m1, m2, disc = adjoint.quadratic_roots(inner(kap, kap) / 4, inner(Dk, kap), inner(Dk, Dk))
for m in (m1, m2):
    eta = Dk + np.conj(m) / 2 * kap
    print(f"  root {m:.4f}: <eta,eta> = {abs(inner(eta, eta)):.1e}")

# %% Hill's equation: y = z solves y_zz = 0, giving mu = -2/z with theta = 0
U, V = Jet.variables(np.array([0.5, -0.2]), np.array([0.3, 0.8]), 4)
mf = adjoint.mu_from_hill(U + 1j * V, Jet.zeros((2,), 4))
print("mu from y = z:", mf.mu.value, "expected", -2 / np.array([0.5 + 0.3j, -0.2 + 0.8j]))
