"""Invariants of surface pairs and of contact elements.

A second surface Yhat with <Y, Yhat> = -1 gives the invariants theta and
rho.  They are computed from the frame decomposition and from bivectors, and
then compared with the contact-element invariants.
"""
import numpy as np

from lightcone import chart, invariants, lorentz, pair, quat

veronese = chart.catalog("veronese")
u, v = np.array([[0.3, -0.5]]), np.array([[0.4, 0.1]])

# %% Two routes to theta and rho on a random pair
frame, Yhat = pair.random_pair(4, veronese, u, v)
pp = pair.pair_invariants(frame, Yhat)
th, rh = pair.bivector_invariants(frame.Y, Yhat)
print("theta:", pp.theta.value.ravel())
print("rho:  ", pp.rho.value.ravel())
print("bivector route differs by", np.max(np.abs(th - pp.theta.value)), np.max(np.abs(rh - pp.rho.value)))
print("fundamental equation residual", pair.fundamental_residual(frame, pp))

# %% Swapping the surfaces conjugates rho
ths, rhs = pair.bivector_invariants(Yhat, frame.Y)
print("swap:", np.max(np.abs(ths - th)), np.max(np.abs(rhs - np.conj(rh))))

# %% The tangent sphere S(p) against Yhat at Yhat(p)
dt, dr = pair.tangent_sphere_check(frame, Yhat, pp)
print("same-point invariants vs (theta, rho):", dt.max(), dr.max())

# %% Clifford torus with its central sphere congruence: mu = 0, rho = -1/4
cl = invariants.surface_frame(chart.catalog("clifford"), chart.GridSpec(8, 8))
cp = pair.pair_invariants(cl, cl.N)
print("Clifford with N: theta", np.abs(cp.theta.value).max(), "rho", cp.rho.value.real.mean())

# %% Contact elements at one point: touch and co-touch
S = quat.contact_element(quat.OrientedPlane4.spanned(quat.ONE, quat.I))
print("identical:", pair.contact_invariants(S, S), pair.touch_predicates(S, S))
print("reversed: ", pair.contact_invariants(S, S.reversed()), pair.touch_predicates(S, S.reversed()))

# %% Contact elements at distinct points recover theta, rho up to the factor of Yhat
cT = veronese.transformed(lorentz.random_lorentz(5, veronese.n))
f2 = invariants.frame_at(chart.lift_chart(veronese, u, v))
Yh2 = pair.normalize_pair(f2.Y, chart.lift_chart(cT, u, v).truncate(f2.N.order))
p2 = pair.pair_invariants(f2, Yh2)
lam = np.sqrt(2 * lorentz.inner(Yh2.dz(), Yh2.dzb()).value.real)
tc, rc = pair.contact_invariants(pair.contact_element_of_lift(f2.Y, (0, 0)),
                                 pair.contact_element_of_lift(Yh2, (0, 0)))
print("contact * lambda_hat:", tc * lam[0, 0], rc * lam[0, 0])
print("pair invariants:     ", p2.theta.value[0, 0], p2.rho.value[0, 0])
