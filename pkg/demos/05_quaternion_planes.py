"""Oriented 2-planes in R^4 through quaternions.

Each oriented plane U has unit imaginary normals N, R with N x = -x R on U.
Two planes touch when they share N or R and co-touch when one normal flips.
The same relations are detected by the contact-element invariants and by
the signed singular values of the pairing matrix.
"""
import time

import numpy as np

from lightcone import pair, quat
from lightcone.quat import I, J, K, ONE, OrientedPlane4

U = OrientedPlane4.spanned(ONE, I)
print("span{1, i}:", quat.normals_of_plane(U))
print("reversed:  ", quat.normals_of_plane(U.reversed()))

# %% Two complex lines of C^2 touch
V = OrientedPlane4.spanned(J, K)
print(quat.lr_touch(U, V))
print("rho_u =", pair.contact_invariants(quat.contact_element(U), quat.contact_element(V))[1])

# %% Multiplying by a unit quaternion on the right keeps N, on the left keeps R
rng = np.random.default_rng(1)
q = quat.random_unit(rng)
print("right multiplication:", quat.lr_touch(U, U.right_mul(q)))
print("left multiplication: ", quat.lr_touch(U, U.left_mul(q)))

# %% Brute-force agreement of the three criteria
t = time.perf_counter()
res = quat.equivalence_check(1000, seed=0)
print(res, f"{time.perf_counter() - t:.2f}s")
