"""Quaternions, left/right normal vectors of oriented 2-planes in R^4, and
their (co-)touching relations.

R^4 is identified with H via (w, x, y, z) <-> w + x i + y j + z k, with
(1, i, j, k) positively oriented.  An oriented plane U with orthonormal
basis (a, b) has unique unit imaginary N, R with U = {x : N x = -x R}; the
closed form is N = b conj(a), R = -conj(a) b.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pair

NORMAL_TOL = 1e-10
TOUCH_TOL = 1e-9


def qmul(p, q) -> np.ndarray:
    """Hamilton product, batched over leading axes."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    q = np.array(q, dtype=float)
    q[..., 1:] *= -1.0
    return q


def qnorm(q) -> np.ndarray:
    return np.linalg.norm(np.asarray(q, dtype=float), axis=-1)


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        return cls(*map(float, a))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(qmul(self.array, other.array))

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def __abs__(self) -> float:
        return float(np.linalg.norm(self.array))


ONE = np.array([1.0, 0, 0, 0])
I = np.array([0, 1.0, 0, 0])
J = np.array([0, 0, 1.0, 0])
K = np.array([0, 0, 0, 1.0])


def left_matrix(p) -> np.ndarray:
    """Matrix of x -> p x."""
    return np.stack([qmul(p, e) for e in (ONE, I, J, K)], axis=-1)


def right_matrix(q) -> np.ndarray:
    """Matrix of x -> x q."""
    return np.stack([qmul(e, q) for e in (ONE, I, J, K)], axis=-1)


class PlaneError(ValueError):
    pass


@dataclass(frozen=True)
class OrientedPlane4:
    """Oriented 2-plane in R^4 = H with orthonormal ordered basis (a, b)."""

    a: np.ndarray
    b: np.ndarray

    @classmethod
    def spanned(cls, a, b, tol: float = 1e-10) -> "OrientedPlane4":
        """Orthonormalize an ordered spanning pair, keeping the orientation."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        na = np.linalg.norm(a)
        if na < tol:
            raise PlaneError("degenerate basis")
        a = a / na
        b = b - np.dot(a, b) * a
        nb = np.linalg.norm(b)
        if nb < tol:
            raise PlaneError("degenerate basis")
        return cls(a, b / nb)

    def reversed(self) -> "OrientedPlane4":
        return OrientedPlane4(self.a, -self.b)

    def left_mul(self, p) -> "OrientedPlane4":
        return OrientedPlane4.spanned(qmul(p, self.a), qmul(p, self.b))

    def right_mul(self, q) -> "OrientedPlane4":
        return OrientedPlane4.spanned(qmul(self.a, q), qmul(self.b, q))

    def conjugated(self) -> "OrientedPlane4":
        return OrientedPlane4.spanned(qconj(self.a), qconj(self.b))

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        r = x - np.dot(x, self.a) * self.a - np.dot(x, self.b) * self.b
        return bool(np.linalg.norm(r) <= tol * max(1.0, np.linalg.norm(x)))


def _constraint_matrix(a, b) -> np.ndarray:
    """8x6 matrix of (Im N, Im R) -> (N a + a R, N b + b R)."""
    rows = []
    for x in (a, b):
        cols = []
        for e in (I, J, K):
            cols.append(qmul(e, x))
        for e in (I, J, K):
            cols.append(qmul(x, e))
        rows.append(np.stack(cols, axis=-1))
    return np.concatenate(rows, axis=0)


def normals_of_plane(U: OrientedPlane4, tol: float = NORMAL_TOL):
    """Left and right normal vectors (N, R) of an oriented plane.

    Solves N x + x R = 0 for x in {a, b} over imaginary N, R; the solution
    space is a line, and the point on it is fixed by |N| = 1 and the
    orientation requirement that (a, N a) is positively oriented in U.
    """
    M = _constraint_matrix(U.a, U.b)
    _, sv, vt = np.linalg.svd(M)
    if sv[-1] > tol or sv[-2] < 1e-6:
        raise PlaneError(f"normal system is not rank 5 (singular values {sv[-2]:.2e}, {sv[-1]:.2e})")
    sol = vt[-1]
    N = np.concatenate([[0.0], sol[:3]])
    R = np.concatenate([[0.0], sol[3:]])
    scale = np.linalg.norm(N)
    N, R = N / scale, R / scale
    if np.dot(qmul(N, U.a), U.b) < 0:
        N, R = -N, -R
    return N, R


def normals_closed_form(U: OrientedPlane4):
    """N = b conj(a), R = -conj(a) b."""
    return qmul(U.b, qconj(U.a)), -qmul(qconj(U.a), U.b)


def plane_from_normals(N, R, tol: float = 1e-10) -> OrientedPlane4:
    """The plane {x : N x = -x R}, oriented by (a, N a)."""
    N = np.asarray(N, dtype=float)
    R = np.asarray(R, dtype=float)
    for name, q in (("N", N), ("R", R)):
        if abs(q[0]) > tol or abs(np.linalg.norm(q) - 1.0) > tol:
            raise PlaneError(f"{name} is not a unit imaginary quaternion")
    M = left_matrix(N) + right_matrix(R)
    _, sv, vt = np.linalg.svd(M)
    if sv[-2] > 1e-8 or sv[-3] < 1e-6:
        raise PlaneError("normal pair does not define a plane")
    a = vt[-1]
    return OrientedPlane4.spanned(a, qmul(N, a))


def lr_touch(U1: OrientedPlane4, U2: OrientedPlane4, tol: float = TOUCH_TOL) -> dict:
    N1, R1 = normals_of_plane(U1)
    N2, R2 = normals_of_plane(U2)
    return {
        "left_touch": bool(np.linalg.norm(N1 - N2) < tol),
        "right_touch": bool(np.linalg.norm(R1 - R2) < tol),
        "left_cotouch": bool(np.linalg.norm(N1 + N2) < tol),
        "right_cotouch": bool(np.linalg.norm(R1 + R2) < tol),
    }


def signed_singular_values(U1: OrientedPlane4, U2: OrientedPlane4):
    """Singular values of the 2x2 inner-product matrix, lambda_2 signed by det."""
    G = np.array([[np.dot(U1.a, U2.a), np.dot(U1.a, U2.b)],
                  [np.dot(U1.b, U2.a), np.dot(U1.b, U2.b)]])
    s = np.linalg.svd(G, compute_uv=False)
    return float(s[0]), float(np.sign(np.linalg.det(G)) * s[1])


def lift_point(v) -> np.ndarray:
    """v in R^4 -> (1/2 (1 + |v|^2), 1/2 (1 - |v|^2), v) on the light cone of R^{5,1}."""
    v = np.asarray(v, dtype=float)
    r2 = float(np.dot(v, v))
    return np.concatenate([[0.5 * (1 + r2), 0.5 * (1 - r2)], v])


def contact_element(U: OrientedPlane4, base=np.zeros(4)) -> pair.ContactElement:
    """The contact element of U at the lifted base point.

    The differential of the lift at v sends t to (v.t, -v.t, t).
    """
    base = np.asarray(base, dtype=float)

    def d(t):
        return np.concatenate([[np.dot(base, t), -np.dot(base, t)], t])

    return pair.ContactElement.from_frame(lift_point(base), d(U.a), d(U.b))


def random_plane(rng) -> OrientedPlane4:
    return OrientedPlane4.spanned(rng.normal(size=4), rng.normal(size=4))


def random_unit(rng) -> np.ndarray:
    q = rng.normal(size=4)
    return q / np.linalg.norm(q)


def random_plane_pair(rng):
    """A pair from one of five families: generic, left/right touch, left/right co-touch."""
    U = random_plane(rng)
    kind = int(rng.integers(5))
    if kind == 0:
        return U, random_plane(rng)
    if kind == 1:
        return U, U.right_mul(random_unit(rng))
    if kind == 2:
        return U, U.left_mul(random_unit(rng))
    if kind == 3:
        return U, U.reversed().right_mul(random_unit(rng))
    return U, U.reversed().left_mul(random_unit(rng))


def classify(U1: OrientedPlane4, U2: OrientedPlane4, tol: float = 1e-8, base=np.zeros(4)) -> dict:
    """All three predicates for one pair of planes."""
    flags = lr_touch(U1, U2, tol)
    th, rh = pair.contact_invariants_samepoint(contact_element(U1, base), contact_element(U2, base))
    l1, l2 = signed_singular_values(U1, U2)
    return {
        "quat_touch": flags["left_touch"] or flags["right_touch"],
        "quat_cotouch": flags["left_cotouch"] or flags["right_cotouch"],
        "lightcone_touch": bool(abs(rh) < tol),
        "lightcone_cotouch": bool(abs(th) < tol),
        "sv_touch": bool(abs(l1 - l2) < tol),
        "sv_cotouch": bool(abs(l1 + l2) < tol),
        "theta_u": complex(th),
        "rho_u": complex(rh),
        **flags,
    }


def equivalence_check(trials: int = 1000, seed: int = 0, tol: float = 1e-8,
                      pairs=None) -> dict:
    """Compare the quaternionic, light-cone and singular-value predicates."""
    rng = np.random.default_rng(seed)
    planes = list(pairs or [])
    planes += [random_plane_pair(rng) for _ in range(trials)]
    out = {"trials": len(planes), "disagreements": 0, "touch_cases": 0, "cotouch_cases": 0,
           "sv_disagreements": 0}
    for U1, U2 in planes:
        c = classify(U1, U2, tol)
        if (c["quat_touch"] != c["lightcone_touch"]) or (c["quat_cotouch"] != c["lightcone_cotouch"]):
            out["disagreements"] += 1
        if (c["sv_touch"] != c["lightcone_touch"]) or (c["sv_cotouch"] != c["lightcone_cotouch"]):
            out["sv_disagreements"] += 1
        out["touch_cases"] += c["lightcone_touch"]
        out["cotouch_cases"] += c["lightcone_cotouch"]
    return out
