"""Invariants of a pair of immersions and of pairs of contact elements.

For a canonical lift Y and a second lift Yhat with <Y, Yhat> = -1,

    Yhat = (1/2)(|mu|^2 + <xi,xi>) Y + conj(mu) Y_z + mu Y_zbar + N + xi,

with mu = 2<Yhat, Y_z> and xi the normal part.  The invariants theta (a
(2,0)-form) and rho (a (1,1)-form) come either from the expansion above or
from bivector pairings, and both routes are implemented.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lorentz
from .invariants import FramePoint, normal_D, sup
from .jet import Jet, SingularJetError
from .lorentz import inner, scal, wedge, wedge_inner

SAME_POINT_TOL = 1e-9
TOUCH_TOL = 1e-8


class CoincidentPointError(SingularJetError):
    """<Y, Yhat> vanishes: the two lifts meet (a pole of the pair data)."""


class ContactElementError(ValueError):
    pass


def normalize_pair(Y: Jet, Yhat_raw: Jet, eps: float = SAME_POINT_TOL) -> Jet:
    """Rescale Yhat so that <Y, Yhat> = -1 identically."""
    c = inner(Y, Yhat_raw)
    bad = np.abs(c.value) < eps
    if np.any(bad):
        raise CoincidentPointError(
            f"<Y, Yhat> vanishes at {int(bad.sum())} point(s); the surfaces meet there"
        )
    return scal(-c.reciprocal(), Yhat_raw)


@dataclass
class PairPoint:
    """Pair data, batched over grid points (jets)."""

    mu: Jet
    xi: Jet
    theta: Jet
    rho: Jet
    zeta: Jet
    Yhat: Jet
    lam: Jet

    def reconstruction(self, frame: FramePoint) -> Jet:
        Y = frame.Y
        return (
            scal(self.lam, Y)
            + scal(self.mu.conj(), frame.Yz)
            + scal(self.mu, frame.Yzb)
            + frame.N
            + self.xi
        )


def pair_invariants(frame: FramePoint, Yhat: Jet) -> PairPoint:
    """mu, xi, theta, rho, zeta of the pair (Y, Yhat); Yhat must be normalized."""
    Y, Yz = frame.Y, frame.Yz
    r = sup(inner(Y, Yhat) + 1.0)
    if r > 1e-10:
        raise ValueError(f"pair is not normalized: |<Y,Yhat> + 1| = {r:.3e}")
    mu = 2.0 * inner(Yhat, Yz)
    xi = frame.project(Yhat)[1].real
    kap = frame.kappa
    mub = mu.conj()
    theta = mu.dz() - 0.5 * mu * mu - frame.s - 2.0 * inner(xi, kap)
    rho = mub.dz() - 2.0 * frame.kk() + 0.5 * inner(xi, xi)
    Dzxi = normal_D(xi, frame, "z", check=False)
    zeta = Dzxi - scal(0.5 * mu, xi) + 2.0 * (frame.Dzb_kappa() + scal(0.5 * mub, kap))
    lam = 0.5 * (mu * mub + inner(xi, xi))
    return PairPoint(mu, xi, theta, rho, zeta, Yhat, lam)


def bivector_invariants(Y: Jet, Yhat: Jet):
    """theta = -2<Y^Y_z, Yhat^Yhat_z>, rho = -2<Y^Y_zbar, Yhat^Yhat_z> (values).

    With <a^b, c^d> = <a,c><b,d> - <a,d><b,c> and <Y, Yhat> = -1 one has
    <Y^Y_z, Yhat^Yhat_z> = -<Y_z, Yhat_z> + mu^2/4 = -theta/2, hence the
    sign.  Needs only <Y, Yhat> = -1, not the canonical normalization of Y.
    """
    Yv, Yz, Yzb = Y.value, Y.dz().value, Y.dzb().value
    H, Hz = Yhat.value, Yhat.dz().value
    theta = -2.0 * wedge_inner(wedge(Yv, Yz), wedge(H, Hz))
    rho = -2.0 * wedge_inner(wedge(Yv, Yzb), wedge(H, Hz))
    return theta, rho


def fundamental_residual(frame: FramePoint, pp: PairPoint) -> float:
    """Residual of Yhat_z = (mu/2)Yhat + theta(Y_zb + conj(mu)Y/2)
    + rho(Y_z + mu Y/2) + <xi,zeta> Y + zeta."""
    Y = frame.Y
    mu = pp.mu
    rhs = (
        scal(0.5 * mu, pp.Yhat)
        + scal(pp.theta, frame.Yzb + scal(0.5 * mu.conj(), Y))
        + scal(pp.rho, frame.Yz + scal(0.5 * mu, Y))
        + scal(inner(pp.xi, pp.zeta), Y)
        + pp.zeta
    )
    return sup(pp.Yhat.dz() - rhs)


# -- contact elements ------------------------------------------------------
@dataclass(frozen=True)
class ContactElement:
    """Oriented 2-dim contact element {X, X1, X2} with Gram diag(0, 1, 1).

    Any oriented spanning pair (X1, X2) orthogonal to X is accepted and
    orthonormalized in order, which preserves the orientation.
    """

    X: np.ndarray
    X1: np.ndarray
    X2: np.ndarray

    @classmethod
    def from_frame(cls, X, X1, X2, tol: float = 1e-10) -> "ContactElement":
        X, X1, X2 = (np.asarray(a, dtype=float) for a in (X, X1, X2))
        scale = max(1.0, float(np.max(np.abs(X))))
        if abs(lorentz.inner(X, X)) > tol * scale**2:
            raise ContactElementError("base vector is not null")
        for Xi in (X1, X2):
            if abs(lorentz.inner(X, Xi)) > tol * scale * max(1.0, float(np.max(np.abs(Xi)))):
                raise ContactElementError("tangent vectors must be orthogonal to X")
        n1 = lorentz.inner(X1, X1)
        if n1 <= tol:
            raise ContactElementError("degenerate contact frame")
        E1 = X1 / np.sqrt(n1)
        R2 = X2 - lorentz.inner(X2, E1) * E1
        n2 = lorentz.inner(R2, R2)
        if n2 <= tol:
            raise ContactElementError("degenerate contact frame")
        return cls(X, E1, R2 / np.sqrt(n2))

    @property
    def w(self) -> np.ndarray:
        """X1 - i X2, the tangent part of the complex contact element."""
        return self.X1 - 1j * self.X2

    def reversed(self) -> "ContactElement":
        return ContactElement(self.X, self.X1, -self.X2)

    def rotated(self, phi: float) -> "ContactElement":
        c, s = np.cos(phi), np.sin(phi)
        return ContactElement(self.X, c * self.X1 - s * self.X2, s * self.X1 + c * self.X2)

    def gram_residual(self) -> float:
        V = [self.X, self.X1, self.X2]
        G = np.array([[lorentz.inner(a, b) for b in V] for a in V])
        return float(np.max(np.abs(G - np.diag([0.0, 1.0, 1.0]))))


def _unit_base(X):
    return X / X[0]


def same_point(S: ContactElement, Sh: ContactElement, tol: float = SAME_POINT_TOL) -> bool:
    return abs(lorentz.inner(_unit_base(S.X), _unit_base(Sh.X))) < tol


def contact_invariants_distinct(S: ContactElement, Sh: ContactElement):
    """theta, rho of contact elements at distinct points (bivector quotient).

    The value depends on the frames only through a unit phase and on the
    scale of X, Xhat; the moduli are what a frame-free comparison can use.
    """
    if same_point(S, Sh):
        raise ContactElementError(
            "contact elements share their base point; use contact_invariants_samepoint"
        )
    den = wedge_inner(wedge(S.X, Sh.X), wedge(S.X, Sh.X))
    right = wedge(Sh.X, Sh.w)
    theta = 0.5 * wedge_inner(wedge(S.X, S.w), right) / den
    rho = 0.5 * wedge_inner(wedge(S.X, np.conj(S.w)), right) / den
    return complex(theta), complex(rho)


def contact_invariants_samepoint(S: ContactElement, Sh: ContactElement, check: bool = True):
    """(theta_u, rho_u) of two contact elements at one point."""
    if check and not same_point(S, Sh, 1e-7):
        raise ContactElementError("contact elements are at distinct points")
    return samepoint_pairing(S.w, Sh.w)


def samepoint_pairing(w, wh):
    """theta_u = (1/2)<conj w, wh>, rho_u = (1/2)<w, wh> for w = X1 - i X2."""
    return 0.5 * lorentz.inner(np.conj(w), wh), 0.5 * lorentz.inner(w, wh)


def contact_invariants(S: ContactElement, Sh: ContactElement):
    """Dispatch on whether the base points coincide."""
    if same_point(S, Sh):
        return contact_invariants_samepoint(S, Sh, check=False)
    return contact_invariants_distinct(S, Sh)


def touch_predicates(S: ContactElement, Sh: ContactElement, tol: float = TOUCH_TOL) -> dict:
    th, rh = contact_invariants_samepoint(S, Sh)
    return {"touch": bool(abs(rh) < tol), "cotouch": bool(abs(th) < tol)}


def contact_element_of_lift(Y: Jet, index=()) -> ContactElement:
    """Contact element {Y, Y_u, Y_v} of a lift at one grid point."""
    return ContactElement.from_frame(
        Y.value[index].real, Y.du().value[index].real, Y.dv().value[index].real
    )


def tangent_sphere_check(frame: FramePoint, Yhat: Jet, pp: PairPoint,
                         tol: float = 1e-9):
    """|theta_u - theta|, |rho_u - rho| for S(p) against Yhat at Yhat(p).

    The mean curvature sphere S(p) = span{Y, Y_u, Y_v, Yhat} has contact
    element Yhat ^ (Y_zbar + conj(mu) Y/2) at Yhat(p); the immersion Yhat
    has Yhat ^ Yhat_z.  Both are paired with the same-point formula.
    """
    Y, Yu, Yv = frame.Y.value, frame.Yz.value + frame.Yzb.value, 1j * (frame.Yz.value - frame.Yzb.value)
    H = Yhat.value
    det = lorentz.gram_determinant([Y, Yu, Yv, H], [Y, Yu, Yv, H])
    if np.any(np.abs(det) < tol):
        raise ContactElementError("Yhat lies in the tangent 3-space; S(p) degenerates")
    mu = pp.mu.value
    w_sphere = 2.0 * (frame.Yzb.value + 0.5 * np.conj(mu)[..., None] * Y)
    w_hat = 2.0 * Yhat.dz().value
    if sup(lorentz.inner(w_sphere, H)) > 1e-8:
        raise ContactElementError("sphere contact vector is not tangent at Yhat(p)")
    th_u, rh_u = samepoint_pairing(w_sphere, w_hat)
    return np.abs(th_u - pp.theta.value), np.abs(rh_u - pp.rho.value)


# -- random pairs for property checks --------------------------------------
def random_sphere_map(seed: int, u, v, n: int, order: int, amplitude: float = 0.6) -> Jet:
    """Light-cone lift (1, g) of a smooth random map g into S^n (not conformal).

    g is the unit normalization of a random affine-plus-trigonometric field,
    so it has nontrivial derivatives of every order.
    """
    rng = np.random.default_rng(seed)
    U, V = Jet.variables(u, v, order)
    base = rng.normal(size=n + 1)
    base /= np.linalg.norm(base)
    comps = []
    for i in range(n + 1):
        a, b, c, d, p, q = rng.normal(size=6)
        comps.append(base[i] + amplitude * (a * U + b * V + c * (p * U + q * V).sin()
                                            + d * (q * U - p * V).cos() * 0.5))
    norm2 = comps[0] * comps[0]
    for x in comps[1:]:
        norm2 = norm2 + x * x
    inv = norm2.sqrt().reciprocal()
    one = Jet.constant(np.ones(U.shape), order)
    return Jet.stack([one] + [x * inv for x in comps])


def random_pair(seed: int, chart, u, v, order: int = 6):
    """A canonical frame of ``chart`` and a normalized random partner lift.

    The chart is first moved by a seed-dependent Lorentz map so that the pair
    is generic; the partner is resampled until it stays away from Y.
    """
    from .chart import lift_chart
    from .invariants import frame_at

    T = lorentz.random_lorentz(seed + 1, chart.n)
    moved = chart.transformed(T)
    frame = frame_at(lift_chart(moved, u, v, order))
    for attempt in range(20):
        raw = random_sphere_map(seed * 31 + attempt, u, v, chart.n, order - 1)
        c = inner(frame.Y, raw).value
        if np.all(np.abs(c) > 1e-3):
            return frame, normalize_pair(frame.Y, raw)
    raise CoincidentPointError("could not draw a partner away from the surface")
