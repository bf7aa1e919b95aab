"""Adjoint transforms of Willmore surfaces and the duality diagnostics.

Given mu with  theta = mu_z - mu^2/2 - s = 0  (co-touching) and
<eta, eta> = 0 for eta = D_zbar kappa + (conj(mu)/2) kappa (conformality),

    Yhat = (1/2)|mu|^2 Y + conj(mu) Y_z + mu Y_zbar + N

is the adjoint transform.  sigma = sqrt(8<eta, eta_bar> + |rho|^2) makes
Ytilde = Yhat / sigma the canonical lift of the adjoint surface.

Three ways to obtain mu are provided: the quadratic in conj(mu) coming from
<eta, eta> = 0, the S-Willmore closed form, and Hill solutions y with
mu = -2 y_z / y.  The adjoint needs about five derivatives of Y beyond what
the re-framed adjoint consumes, so charts are evaluated at ADJOINT_ORDER.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .chart import GridSpec, SurfaceChart, lift_chart
from .invariants import (
    FramePoint,
    ResidualReport,
    frame_at,
    normal_D,
    sup,
    vnorm,
    willmore_field,
)
from .jet import Jet
from .lorentz import inner, scal
from .pair import pair_invariants

ADJOINT_ORDER = 10
EPS_DEG = 1e-10
EPS_DISC = 1e-10
EPS_SIGMA = 1e-8
EPS_HILL = 1e-8
SWILLMORE_TOL = 1e-8


class DegenerateQuadraticError(ValueError):
    """<kappa, kappa> vanishes: the quadratic for mu degenerates."""


class NotSWillmoreError(ValueError):
    pass


class NotWillmoreError(ValueError):
    pass


@dataclass
class MuField:
    """mu on a grid as a jet, with branch labels and a mask of undefined points."""

    mu: Jet
    branch: str
    labels: np.ndarray
    mask: np.ndarray
    flagged: np.ndarray = None
    discriminant: Optional[np.ndarray] = None
    roots: Optional[tuple] = None

    @property
    def unmasked_fraction(self) -> float:
        return float(1.0 - self.mask.mean()) if self.mask.size else 1.0


def _safe(x: Jet, mask: np.ndarray, fill=1.0) -> Jet:
    """Replace x by a constant at masked points so later divisions are harmless."""
    c = x.c.copy()
    c[:, mask] = 0.0
    c[0][mask] = fill
    return Jet(c, x.order)


def quadratic_coefficients(frame: FramePoint):
    """(A, B, C) jets of A conj(mu)^2 + B conj(mu) + C = <eta, eta>."""
    kap = frame.kappa
    Dk = frame.Dzb_kappa()
    return 0.25 * inner(kap, kap), inner(Dk, kap), inner(Dk, Dk)


def mu_quadratic(frame: FramePoint, eps_deg: float = EPS_DEG):
    """Both roots mu (pointwise values) and the discriminant B^2 - 4AC."""
    A, B, C = (x.value for x in quadratic_coefficients(frame))
    if np.any(np.abs(A) <= eps_deg):
        raise DegenerateQuadraticError(
            f"<kappa,kappa> below {eps_deg:g} at {int((np.abs(A) <= eps_deg).sum())} point(s)"
        )
    return quadratic_roots(A, B, C)


def quadratic_roots(A, B, C):
    """Roots mu (conjugated roots of A x^2 + B x + C) and the discriminant."""
    disc = B * B - 4.0 * A * C
    r = np.sqrt(disc + 0j)
    mub1 = (-B + r) / (2.0 * A)
    mub2 = (-B - r) / (2.0 * A)
    return np.conj(mub1), np.conj(mub2), disc


def serpentine_order(nu: int, nv: int):
    """Boustrophedon traversal of an nu x nv grid (the branch-selection path)."""
    for i in range(nu):
        cols = range(nv) if i % 2 == 0 else range(nv - 1, -1, -1)
        for j in cols:
            yield i, j


def select_branch(root1: np.ndarray, root2: np.ndarray, start: int = 0) -> np.ndarray:
    """Labels (0 or 1) following the root closest to the previous choice."""
    labels = np.zeros(root1.shape, dtype=int)
    prev = None
    for i, j in serpentine_order(*root1.shape):
        if prev is None:
            lab = start
        else:
            lab = 0 if abs(root1[i, j] - prev) <= abs(root2[i, j] - prev) else 1
        labels[i, j] = lab
        prev = (root1, root2)[lab][i, j]
    return labels


def mu_quadratic_field(frame: FramePoint, start: int = 0, eps_deg: float = EPS_DEG,
                       eps_disc: float = EPS_DISC) -> MuField:
    """mu from the quadratic, as a jet, along a continuous branch."""
    A, B, C = quadratic_coefficients(frame)
    if np.any(np.abs(A.value) <= eps_deg):
        raise DegenerateQuadraticError(
            f"<kappa,kappa> below {eps_deg:g} at {int((np.abs(A.value) <= eps_deg).sum())} "
            "point(s); use the S-Willmore or Hill branch"
        )
    if A.value.ndim != 2:
        raise ValueError("branch selection needs a 2-d grid")
    r1, r2, disc = quadratic_roots(A.value, B.value, C.value)
    labels = select_branch(r1, r2, start)
    D = B * B - 4.0 * A * C
    merge = np.abs(disc) < eps_disc
    sqrtD = _safe(D, merge).sqrt()
    sign = np.where(labels == 0, 1.0, -1.0)
    sign = np.where(merge, 0.0, sign)
    mub = (scal_s(sign, sqrtD) - B) / (2.0 * A)
    return MuField(
        mu=mub.conj(),
        branch="quadratic",
        labels=labels,
        mask=np.zeros(labels.shape, dtype=bool),
        flagged=merge,
        discriminant=disc,
        roots=(r1, r2),
    )


def scal_s(arr: np.ndarray, x: Jet) -> Jet:
    """Multiply a scalar jet by a batch-shaped constant array."""
    return x * np.asarray(arr)


def mu_swillmore(frame: FramePoint, tol: float = SWILLMORE_TOL,
                 eps: float = 1e-12) -> MuField:
    """conj(mu) = -2 <D_zbar kappa, kappa_bar> / <kappa, kappa_bar>.

    Umbilic points are masked.  Raises if D_zbar kappa is not parallel to
    kappa elsewhere, naming the defect.
    """
    return swillmore_from(frame.kappa, frame.Dzb_kappa(), tol, eps)


def swillmore_from(kap: Jet, Dk: Jet, tol: float = SWILLMORE_TOL,
                   eps: float = 1e-12) -> MuField:
    """The S-Willmore mu from kappa and D_zbar kappa given as jets."""
    kk = inner(kap, kap.conj()).real
    mask = kk.value.real < eps
    kk_safe = _safe(kk, mask)
    coef = inner(Dk, kap.conj()) / kk_safe
    defect = vnorm(Dk - scal(coef, kap))
    defect = np.where(mask, 0.0, defect)
    scale = max(1.0, sup(np.where(mask, 0.0, vnorm(Dk))))
    if np.max(defect) > tol * scale:
        raise NotSWillmoreError(
            f"D_zbar kappa is not parallel to kappa: defect {np.max(defect):.3e}"
        )
    mub = -2.0 * coef
    mub = _safe(mub, mask, 0.0)
    return MuField(mu=mub.conj(), branch="swillmore",
                   labels=np.zeros(mask.shape, dtype=int), mask=mask,
                   flagged=np.zeros(mask.shape, dtype=bool))


def mu_from_hill(y: Jet, s: Optional[Jet] = None, eps: float = EPS_HILL,
                 tol: float = 1e-9) -> MuField:
    """mu = -2 y_z / y from a solution of y_zz + (s/2) y = 0.

    Zeros of y are masked.  If s is given, the Hill equation and the
    resulting co-touching condition are verified.
    """
    mask = np.abs(y.value) < eps
    ys = _safe(y, mask)
    mu = -2.0 * ys.dz() / ys
    mu = _safe(mu, mask, 0.0)
    if s is not None:
        hill = y.dz().dz() + 0.5 * s * y
        r = sup(np.where(mask, 0.0, hill.value))
        if r > tol * max(1.0, sup(y)):
            raise ValueError(f"y does not solve Hill's equation: residual {r:.3e}")
        th = mu.dz() - 0.5 * mu * mu - s
        r = sup(np.where(mask, 0.0, th.value))
        if r > tol:
            raise ValueError(f"co-touching fails for the Hill solution: |theta| = {r:.3e}")
    return MuField(mu=mu, branch="hill", labels=np.zeros(mask.shape, dtype=int),
                   mask=mask, flagged=np.zeros(mask.shape, dtype=bool))


def coto_residual(frame: FramePoint, mu: Jet) -> Jet:
    """theta = mu_z - mu^2/2 - s for a pair with xi = 0."""
    return mu.dz() - 0.5 * mu * mu - frame.s


def eta_of(frame: FramePoint, mu: Jet) -> Jet:
    return frame.Dzb_kappa() + scal(0.5 * mu.conj(), frame.kappa)


@dataclass
class AdjointPoint:
    """Adjoint data on a grid (jets), with the mask of excluded points."""

    mu: Jet
    eta: Jet
    rho: Jet
    sigma: Jet
    Yhat: Jet
    Ytilde: Jet
    mutilde: Jet
    Ntilde: Jet
    stilde: Jet
    theta: Jet
    mask: np.ndarray
    discriminant: Optional[np.ndarray] = None


def yhat_of(frame: FramePoint, mu: Jet) -> Jet:
    mub = mu.conj()
    return (
        scal(0.5 * mu * mub, frame.Y)
        + scal(mub, frame.Yz)
        + scal(mu, frame.Yzb)
        + frame.N
    )


def adjoint_point(frame: FramePoint, mufield: MuField,
                  eps_sigma: float = EPS_SIGMA) -> AdjointPoint:
    """Build Yhat, sigma, Ytilde, mutilde, Ntilde and stilde from mu."""
    mu = mufield.mu
    mask = mufield.mask.copy()
    Yhat = yhat_of(frame, mu)
    eta = eta_of(frame, mu)
    pp = pair_invariants(frame, Yhat)
    rho = pp.rho
    sigma2 = 8.0 * inner(eta, eta.conj()).real + (rho * rho.conj()).real
    mask |= sigma2.value.real < eps_sigma**2
    sigma = _safe(sigma2, mask).sqrt()
    Ytilde = scal(sigma.reciprocal(), Yhat)
    mutilde = 2.0 * sigma.dz() / sigma - mu
    mtb = mutilde.conj()
    Yt_z, Yt_zb = Ytilde.dz(), Ytilde.dzb()
    Ntilde = (
        scal(-0.5 * mutilde * mtb, Ytilde)
        - scal(mutilde, Yt_zb)
        - scal(mtb, Yt_z)
        + scal(sigma, frame.Y)
    )
    stilde = mutilde.dz() - 0.5 * mutilde * mutilde
    return AdjointPoint(
        mu=mu, eta=eta, rho=rho, sigma=sigma, Yhat=Yhat, Ytilde=Ytilde,
        mutilde=mutilde, Ntilde=Ntilde, stilde=stilde, theta=pp.theta, mask=mask,
        discriminant=mufield.discriminant,
    )


def _masked_sup(x, mask) -> float:
    a = x.value if isinstance(x, Jet) else np.asarray(x)
    if a.ndim > mask.ndim:
        a = np.sqrt(np.sum(np.abs(a) ** 2, axis=-1))
    a = np.where(mask, 0.0, np.abs(a))
    return float(np.max(a)) if a.size else 0.0


def affine_points(X) -> np.ndarray:
    """Projective points normalized to the affine form (1, x); returns x."""
    a = X.value if isinstance(X, Jet) else np.asarray(X)
    a = a.real
    return a[..., 1:] / a[..., :1]


def projective_distance(A, B, mask=None) -> float:
    d = np.linalg.norm(affine_points(A) - affine_points(B), axis=-1)
    if mask is not None:
        d = np.where(mask, 0.0, d)
    return float(np.max(d)) if d.size else 0.0


def duality_check(frame: FramePoint, adj: AdjointPoint) -> ResidualReport:
    """Residuals certifying that Ytilde is Willmore and adjoint back to Y."""
    m = adj.mask
    rep = ResidualReport()
    rep["coto"] = _masked_sup(adj.theta, m)
    rep["cofo"] = _masked_sup(inner(adj.eta, adj.eta), m)
    sig2 = 8.0 * inner(adj.eta, adj.eta.conj()) + adj.rho * adj.rho.conj()
    Yh = adj.Yhat
    rep["sigma_consistency"] = _masked_sup(sig2 - 2.0 * inner(Yh.dz(), Yh.dzb()), m)

    tframe = frame_at(adj.Ytilde, tol=np.inf)
    tm = m.copy()
    rep["adjoint_frame"] = _masked_gram(tframe, tm)
    rep["willmore_adjoint"] = _masked_sup(willmore_field(tframe), tm)
    mtb = adj.mutilde.conj()
    rho_t = mtb.dz() - 2.0 * tframe.kk()
    rep["rho_duality"] = _masked_sup(rho_t - adj.rho.conj(), tm)
    rep["mutilde_identity"] = _masked_sup(
        adj.mutilde + adj.mu - 2.0 * adj.sigma.dz() / adj.sigma, tm
    )
    rep["back_coto"] = _masked_sup(coto_residual(tframe, adj.mutilde), tm)
    rep["back_cofo"] = _masked_sup(inner(eta_of(tframe, adj.mutilde), eta_of(tframe, adj.mutilde)), tm)
    rep["inner_sigma"] = _masked_sup(inner(adj.Ytilde, frame.Y) + adj.sigma.reciprocal(), tm)
    rep["ntilde_crosscheck"] = _masked_sup(adj.Ntilde - tframe.N, tm)
    rep["stilde_crosscheck"] = _masked_sup(adj.stilde - tframe.s, tm)
    back = yhat_of(tframe, adj.mutilde)
    rep["round_trip"] = projective_distance(back, frame.Y, tm)
    rep.counts["masked_points"] = int(tm.sum())
    rep.counts["unmasked_fraction"] = float(1.0 - tm.mean()) if tm.size else 1.0
    return rep


def _masked_gram(fr: FramePoint, mask) -> float:
    rows = [
        inner(fr.Y, fr.Y),
        inner(fr.Yz, fr.Yz),
        inner(fr.Yz, fr.Yzb) - 0.5,
        inner(fr.N, fr.N),
        inner(fr.Y, fr.N) + 1.0,
    ]
    return max(_masked_sup(r, mask) for r in rows)


BRANCHES = ("swillmore", "quadratic", "hill")


def solve_mu(frame: FramePoint, branch: str = "swillmore", hill_y: Optional[Jet] = None,
             start: int = 0) -> MuField:
    """Dispatch to a mu branch; a degenerate quadratic falls back to S-Willmore."""
    if branch == "quadratic":
        try:
            return mu_quadratic_field(frame, start=start)
        except DegenerateQuadraticError:
            mf = mu_swillmore(frame)
            mf.branch = "swillmore (quadratic degenerate)"
            A, B, C = (x.value for x in quadratic_coefficients(frame))
            mf.discriminant = B * B - 4.0 * A * C
            return mf
    if branch == "swillmore":
        return mu_swillmore(frame)
    if branch == "hill":
        if hill_y is None:
            hill_y = Jet.constant(np.ones(frame.shape), frame.s.order)
        return mu_from_hill(hill_y, frame.s)
    raise ValueError(f"unknown branch {branch!r}; choose from {', '.join(BRANCHES)}")


@dataclass
class AdjointRun:
    frame: FramePoint
    mufield: MuField
    adjoint: AdjointPoint
    report: ResidualReport
    willmore: float
    points: dict = field(default_factory=dict)


def adjoint_transform(chart: SurfaceChart, grid: GridSpec, branch: str = "swillmore",
                      order: int = ADJOINT_ORDER, T: Optional[np.ndarray] = None,
                      tol: float = 1e-8, hill_y: Optional[Callable] = None,
                      start: int = 0) -> AdjointRun:
    """Whole pipeline: frame, Willmore check, mu, adjoint, duality report."""
    if T is not None:
        chart = chart.transformed(T)
    u, v = grid.points(chart.domain)
    frame = frame_at(lift_chart(chart, u, v, order))
    w = float(np.max(willmore_field(frame)))
    if w > tol:
        raise NotWillmoreError(f"base surface is not Willmore: residual {w:.3e}")
    y = None
    if hill_y is not None:
        U, V = Jet.variables(u, v, frame.s.order + 2)
        y = hill_y(U, V)
    mf = solve_mu(frame, branch, y, start)
    adj = adjoint_point(frame, mf)
    rep = duality_check(frame, adj)
    return AdjointRun(frame, mf, adj, rep, w)
