"""Conformal invariants of a single immersion from its canonical lift.

Everything is computed from the canonical-lift jet ``Y`` (batched over the
grid).  With the frame {Y, Y_z, Y_zbar, N} the structure equations read

    Y_zz    = -(s/2) Y + kappa
    Y_zzbar = -<kappa, kappa_bar> Y + N/2
    N_z     = -2<kappa, kappa_bar> Y_z - s Y_zbar + 2 D_zbar kappa
    psi_z   = D_z psi + 2<psi, D_zbar kappa> Y - 2<psi, kappa> Y_zbar
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import lorentz
from .chart import GridSpec, SurfaceChart, lift_chart
from .jet import DEFAULT_ORDER, Jet, OrderExhaustedError
from .lorentz import inner, scal

DEFAULT_TOL = 1e-8
UMBILIC_EPS = 1e-12
FRAME_TOL = 1e-8


class FrameConstructionError(ValueError):
    pass


class NotNormalError(ValueError):
    pass


@dataclass
class ResidualReport:
    """Named sup-norm residuals over a grid, plus bookkeeping counters."""

    values: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def __setitem__(self, key, value):
        v = float(value)
        if not np.isfinite(v):
            raise ValueError(f"residual {key} is not finite")
        self.values[key] = v

    def __contains__(self, key):
        return key in self.values

    def max(self) -> float:
        return max(self.values.values()) if self.values else 0.0

    def passed(self, tol: float) -> bool:
        return all(v < tol for v in self.values.values())

    def as_dict(self) -> dict:
        out = dict(self.values)
        out.update(self.counts)
        return out


def sup(x) -> float:
    """Max modulus of a jet's value or an array; 0 for empty input."""
    a = x.value if isinstance(x, Jet) else np.asarray(x)
    return float(np.max(np.abs(a))) if a.size else 0.0


def vnorm(x) -> np.ndarray:
    """Pointwise Hermitian norm sqrt(<x, conj x>) of a normal-valued field."""
    a = x.value if isinstance(x, Jet) else np.asarray(x)
    return np.sqrt(np.abs(lorentz.inner(a, np.conj(a))))


@dataclass
class FramePoint:
    """The canonical frame and its invariants, batched over grid points.

    All members are jets; each has the order left after the derivatives
    used to build it.
    """

    Y: Jet
    Yz: Jet
    Yzb: Jet
    N: Jet
    kappa: Jet
    s: Jet
    normal_basis: list

    @property
    def n(self) -> int:
        return self.Y.shape[-1] - 2

    @property
    def shape(self) -> tuple:
        return self.Y.shape[:-1]

    def kk(self) -> Jet:
        """<kappa, kappa_bar>, real and nonnegative."""
        return inner(self.kappa, self.kappa.conj()).real

    def umbilic_mask(self, eps: float = UMBILIC_EPS) -> np.ndarray:
        return self.kk().value.real < eps

    def project(self, X: Jet):
        return lorentz.dual_frame_projector(
            (self.Y, self.Yz, self.Yzb, self.N), X, check=False
        )

    def Dzb_kappa(self) -> Jet:
        return normal_D(self.kappa, self, "zb", check=False)

    def Dz_kappa(self) -> Jet:
        return normal_D(self.kappa, self, "z", check=False)


def _normal_basis(Y, Yz, Yzb, N, n: int) -> list:
    """Orthonormal jet basis of the real normal bundle V-perp.

    Spatial coordinate axes are projected to V-perp and fed to a pointwise
    greedy Gram-Schmidt: an axis is accepted at a point only if its residual
    has squared length above 1/(2(n+1)), which some remaining axis always
    exceeds while the basis is incomplete.
    """
    dim = n + 2
    m = n - 2
    shape = Y.shape[:-1]
    if m == 0:
        return []
    thresh = 0.5 / (n + 1)
    slots = [Jet.zeros(shape + (dim,), N.order) for _ in range(m)]
    count = np.zeros(shape, dtype=int)
    for k in range(1, dim):
        e = np.zeros(dim)
        e[k] = 1.0
        E = Jet.constant(np.broadcast_to(e, shape + (dim,)), N.order)
        _, r = lorentz.dual_frame_projector((Y, Yz, Yzb, N), E, check=False)
        for psi in slots:
            r = r - scal(inner(r, psi), psi)
        r = r.real
        n2 = inner(r, r).real
        accept = (n2.value.real > thresh) & (count < m)
        if not accept.any():
            continue
        safe = Jet(np.where(accept, n2.c, 1.0), n2.order)
        unit = scal(safe.sqrt().reciprocal(), r)
        for j in range(m):
            sel = accept & (count == j)
            if sel.any():
                slots[j] = _where(sel, unit, slots[j])
        count = count + accept
    if np.any(count < m):
        raise FrameConstructionError("could not complete the normal basis")
    return slots


def _where(mask, a: Jet, b: Jet) -> Jet:
    K = min(a.order, b.order)
    return Jet(np.where(mask[..., None], a.truncate(K).c, b.truncate(K).c), K)


def frame_at(Y: Jet, tol: float = FRAME_TOL) -> FramePoint:
    """Build the canonical frame, kappa and s from a canonical lift jet."""
    if Y.order < 4:
        raise OrderExhaustedError(f"frame needs a lift of order >= 4, got {Y.order}")
    n = Y.shape[-1] - 2
    if n < 3:
        raise lorentz.DimensionMismatch("ambient sphere dimension must be >= 3")
    Yz = Y.dz()
    Yzb = Y.dzb()
    Yzzb = Yz.dzb()
    N = 2.0 * Yzzb + scal(2.0 * inner(Yzzb, Yzzb), Y)
    Yzz = Yz.dz()
    s = 2.0 * inner(Yzz, N)
    kappa = Yzz + scal(0.5 * s, Y)
    res = lorentz.frame_gram_residual(Y, Yz, Yzb, N)
    if res > tol:
        raise FrameConstructionError(f"frame Gram residual {res:.3e} exceeds {tol:g}")
    basis = _normal_basis(Y, Yz, Yzb, N, n)
    return FramePoint(Y, Yz, Yzb, N, kappa, s, basis)


def surface_frame(
    chart: SurfaceChart,
    grid: GridSpec,
    order: int = DEFAULT_ORDER,
    T: Optional[np.ndarray] = None,
) -> FramePoint:
    """Frame of ``chart`` (optionally moved by the Lorentz map T) on a grid."""
    if T is not None:
        chart = chart.transformed(T)
    u, v = grid.points(chart.domain)
    return frame_at(lift_chart(chart, u, v, order))


def normal_D(psi: Jet, frame: FramePoint, direction: str = "z",
             check: bool = True, tol: float = 1e-8) -> Jet:
    """Normal connection: the V-perp part of d/dz (or d/dzbar) of psi."""
    if check:
        tan, _ = frame.project(psi)
        r = sup(tan)
        if r > tol * max(1.0, sup(psi)):
            raise NotNormalError(f"field is not normal: tangential part {r:.3e}")
    if direction == "z":
        d = psi.dz()
    elif direction in ("zb", "zbar"):
        d = psi.dzb()
    else:
        raise ValueError(f"direction must be 'z' or 'zb', got {direction!r}")
    return frame.project(d)[1]


def hill_residual(frame: FramePoint) -> float:
    """How far kappa = Y_zz + (s/2) Y is from V-perp."""
    k = frame.kappa
    return max(sup(inner(k, x)) for x in (frame.Y, frame.Yz, frame.Yzb, frame.N))


def _gauss(frame, Dzk, lam=1.0):
    kap = lam * frame.kappa
    Dzk = lam * Dzk
    Dz_kbar = (lam * frame.Dzb_kappa()).conj()
    return 0.5 * frame.s.dzb() - 3.0 * inner(Dz_kbar, kap) - inner(kap.conj(), Dzk)


def _willmore_vec(frame, Dzbk, lam=1.0):
    DD = normal_D(Dzbk, frame, "zb", check=False)
    return lam * (DD + scal(0.5 * frame.s.conj(), frame.kappa))


def _ricci(frame, lam=1.0):
    kap = lam * frame.kappa
    out = 0.0
    for psi in frame.normal_basis:
        Dz = normal_D(psi, frame, "z", check=False)
        Dzb = normal_D(psi, frame, "zb", check=False)
        R = normal_D(Dz, frame, "zb", check=False) - normal_D(Dzb, frame, "z", check=False)
        rhs = scal(2.0 * inner(psi, kap), kap.conj()) - scal(2.0 * inner(psi, kap.conj()), kap)
        out = max(out, sup(vnorm(R - rhs)))
    return out


def structure_residuals(frame: FramePoint) -> ResidualReport:
    """Residuals of the frame relations and the Gauss-Codazzi-Ricci equations."""
    Y, Yz, Yzb, N, kap, s = frame.Y, frame.Yz, frame.Yzb, frame.N, frame.kappa, frame.s
    kk = frame.kk()
    Dzbk = frame.Dzb_kappa()
    rep = ResidualReport()
    rep["nullity"] = sup(inner(Y, Y))
    rep["conformality"] = sup(inner(Yz, Yz))
    rep["normalization"] = sup(inner(Yz, Yzb) - 0.5)
    rep["hill"] = hill_residual(frame)
    rows = {
        "structure_yzz": Yz.dz() + scal(0.5 * s, Y) - kap,
        "structure_yzzb": Yz.dzb() + scal(kk, Y) - 0.5 * N,
        "structure_nz": N.dz() + scal(2.0 * kk, Yz) + scal(s, Yzb) - 2.0 * Dzbk,
    }
    for name, r in rows.items():
        rep[name] = sup(r)
    psi_res = 0.0
    for psi in frame.normal_basis:
        Dz = normal_D(psi, frame, "z", check=False)
        r = psi.dz() - Dz - scal(2.0 * inner(psi, Dzbk), Y) + scal(2.0 * inner(psi, kap), Yzb)
        psi_res = max(psi_res, sup(r))
    rep["structure_psiz"] = psi_res
    rep["gauss"] = sup(_gauss(frame, frame.Dz_kappa()))
    rep["codazzi"] = sup(_willmore_vec(frame, Dzbk).imag)
    rep["ricci"] = _ricci(frame)
    return rep


def willmore_field(frame: FramePoint) -> np.ndarray:
    """Pointwise norm of D_zbar D_zbar kappa + (s_bar/2) kappa."""
    return vnorm(_willmore_vec(frame, frame.Dzb_kappa()))


def willmore_residual(frame: FramePoint) -> float:
    return sup(willmore_field(frame))


def mobius_metric(frame: FramePoint, eps: float = UMBILIC_EPS):
    """Density of the Möbius metric <kappa,kappa_bar>|dz|^2 and the umbilic mask."""
    kk = frame.kk().value.real
    return kk, kk < eps


def willmore_energy(chart: SurfaceChart, grid: GridSpec, order: int = 5,
                    T: Optional[np.ndarray] = None) -> float:
    """W = integral of <kappa, kappa_bar> du dv over the chart domain.

    Trapezoid rule on periodic directions, Simpson otherwise; the grid must
    resolve the chart.
    """
    frame = surface_frame(chart, grid, order, T)
    dom = chart.domain if T is None else chart.transformed(T).domain
    return grid.integrate(frame.kk().value.real, dom).real


@dataclass
class ConformalGauss:
    basis: tuple
    metric_density: np.ndarray
    kk: np.ndarray
    degenerate: np.ndarray
    harmonic_residual: np.ndarray

    @property
    def metric_defect(self) -> float:
        return sup(np.where(self.degenerate, 0.0, self.metric_density - self.kk))


def _blade_pairing_derivative(frame_a, frame_b):
    """<dA, dB> for 4-blades given as lists of (vector, derivative) values."""
    total = 0.0
    vecs_a = [a for a, _ in frame_a]
    vecs_b = [b for b, _ in frame_b]
    for i, (_, da) in enumerate(frame_a):
        for j, (_, db) in enumerate(frame_b):
            A = list(vecs_a)
            A[i] = da
            B = list(vecs_b)
            B[j] = db
            total = total + lorentz.gram_determinant(A, B)
    return total


def projector_matrix(frame: FramePoint) -> Jet:
    """The form-self-adjoint projector onto V as a jet-valued matrix."""
    dim = frame.Y.shape[-1]
    eta = np.diag([-1.0] + [1.0] * (dim - 1))

    def outer(a, b):
        bl = Jet(b.c @ eta, b.order)
        return a[..., :, None] * bl[..., None, :]

    return (
        -outer(frame.Y, frame.N)
        - outer(frame.N, frame.Y)
        + 2.0 * outer(frame.Yz, frame.Yzb)
        + 2.0 * outer(frame.Yzb, frame.Yz)
    )


def grassmann_tension(P: Jet) -> np.ndarray:
    """Pointwise norm of the off-diagonal part of P_zzbar (tension of P)."""
    Pzz = P.dz().dzb().value
    P0 = P.value
    eye = np.eye(P0.shape[-1])
    Q = eye - P0
    T = P0 @ Pzz @ Q + Q @ Pzz @ P0
    return np.sqrt(np.sum(np.abs(T) ** 2, axis=(-2, -1)))


def conformal_gauss(frame: FramePoint, eps: float = UMBILIC_EPS) -> ConformalGauss:
    """Conformal Gauss map Y^Y_u^Y_v^N: induced metric and harmonicity.

    The metric density is g = -(1/2)<G_z, G_zbar> with the blade pairing
    det<a_i, b_j>, which equals <kappa, kappa_bar> (the blade is timelike,
    hence the sign).  Harmonicity is measured through the projector P onto
    V: the tension of G is the off-diagonal part of P_zzbar.
    """
    Y, N = frame.Y, frame.N
    Yu = frame.Yz + frame.Yzb
    Yv = 1j * (frame.Yz - frame.Yzb)
    vecs = (Y, Yu, Yv, N)
    dz = [(x.value, x.dz().value) for x in vecs]
    dzb = [(x.value, x.dzb().value) for x in vecs]
    g = -0.5 * _blade_pairing_derivative(dz, dzb)
    kk = frame.kk().value.real
    degenerate = kk < eps
    P = projector_matrix(frame)
    return ConformalGauss(
        basis=tuple(x.value for x in vecs),
        metric_density=g.real,
        kk=kk,
        degenerate=degenerate,
        harmonic_residual=grassmann_tension(P),
    )


def associated_family_residual(frame: FramePoint, lam: complex,
                               tol: float = DEFAULT_TOL) -> ResidualReport:
    """Gauss, Codazzi, Ricci and Willmore residuals with kappa -> lam kappa."""
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise ValueError(f"|lambda| must be 1, got {abs(lam)!r}")
    Dzbk = frame.Dzb_kappa()
    rep = ResidualReport()
    rep["gauss"] = sup(_gauss(frame, frame.Dz_kappa(), lam))
    w = _willmore_vec(frame, Dzbk, lam)
    rep["codazzi"] = sup(w.imag)
    rep["ricci"] = _ricci(frame, lam)
    rep["willmore"] = sup(vnorm(w))
    return rep


def invariants_report(frame: FramePoint) -> ResidualReport:
    """All single-surface residuals under the report field names."""
    rep = structure_residuals(frame)
    rep["willmore"] = willmore_residual(frame)
    cg = conformal_gauss(frame)
    rep["gauss_map_harmonic"] = sup(cg.harmonic_residual)
    rep.counts["umbilic_points"] = int(cg.degenerate.sum())
    return rep
