"""The point-pair map H = Y ^ Yhat into the Grassmannian of Minkowski 2-planes.

For a normalized pair, <H, H> = -1, <H_z, H_z> = theta and
<H_z, H_zbar> = (rho + conj(rho)) / 2.  Harmonicity is tested against the
admissible variations v ^ Yhat + Y ^ w with v, w orthogonal to Y and Yhat,
which is the tangent space of the Grassmannian at H.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lorentz
from .chart import Domain, GridSpec
from .invariants import sup
from .jet import Jet
from .lorentz import inner, wedge, wedge_inner


@dataclass
class PairMapPoint:
    """Values of H and its first fundamental form, batched over grid points."""

    H: lorentz.Bivector
    hh: np.ndarray
    hz_hz: np.ndarray
    hz_hzb: np.ndarray
    tangential_defect: np.ndarray


def _derivs(Y: Jet, Yhat: Jet):
    return (
        Y.value, Y.dz().value, Y.dzb().value, Y.dz().dzb().value,
        Yhat.value, Yhat.dz().value, Yhat.dzb().value, Yhat.dz().dzb().value,
    )


def pairmap_fundamental(Y: Jet, Yhat: Jet) -> PairMapPoint:
    """<H,H>, <H_z,H_z>, <H_z,H_zbar> and the harmonic residual of H."""
    Y0, Yz, Yzb, _, H0, Hz, Hzb, _ = _derivs(Y, Yhat)
    H = wedge(Y0, H0)
    H_z = wedge(Yz, H0) + wedge(Y0, Hz)
    H_zb = wedge(Yzb, H0) + wedge(Y0, Hzb)
    return PairMapPoint(
        H=H,
        hh=np.asarray(wedge_inner(H, H)),
        hz_hz=np.asarray(wedge_inner(H_z, H_z)),
        hz_hzb=np.asarray(wedge_inner(H_z, H_zb)),
        tangential_defect=harmonic_field(Y, Yhat),
    )


def _perp(x, Y, Yh):
    """Projection onto {Y, Yhat}-perp, assuming <Y, Yhat> = -1."""
    return x + inner(x, Yh)[..., None] * Y + inner(x, Y)[..., None] * Yh


def harmonic_field(Y: Jet, Yhat: Jet) -> np.ndarray:
    """Pointwise norm of the admissible part of H_zzbar.

    H_zzbar = Y_zzbar^Yhat + Y_z^Yhat_zbar + Y_zbar^Yhat_z + Y^Yhat_zzbar is
    projected to beta ^ Yhat + Y ^ alpha with alpha, beta in {Y, Yhat}-perp:
    alpha collects the pairings with v ^ Yhat, beta those with Y ^ w.  That
    space is positive definite, so the norm is sqrt(|alpha|^2 + |beta|^2).
    """
    Y0, Yz, Yzb, Yzzb, H0, Hz, Hzb, Hzzb = _derivs(Y, Yhat)
    terms = [(Yzzb, H0), (Yz, Hzb), (Yzb, Hz), (Y0, Hzzb)]
    alpha, beta = admissible_projection(terms, Y0, H0)
    n2 = inner(alpha, np.conj(alpha)) + inner(beta, np.conj(beta))
    return np.sqrt(np.abs(n2))


def admissible_projection(terms, Y, Yhat):
    """(alpha, beta) with sum A^B projected to beta ^ Yhat + Y ^ alpha.

    ``terms`` is a list of factor pairs (A, B) given as value arrays.
    """
    alpha = 0.0
    beta = 0.0
    for A, B in terms:
        alpha = alpha + A * inner(B, Yhat)[..., None] - B * inner(A, Yhat)[..., None]
        beta = beta + B * inner(A, Y)[..., None] - A * inner(B, Y)[..., None]
    return _perp(alpha, Y, Yhat), _perp(beta, Y, Yhat)


def harmonic_residual(Y: Jet, Yhat: Jet) -> float:
    return sup(harmonic_field(Y, Yhat))


def plane_projector(Y: Jet, Yhat: Jet) -> Jet:
    """Matrix of x -> -<x,Yhat> Y - <x,Y> Yhat, the projector onto span{Y, Yhat}."""
    dim = Y.shape[-1]
    eta = np.diag([-1.0] + [1.0] * (dim - 1))

    def outer(a, b):
        return a[..., :, None] * Jet(b.c @ eta, b.order)[..., None, :]

    return -outer(Y, Yhat) - outer(Yhat, Y)


def pair_energy(rho: np.ndarray, grid: GridSpec, domain: Domain) -> complex:
    """E(H) = 2 * integral of (rho + conj(rho)) du dv."""
    rho = np.asarray(rho)
    return 2.0 * grid.integrate(rho + np.conj(rho), domain)


def perturbed_partner(frame, eps: float, k: int = 0) -> Jet:
    """Yhat = N + eps psi + (eps^2/2) Y with psi the k-th unit normal.

    The partner stays null with <Y, Yhat> = -1 but has xi = eps psi != 0,
    so (Y, Yhat) is not an adjoint pair.
    """
    psi = frame.normal_basis[k]
    return frame.N + eps * psi + (0.5 * eps * eps) * frame.Y
