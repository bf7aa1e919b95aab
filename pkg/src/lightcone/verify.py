"""Self-check suite behind ``lightcone verify-all``.

Each check measures one family of identities on the catalog charts and
compares it with a fixed threshold.  The thresholds are the library's
acceptance bar; the measured numbers are reported alongside.
"""
from __future__ import annotations

import time

import numpy as np

from . import adjoint, chart, invariants, pair, pairmap, quat

CATALOG = ("sphere", "clifford", "veronese", "perturbed-clifford")


def _result(name, value, limit, detail=None, below=True):
    ok = value < limit if below else value > limit
    rel = "<" if below else ">"
    return {"name": name, "passed": bool(ok), "value": float(value), "limit": limit,
            "detail": detail or f"{value:.3e} {rel} {limit:g}"}


def check_frame():
    t = time.perf_counter()
    worst = 0.0
    for name in CATALOG:
        f = invariants.surface_frame(chart.catalog(name), chart.GridSpec(32, 32))
        r = invariants.structure_residuals(f)
        worst = max(worst, r["nullity"], r["conformality"], r["normalization"], r["hill"])
    dt = time.perf_counter() - t
    res = _result("frame axioms", worst, 1e-9, f"max residual {worst:.2e}, {dt:.2f}s")
    res["passed"] = res["passed"] and dt < 10.0
    return res


def check_integrability():
    worst = 0.0
    for name in CATALOG:
        r = invariants.structure_residuals(
            invariants.surface_frame(chart.catalog(name), chart.GridSpec(16, 16)))
        worst = max(worst, r["gauss"], r["codazzi"], r["ricci"])
    return _result("integrability", worst, 1e-8)


def check_willmore():
    g = chart.GridSpec(16, 16)
    w = max(invariants.willmore_residual(invariants.surface_frame(chart.catalog(n), g))
            for n in ("clifford", "veronese"))
    p = invariants.willmore_residual(
        invariants.surface_frame(chart.catalog("perturbed-clifford", eps=0.05), g))
    res = _result("willmore detection", w, 1e-8, f"willmore {w:.2e}, perturbed {p:.2e}")
    res["passed"] = res["passed"] and p > 1e-3
    return res


def check_energy():
    c = chart.catalog("clifford")
    W = invariants.willmore_energy(c, chart.GridSpec(64, 64))
    kk = invariants.surface_frame(c, chart.GridSpec(16, 16)).kk().value.real
    err = max(abs(W - np.pi**2 / 2), 0.0)
    res = _result("willmore energy", err, 1e-6, f"W - pi^2/2 = {err:.2e}")
    res["passed"] = res["passed"] and float(np.max(np.abs(kk - 0.125))) < 1e-9
    return res


def check_pairs(count: int = 20):
    c = chart.catalog("veronese")
    u, v = chart.GridSpec(4, 4).points(c.domain)
    worst = 0.0
    for seed in range(count):
        f, Yh = pair.random_pair(seed, c, u[:1, :1], v[:1, :1])
        pp = pair.pair_invariants(f, Yh)
        th, rh = pair.bivector_invariants(f.Y, Yh)
        ths, rhs = pair.bivector_invariants(Yh, f.Y)
        dt, dr = pair.tangent_sphere_check(f, Yh, pp)
        scale = max(1.0, float(np.max(np.abs(th))), float(np.max(np.abs(rh))))
        worst = max(worst,
                    float(np.max(np.abs(th - pp.theta.value))) / scale,
                    float(np.max(np.abs(rh - pp.rho.value))) / scale,
                    float(np.max(np.abs(ths - th))), float(np.max(np.abs(rhs - np.conj(rh)))),
                    float(np.max(dt + dr)) / scale)
    return _result("pair invariants", worst, 1e-9)


def check_adjoint():
    worst = trip = 0.0
    for name, branch in (("clifford", "swillmore"), ("veronese", "quadratic")):
        run = adjoint.adjoint_transform(chart.catalog(name), chart.GridSpec(8, 8), branch)
        r = run.report
        worst = max(worst, r["willmore_adjoint"], r["rho_duality"], r["mutilde_identity"],
                    r["inner_sigma"], r["back_coto"])
        trip = max(trip, r["round_trip"])
    res = _result("adjoint duality", worst, 1e-7, f"max residual {worst:.2e}, round trip {trip:.2e}")
    res["passed"] = res["passed"] and trip < 1e-6
    return res


def check_pairmap():
    g = chart.GridSpec(32, 32)
    c = chart.catalog("clifford")
    run = adjoint.adjoint_transform(c, g, "swillmore")
    f, Yh = run.frame, run.adjoint.Yhat
    h = pairmap.harmonic_residual(f.Y, Yh)
    rho = pair.pair_invariants(f, Yh).rho.value
    E = pairmap.pair_energy(rho, g, c.domain).real
    bad = pairmap.harmonic_residual(f.Y, pairmap.perturbed_partner(f, 0.05))
    res = _result("point-pair map", h, 1e-8, f"harmonic {h:.2e}, perturbed {bad:.2e}, "
                  f"E + 4 pi^2 = {E + 4 * np.pi**2:.2e}")
    res["passed"] = res["passed"] and bad > 1e-4 and abs(E + 4 * np.pi**2) < 1e-5
    return res


def check_family():
    worst = 0.0
    for name in ("clifford", "veronese"):
        f = invariants.surface_frame(chart.catalog(name), chart.GridSpec(8, 8))
        for k in range(8):
            worst = max(worst, invariants.associated_family_residual(f, np.exp(2j * np.pi * k / 8)).max())
    return _result("associated family", worst, 1e-8)


def check_quat():
    t = time.perf_counter()
    r = quat.equivalence_check(1000, 0, 1e-8)
    dt = time.perf_counter() - t
    bad = r["disagreements"] + r["sv_disagreements"]
    res = _result("quaternion equivalence", bad, 0.5, f"{bad} disagreements in {r['trials']}, {dt:.2f}s")
    res["passed"] = res["passed"] and dt < 5.0
    return res


CHECKS = (check_frame, check_integrability, check_willmore, check_energy, check_pairs,
          check_adjoint, check_pairmap, check_family, check_quat)


def run_all():
    return [c() for c in CHECKS]
