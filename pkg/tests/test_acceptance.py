"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed as the tests run
and again in the pytest terminal summary.  Run standalone with
``python tests/test_acceptance.py``.
"""
import time

import numpy as np
import pytest

from lightcone import adjoint, chart, invariants, lorentz, pair, pairmap, quat
from lightcone.chart import GridSpec

CATALOG = ("sphere", "clifford", "veronese", "perturbed-clifford")
RESULTS = {}


def record(key, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}"
    RESULTS[key] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def catalog_frames():
    t = time.perf_counter()
    frames = {n: invariants.surface_frame(chart.catalog(n), GridSpec(32, 32)) for n in CATALOG}
    return frames, time.perf_counter() - t


def _random_pairs(count=100):
    """One random pair per seed at a seed-dependent point of the Veronese chart."""
    c = chart.catalog("veronese")
    for seed in range(count):
        u, v = np.random.default_rng(10_000 + seed).uniform(-1.2, 1.2, size=(2, 1, 1))
        yield pair.random_pair(seed, c, u, v)


def test_c01_frame_axioms(catalog_frames):
    frames, elapsed = catalog_frames
    t = time.perf_counter()
    worst = 0.0
    for f in frames.values():
        r = invariants.structure_residuals(f)
        worst = max(worst, r["nullity"], r["conformality"], r["normalization"], r["hill"])
    elapsed += time.perf_counter() - t
    record("1 frame axioms", worst < 1e-9 and elapsed < 10.0,
           f"max residual {worst:.2e} (< 1e-9), {elapsed:.2f}s (< 10s)")


def test_c02_integrability(catalog_frames):
    frames, _ = catalog_frames
    worst = {}
    for name, f in frames.items():
        r = invariants.structure_residuals(f)
        worst[name] = max(r["gauss"], r["codazzi"], r["ricci"])
    m = max(worst.values())
    record("2 integrability", m < 1e-8, f"max Gauss/Codazzi/Ricci {m:.2e} (< 1e-8)")


def test_c03_willmore_detection(catalog_frames):
    frames, _ = catalog_frames
    wc = invariants.willmore_residual(frames["clifford"])
    wv = invariants.willmore_residual(frames["veronese"])
    wp = invariants.willmore_residual(frames["perturbed-clifford"])
    record("3 willmore detection", wc < 1e-8 and wv < 1e-8 and wp > 1e-3,
           f"clifford {wc:.2e}, veronese {wv:.2e} (< 1e-8); perturbed {wp:.2e} (> 1e-3)")


def test_c04_energy(catalog_frames):
    frames, _ = catalog_frames
    W = invariants.willmore_energy(chart.catalog("clifford"), GridSpec(64, 64))
    kk = np.max(np.abs(frames["clifford"].kk().value - 0.125))
    err = abs(W - np.pi**2 / 2)
    record("4 energy", err < 1e-6 and kk < 1e-9,
           f"|W - pi^2/2| = {err:.2e} (< 1e-6), |<k,kbar> - 1/8| = {kk:.2e} (< 1e-9)")


def test_c05_pair_invariants():
    agree = swap = mob = 0.0
    transforms = [lorentz.random_lorentz(s, 4) for s in range(1, 11)]
    for i, (f, Yh) in enumerate(_random_pairs()):
        pp = pair.pair_invariants(f, Yh)
        th, rh = pair.bivector_invariants(f.Y, Yh)
        agree = max(agree, np.max(np.abs(th - pp.theta.value)), np.max(np.abs(rh - pp.rho.value)))
        ths, rhs = pair.bivector_invariants(Yh, f.Y)
        swap = max(swap, np.max(np.abs(ths - th)), np.max(np.abs(rhs - np.conj(rh))))
        T = transforms[i % 10]
        fT = invariants.frame_at(lorentz.apply(T, f.Y))
        q = pair.pair_invariants(fT, lorentz.apply(T, Yh).truncate(fT.N.order))
        mob = max(mob, np.max(np.abs(q.theta.value - pp.theta.value)),
                  np.max(np.abs(q.rho.value - pp.rho.value)))
    record("5 pair invariants", agree < 1e-10 and swap < 1e-12 and mob < 1e-9,
           f"paths {agree:.2e} (< 1e-10), swap {swap:.2e} (< 1e-12), "
           f"Mobius {mob:.2e} (< 1e-9) over 100 pairs and 10 maps")


def test_c06_tangent_sphere():
    worst = 0.0
    for f, Yh in _random_pairs():
        dt, dr = pair.tangent_sphere_check(f, Yh, pair.pair_invariants(f, Yh))
        worst = max(worst, float(np.max(dt + dr)))
    record("6 tangent sphere identity", worst < 1e-9,
           f"max |theta_u - theta| + |rho_u - rho| = {worst:.2e} (< 1e-9) over 100 pairs")


def test_c07_adjoint_duality():
    worst = trip = 0.0
    notes = []
    for name, branch in (("clifford", "swillmore"), ("veronese", "quadratic")):
        run = adjoint.adjoint_transform(chart.catalog(name), GridSpec(16, 16), branch)
        r = run.report
        worst = max(worst, r["willmore_adjoint"], r["rho_duality"], r["mutilde_identity"],
                    r["inner_sigma"], r["back_coto"])
        trip = max(trip, r["round_trip"])
        notes.append(f"{name}: {run.mufield.branch}")
    record("7 adjoint duality", worst < 1e-7 and trip < 1e-6,
           f"max residual {worst:.2e} (< 1e-7), round trip {trip:.2e} (< 1e-6); "
           + ", ".join(notes))


def test_c08_point_pair_map():
    form = 0.0
    for f, Yh in _random_pairs(20):
        pp = pair.pair_invariants(f, Yh)
        pm = pairmap.pairmap_fundamental(f.Y, Yh)
        form = max(form, np.max(np.abs(pm.hz_hz - pp.theta.value)),
                   np.max(np.abs(pm.hz_hzb - 0.5 * (pp.rho.value + np.conj(pp.rho.value)))))
    c, g = chart.catalog("clifford"), GridSpec(32, 32)
    run = adjoint.adjoint_transform(c, g, "swillmore")
    f, Yh = run.frame, run.adjoint.Yhat
    pp = pair.pair_invariants(f, Yh)
    pm = pairmap.pairmap_fundamental(f.Y, Yh)
    form = max(form, np.max(np.abs(pm.hz_hz - pp.theta.value)),
               np.max(np.abs(pm.hz_hzb - pp.rho.value.real)))
    h_adj = pairmap.harmonic_residual(f.Y, Yh)
    h_bad = pairmap.harmonic_residual(f.Y, pairmap.perturbed_partner(f, 0.05))
    E = pairmap.pair_energy(pp.rho.value, g, c.domain).real
    dE = abs(E + 4 * np.pi**2)
    record("8 point-pair map", form < 1e-10 and h_adj < 1e-8 and h_bad > 1e-4 and dE < 1e-5,
           f"first fundamental form {form:.2e} (< 1e-10), harmonic {h_adj:.2e} (< 1e-8), "
           f"perturbed {h_bad:.2e} (> 1e-4), |E + 4 pi^2| = {dE:.2e} (< 1e-5)")


def test_c09_associated_family(catalog_frames):
    frames, _ = catalog_frames
    worst = 0.0
    for name in ("clifford", "veronese"):
        for k in range(8):
            lam = np.exp(2j * np.pi * (k + 0.5) / 8)
            worst = max(worst, invariants.associated_family_residual(frames[name], lam).max())
    record("9 associated family", worst < 1e-8, f"max residual {worst:.2e} (< 1e-8) over 8 lambdas")


def test_c10_quaternion_equivalence():
    t = time.perf_counter()
    r = quat.equivalence_check(1000, seed=0, tol=1e-8)
    dt = time.perf_counter() - t
    bad = r["disagreements"] + r["sv_disagreements"]
    record("10 quaternion equivalence", bad == 0 and dt < 5.0,
           f"{bad} disagreements in {r['trials']} pairs ({r['touch_cases']} touch, "
           f"{r['cotouch_cases']} co-touch), {dt:.2f}s (< 5s)")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
