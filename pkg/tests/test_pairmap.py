import numpy as np
import pytest

from lightcone import adjoint, chart, invariants, lorentz, pair, pairmap
from lightcone.chart import GridSpec

PTS = (np.array([[0.3, -0.4]]), np.array([[0.2, 0.5]]))


@pytest.fixture(scope="module")
def clifford_run():
    return adjoint.adjoint_transform(chart.catalog("clifford"), GridSpec(16, 16), "swillmore")


@pytest.mark.parametrize("seed", range(5))
def test_first_fundamental_form(seed):
    f, Yh = pair.random_pair(seed, chart.catalog("veronese"), *PTS)
    pp = pair.pair_invariants(f, Yh)
    pm = pairmap.pairmap_fundamental(f.Y, Yh)
    scale = max(1.0, np.max(np.abs(pp.theta.value)), np.max(np.abs(pp.rho.value)))
    assert np.max(np.abs(pm.hh + 1)) < 1e-12
    assert np.max(np.abs(pm.hz_hz - pp.theta.value)) < 1e-10 * scale
    assert np.max(np.abs(pm.hz_hzb - pp.rho.value.real)) < 1e-10 * scale
    swapped = pairmap.pairmap_fundamental(Yh, f.Y)
    assert np.max(np.abs(swapped.hz_hz - pm.hz_hz)) < 1e-10 * scale
    assert np.max(np.abs(swapped.hz_hzb - pm.hz_hzb)) < 1e-10 * scale


def test_adjoint_pair_is_harmonic(clifford_run):
    f, Yh = clifford_run.frame, clifford_run.adjoint.Yhat
    assert pairmap.harmonic_residual(f.Y, Yh) < 1e-8
    bad = pairmap.perturbed_partner(f, 0.05)
    assert np.max(np.abs(lorentz.inner(bad, bad).value)) < 1e-13
    assert np.max(np.abs(lorentz.inner(bad, f.Y).value + 1)) < 1e-13
    assert pairmap.harmonic_residual(f.Y, bad) > 1e-4


def test_harmonic_residual_against_projector_tension(clifford_run):
    f, Yh = clifford_run.frame, clifford_run.adjoint.Yhat
    good = invariants.grassmann_tension(pairmap.plane_projector(f.Y, Yh))
    assert np.max(good) < 1e-8
    bad_partner = pairmap.perturbed_partner(f, 0.05)
    bad = invariants.grassmann_tension(pairmap.plane_projector(f.Y, bad_partner))
    assert np.min(bad) > 1e-4


def test_projection_is_idempotent(rng):
    f, Yh = pair.random_pair(1, chart.catalog("veronese"), *PTS)
    Y, H = f.Y.value, Yh.value
    terms = [(rng.normal(size=Y.shape), rng.normal(size=Y.shape)) for _ in range(3)]
    alpha, beta = pairmap.admissible_projection(terms, Y, H)
    for x in (alpha, beta):
        assert np.max(np.abs(lorentz.inner(x, Y))) < 1e-10
        assert np.max(np.abs(lorentz.inner(x, H))) < 1e-10
    a2, b2 = pairmap.admissible_projection([(beta, H), (Y, alpha)], Y, H)
    assert np.max(np.abs(a2 - alpha)) < 1e-10 * np.max(np.abs(alpha))
    assert np.max(np.abs(b2 - beta)) < 1e-10 * np.max(np.abs(beta))


def test_energy_clifford(clifford_run):
    c = chart.catalog("clifford")
    rho = pair.pair_invariants(clifford_run.frame, clifford_run.adjoint.Yhat).rho.value
    E = pairmap.pair_energy(rho, GridSpec(16, 16), c.domain)
    assert E.real == pytest.approx(-4 * np.pi**2, abs=1e-9)
    assert abs(E.imag) < 1e-12
    moved = adjoint.adjoint_transform(c, GridSpec(16, 16), "swillmore", T=lorentz.random_lorentz(3, 3))
    rho_T = pair.pair_invariants(moved.frame, moved.adjoint.Yhat).rho.value
    assert pairmap.pair_energy(rho_T, GridSpec(16, 16), c.domain).real == pytest.approx(E.real, abs=1e-8)


def test_converse_probe():
    # central-sphere pairs of non-Willmore surfaces are not harmonic
    for eps in (0.02, 0.05):
        f = invariants.surface_frame(chart.catalog("perturbed-clifford", eps=eps), GridSpec(6, 6))
        delta = invariants.willmore_residual(f)
        h = pairmap.harmonic_residual(f.Y, f.N)
        assert delta > 1e-3
        assert h > 0.1 * delta


def test_clifford_adjoint_fundamental_form(clifford_run):
    pm = pairmap.pairmap_fundamental(clifford_run.frame.Y, clifford_run.adjoint.Yhat)
    assert np.max(np.abs(pm.hz_hz)) < 1e-12
    assert np.max(np.abs(pm.hz_hzb + 0.25)) < 1e-12


def test_generic_pair_not_cotouching():
    f, Yh = pair.random_pair(2, chart.catalog("veronese"), *PTS)
    pm = pairmap.pairmap_fundamental(f.Y, Yh)
    theta = pair.pair_invariants(f, Yh).theta.value
    assert np.min(np.abs(theta)) > 1e-3
    assert np.max(np.abs(pm.hz_hz - theta)) < 1e-10
