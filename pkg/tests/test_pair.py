import numpy as np
import pytest

from lightcone import chart, invariants, lorentz, pair, quat
from lightcone.jet import Jet
from lightcone.pair import CoincidentPointError, ContactElement, ContactElementError

PTS = (np.array([[0.3, -0.4], [0.7, 0.1]]), np.array([[0.2, 0.5], [-0.6, 0.9]]))


def _conformal_pair(seed=5, u=PTS[0], v=PTS[1], order=6, a=None):
    """Veronese against a Möbius image of itself: both surfaces conformal."""
    c = chart.catalog("veronese")
    cT = c.transformed(lorentz.random_lorentz(seed, c.n))
    if a is not None:
        c, cT = c.reparametrized(a), cT.reparametrized(a)
    f = invariants.frame_at(chart.lift_chart(c, u, v, order))
    raw = chart.lift_chart(cT, u, v, order).truncate(f.N.order)
    return f, pair.normalize_pair(f.Y, raw)


def test_normalize_pair(frames):
    f = frames["veronese"]
    N = f.N.truncate(f.N.order)
    assert np.max(np.abs(pair.normalize_pair(f.Y, N).c - N.c)) < 1e-13
    assert np.max(np.abs(pair.normalize_pair(f.Y, 3.0 * N).c - N.c)) < 1e-13
    with pytest.raises(CoincidentPointError):
        pair.normalize_pair(f.Y, f.Y)


def test_clifford_central_sphere_pair(frames):
    f = frames["clifford"]
    pp = pair.pair_invariants(f, f.N)
    assert np.max(np.abs(pp.mu.value)) < 1e-13
    assert np.max(np.abs(pp.xi.value)) < 1e-13
    assert np.max(np.abs(pp.theta.value + f.s.value)) < 1e-13
    assert np.max(np.abs(pp.theta.value)) < 1e-13
    assert np.max(np.abs(pp.rho.value + 0.25)) < 1e-13


@pytest.mark.parametrize("seed", range(8))
def test_random_pair_paths_agree(seed):
    c = chart.catalog("veronese")
    f, Yh = pair.random_pair(seed, c, *PTS)
    pp = pair.pair_invariants(f, Yh)
    th, rh = pair.bivector_invariants(f.Y, Yh)
    scale = max(1.0, np.max(np.abs(th)), np.max(np.abs(rh)))
    assert np.max(np.abs(th - pp.theta.value)) < 1e-10 * scale
    assert np.max(np.abs(rh - pp.rho.value)) < 1e-10 * scale
    assert pair.fundamental_residual(f, pp) < 1e-9 * scale
    assert np.max(np.abs(pp.reconstruction(f).value - Yh.value)) < 1e-12 * scale
    ths, rhs = pair.bivector_invariants(Yh, f.Y)
    assert np.max(np.abs(ths - th)) < 1e-12 * scale
    assert np.max(np.abs(rhs - np.conj(rh))) < 1e-12 * scale
    dt, dr = pair.tangent_sphere_check(f, Yh, pp)
    assert np.max(dt + dr) < 1e-9 * scale


def test_mobius_invariance():
    f, Yh = pair.random_pair(3, chart.catalog("veronese"), *PTS)
    pp = pair.pair_invariants(f, Yh)
    for seed in (1, 2, 3):
        T = lorentz.random_lorentz(seed, f.n)
        fT = invariants.frame_at(lorentz.apply(T, f.Y))
        YhT = lorentz.apply(T, Yh).truncate(fT.N.order)
        q = pair.pair_invariants(fT, YhT)
        assert np.max(np.abs(q.theta.value - pp.theta.value)) < 1e-9
        assert np.max(np.abs(q.rho.value - pp.rho.value)) < 1e-9


def test_partner_lift_scaling_invariance():
    f, Yh = _conformal_pair()
    U, V = Jet.variables(*PTS, Yh.order)
    phi = (0.3 * U + V * V).exp()
    Yh2 = pair.normalize_pair(f.Y, phi[..., None] * Yh)
    p1, p2 = pair.pair_invariants(f, Yh), pair.pair_invariants(f, Yh2)
    assert np.max(np.abs(p1.theta.value - p2.theta.value)) < 1e-11
    assert np.max(np.abs(p1.rho.value - p2.rho.value)) < 1e-11


@pytest.mark.parametrize("a", [2.0, 1j])
def test_reparametrization_law(a):
    w = (np.array([[0.15, -0.2]]), np.array([[0.1, 0.25]]))
    z = a * (w[0] + 1j * w[1])
    f, Yh = _conformal_pair(u=z.real, v=z.imag)
    fa, Yha = _conformal_pair(u=w[0], v=w[1], a=a)
    p, pa = pair.pair_invariants(f, Yh), pair.pair_invariants(fa, Yha)
    assert np.max(np.abs(pa.theta.value - a**2 * p.theta.value)) < 1e-10
    assert np.max(np.abs(pa.rho.value - abs(a) ** 2 * p.rho.value)) < 1e-10


def test_contact_elements_at_distinct_points():
    f, Yh = _conformal_pair()
    pp = pair.pair_invariants(f, Yh)
    lam = np.sqrt(2 * lorentz.inner(Yh.dz(), Yh.dzb()).value.real)
    for idx in [(0, 0), (1, 1)]:
        S = pair.contact_element_of_lift(f.Y, idx)
        Sh = pair.contact_element_of_lift(Yh, idx)
        assert S.gram_residual() < 1e-12
        th, rh = pair.contact_invariants(S, Sh)
        assert abs(th * lam[idx] - pp.theta.value[idx]) < 1e-10 * max(1, abs(th))
        assert abs(rh * lam[idx] - pp.rho.value[idx]) < 1e-10 * max(1, abs(rh))
        # frames enter only through a phase
        for phi in (0.4, 2.0):
            t2, r2 = pair.contact_invariants(S.rotated(phi), Sh.rotated(-phi / 3))
            assert abs(abs(t2) - abs(th)) < 1e-12 * max(1, abs(th))
            assert abs(abs(r2) - abs(rh)) < 1e-12 * max(1, abs(rh))
        with pytest.raises(ContactElementError):
            pair.contact_invariants_distinct(S, S)


def test_same_point_examples():
    U = quat.OrientedPlane4.spanned(quat.ONE, quat.I)
    S = quat.contact_element(U)
    assert pair.contact_invariants(S, S) == pytest.approx((1, 0))
    assert pair.contact_invariants(S, S.reversed()) == pytest.approx((0, 1))
    assert pair.touch_predicates(S, S) == {"touch": True, "cotouch": False}
    # two complex lines of C^2 = span{1, i} + span{j, k}
    V = quat.contact_element(quat.OrientedPlane4.spanned(quat.J, quat.K))
    th, rh = pair.contact_invariants(S, V)
    assert abs(rh) < 1e-15
    for phi in (0.3, 1.1):
        t2, r2 = pair.contact_invariants(S.rotated(phi), V)
        assert abs(abs(t2) - abs(th)) < 1e-14 and abs(r2) < 1e-14


def test_contact_element_validation():
    X = np.array([1.0, 1.0, 0, 0, 0])
    with pytest.raises(ContactElementError):
        ContactElement.from_frame(np.array([1.0, 0, 0, 0, 0]), np.eye(5)[2], np.eye(5)[3])
    with pytest.raises(ContactElementError):
        ContactElement.from_frame(X, np.eye(5)[2], 2 * np.eye(5)[2])
    with pytest.raises(ContactElementError):
        ContactElement.from_frame(X, np.eye(5)[1], np.eye(5)[2])
