import numpy as np
import pytest

from lightcone import chart, lorentz
from lightcone.chart import ChartError, Domain, GridSpec, SingularNormalizationError, SurfaceChart
from lightcone.jet import Jet


def test_clifford_pointwise(rng):
    c = chart.catalog("clifford")
    u, v = rng.uniform(0, 2 * np.pi, size=(2, 10))
    f = c.eval(u, v, 3)
    r = 1 / np.sqrt(2)
    direct = np.stack([r * np.cos(u), r * np.sin(u), r * np.cos(v), r * np.sin(v)], axis=-1)
    assert np.max(np.abs(f.value - direct)) < 1e-14
    d_u = np.stack([-r * np.sin(u), r * np.cos(u), 0 * u, 0 * u], axis=-1)
    assert np.max(np.abs(f.du().value - d_u)) < 1e-14


def test_veronese_pointwise(rng):
    c = chart.catalog("veronese")
    u, v = rng.uniform(-1.5, 1.5, size=(2, 10))
    d = 1 + u**2 + v**2
    x, y, z = 2 * u / d, 2 * v / d, (u**2 + v**2 - 1) / d
    s3 = np.sqrt(3)
    direct = np.stack([s3 * y * z, s3 * x * z, s3 * x * y, s3 / 2 * (x**2 - y**2),
                       (x**2 + y**2 - 2 * z**2) / 2], axis=-1)
    f = c.eval(u, v, 2)
    assert np.max(np.abs(f.value - direct)) < 1e-14
    assert np.max(np.abs(np.sum(f.value**2, axis=-1) - 1)) < 1e-14


def test_clifford_conformal_factor():
    c = chart.catalog("clifford")
    u, v = GridSpec(8, 8).points(c.domain)
    F = chart.light_cone_lift(c, u, v, 2)
    g = lorentz.inner(F.dz(), F.dzb()).value
    assert np.max(np.abs(g - 0.25)) < 1e-15


@pytest.mark.parametrize("name", ["sphere", "clifford", "veronese", "perturbed-clifford"])
def test_canonical_lift_is_normalized(name):
    c = chart.catalog(name)
    u, v = GridSpec(6, 6).points(c.domain)
    Y = chart.lift_chart(c, u, v, 4)
    assert Y.order == 3
    assert np.max(np.abs(lorentz.inner(Y, Y).value)) < 1e-13
    assert np.max(np.abs(lorentz.inner(Y.dz(), Y.dz()).value)) < 1e-13
    assert np.max(np.abs(lorentz.inner(Y.dz(), Y.dzb()).value - 0.5)) < 1e-13


def test_lift_mobius_equivariant():
    c = chart.catalog("veronese")
    T = lorentz.random_lorentz(3, c.n)
    u, v = GridSpec(5, 5).points(c.domain)
    Y = chart.lift_chart(c, u, v, 3)
    YT = chart.lift_chart(c.transformed(T), u, v, 3)
    assert np.max(np.abs(YT.c - lorentz.apply(T, Y).c)) < 1e-12


@pytest.mark.parametrize("a", [2.0, 1j])
def test_lift_reparametrization(a):
    c = chart.catalog("veronese")
    w = np.array([0.11 + 0.2j, -0.3 + 0.05j, 0.4 - 0.25j])
    z = a * w
    Yw = chart.lift_chart(c.reparametrized(a), w.real, w.imag, 3)
    Yz = chart.lift_chart(c, z.real, z.imag, 3)
    assert np.max(np.abs(Yw.value - Yz.value / abs(a))) < 1e-14
    # chain rule for the holomorphic derivative
    assert np.max(np.abs(Yw.dz().value - a * Yz.dz().value / abs(a))) < 1e-13


def test_catalog_errors():
    with pytest.raises(ChartError):
        chart.catalog("torus-of-doom")
    with pytest.raises(ChartError):
        chart.catalog("clifford", bogus=1)
    with pytest.raises(ChartError):
        chart.catalog("veronese").embedded(3)
    assert chart.catalog("clifford").embedded(5).eval(0.1, 0.2, 1).shape == (6,)


def test_non_immersion_reports_points():
    def func(U, V):
        one = Jet.constant(np.ones(U.shape), U.order)
        zero = 0.0 * U
        return [one, zero, zero, zero]

    c = SurfaceChart("point", 3, Domain(0, 1, 0, 1), func, native_n=3)
    u, v = GridSpec(4, 4).points(c.domain)
    with pytest.raises(SingularNormalizationError) as exc:
        chart.lift_chart(c, u, v, 3)
    assert exc.value.points and len(exc.value.points) == 16


CLIFFORD_TERMS = [
    {"component": 0, "p": 1, "q": 0, "cos": 0.5 ** 0.5},
    {"component": 1, "p": 1, "q": 0, "sin": 0.5 ** 0.5},
    {"component": 2, "p": 0, "q": 1, "cos": 0.5 ** 0.5},
    {"component": 3, "p": 0, "q": 1, "sin": 0.5 ** 0.5},
]


def test_graph_chart_reproduces_clifford():
    dom = [0, 2 * np.pi, 0, 2 * np.pi]
    g = chart.catalog("graph", terms=CLIFFORD_TERMS, n=3, domain=dom, periodic=[True, True])
    c = chart.catalog("clifford")
    u, v = GridSpec(6, 6).points(c.domain)
    assert np.max(np.abs(g.eval(u, v, 3).c - c.eval(u, v, 3).c)) < 1e-14


def test_graph_chart_rejects_nonconformal():
    terms = [dict(t) for t in CLIFFORD_TERMS]
    terms[2]["q"] = terms[3]["q"] = 2
    with pytest.raises(ChartError, match="not conformal"):
        chart.catalog("graph", terms=terms, n=3, domain=[0, 6.28, 0, 6.28])
    with pytest.raises(ChartError, match="not spherical"):
        chart.catalog("graph", terms=CLIFFORD_TERMS[:2], n=3, domain=[0, 1, 0, 1])


def test_fit_graph_roundtrip():
    c = chart.catalog("clifford")
    u, v = GridSpec(16, 16).points(c.domain)
    pts = c.eval(u, v, 0).value.real
    g = chart.fit_graph(pts, c.domain)
    uu, vv = np.array([0.3, 1.7]), np.array([2.2, 5.0])
    assert np.max(np.abs(g.eval(uu, vv, 2).c - c.eval(uu, vv, 2).c)) < 1e-12
    with pytest.raises(ChartError):
        chart.fit_graph(pts, Domain(0, 1, 0, 1))


def test_grid_parse_and_integrate():
    assert GridSpec.parse("12x7") == GridSpec(12, 7)
    with pytest.raises(ChartError):
        GridSpec.parse("twelve")
    with pytest.raises(ChartError):
        GridSpec(2, 8)
    per = Domain(0, 2 * np.pi, 0, 2 * np.pi, True, True)
    u, v = GridSpec(16, 16).points(per)
    assert GridSpec(16, 16).integrate(np.cos(u) ** 2, per) == pytest.approx(2 * np.pi**2)
    box = Domain(0, 1, 0, 2)
    u, v = GridSpec(9, 9).points(box)
    assert GridSpec(9, 9).integrate(u**2 * v, box).real == pytest.approx(2 / 3)


def test_clifford_lift_is_scaled_light_cone_lift():
    c = chart.catalog("clifford")
    u, v = GridSpec(5, 5).points(c.domain)
    F = chart.light_cone_lift(c, u, v, 3)
    Y = chart.lift_chart(c, u, v, 3)
    assert np.max(np.abs(Y.c - np.sqrt(2) * F.truncate(2).c)) < 1e-14
    assert np.all(Y.value[..., 0].real > 0)
