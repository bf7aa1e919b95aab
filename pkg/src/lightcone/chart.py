"""Conformal surface charts f: U -> S^n evaluated in jet arithmetic.

Charts must already be in conformal coordinates z = u + iv.  The catalog
checks this but never looks for isothermal coordinates itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from . import lorentz
from .jet import DEFAULT_ORDER, Jet, SingularJetError

EPS_IMM = 1e-10
CONFORMAL_TOL = 1e-10
SPHERICAL_TOL = 1e-12


class ChartError(ValueError):
    """Unknown chart, bad parameters, or a chart that fails its checks."""


class SingularNormalizationError(SingularJetError):
    """The canonical lift cannot be normalized (not an immersion there)."""

    def __init__(self, msg, points=None):
        super().__init__(msg)
        self.points = points


@dataclass(frozen=True)
class Domain:
    u0: float
    u1: float
    v0: float
    v1: float
    periodic_u: bool = False
    periodic_v: bool = False

    def axis(self, which: str, n: int) -> np.ndarray:
        a, b, periodic = (
            (self.u0, self.u1, self.periodic_u)
            if which == "u"
            else (self.v0, self.v1, self.periodic_v)
        )
        if periodic:
            return a + (b - a) * np.arange(n) / n
        return np.linspace(a, b, n)

    def as_list(self) -> list:
        return [self.u0, self.u1, self.v0, self.v1]


@dataclass(frozen=True)
class GridSpec:
    nu: int
    nv: int

    def __post_init__(self):
        if self.nu < 4 or self.nv < 4:
            raise ChartError(f"grid must be at least 4x4, got {self.nu}x{self.nv}")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        try:
            nu, nv = (int(t) for t in text.lower().split("x"))
        except ValueError:
            raise ChartError(f"grid spec must look like 32x32, got {text!r}") from None
        return cls(nu, nv)

    def points(self, domain: Domain) -> tuple[np.ndarray, np.ndarray]:
        u = domain.axis("u", self.nu)
        v = domain.axis("v", self.nv)
        return np.meshgrid(u, v, indexing="ij")

    def integrate(self, values: np.ndarray, domain: Domain) -> complex:
        """Tensor-product quadrature: trapezoid if periodic, Simpson otherwise."""
        out = np.asarray(values)
        for which, periodic, (a, b) in (
            ("u", domain.periodic_u, (domain.u0, domain.u1)),
            ("v", domain.periodic_v, (domain.v0, domain.v1)),
        ):
            n = out.shape[0]
            if periodic:
                out = out.sum(axis=0) * (b - a) / n
            else:
                out = simpson(out, x=np.linspace(a, b, n), axis=0)
        return complex(out)


@dataclass(frozen=True)
class SurfaceChart:
    """A conformal chart into S^n, evaluated as jets of R^{n+1} components.

    ``func(U, V)`` receives the coordinate jets and returns a list of
    component jets of the point on the sphere (native dimension); ``n`` may
    exceed the native dimension, in which case the chart is padded with
    zeros (S^m sitting totally geodesically in S^n).
    """

    name: str
    n: int
    domain: Domain
    func: Callable = field(repr=False, compare=False)
    native_n: int = 0
    params: dict = field(default_factory=dict, compare=False)

    def eval(self, u, v, order: int = DEFAULT_ORDER) -> Jet:
        U, V = Jet.variables(u, v, order)
        comps = list(self.func(U, V))
        zero = Jet.zeros(U.shape, order)
        comps += [zero] * (self.n + 1 - len(comps))
        return Jet.stack(comps)

    def embedded(self, n: int) -> "SurfaceChart":
        if n < self.native_n:
            raise ChartError(f"{self.name} lives in S^{self.native_n}, cannot embed in S^{n}")
        return replace(self, n=n)

    def transformed(self, T: np.ndarray) -> "SurfaceChart":
        """The Möbius image of this chart under the Lorentz map T."""
        inner_func = self.func
        n = self.n

        def func(U, V):
            comps = list(inner_func(U, V))
            zero = Jet.zeros(U.shape, U.order)
            comps += [zero] * (n + 1 - len(comps))
            F = lorentz.apply(T, Jet.stack([Jet.constant(np.ones(U.shape), U.order)] + comps))
            inv = F.comp(0).reciprocal()
            return [F.comp(i) * inv for i in range(1, n + 2)]

        return replace(self, name=f"{self.name}*T", func=func, native_n=n)

    def reparametrized(self, a: complex) -> "SurfaceChart":
        """Precompose with z -> a z (a != 0)."""
        a = complex(a)
        if a == 0:
            raise ChartError("reparametrization factor must be nonzero")
        inner_func = self.func

        def func(U, V):
            return inner_func(a.real * U - a.imag * V, a.imag * U + a.real * V)

        return replace(self, name=f"{self.name}(a z)", func=func)


# -- lifts ---------------------------------------------------------------
def light_cone_lift(chart: SurfaceChart, u, v, order: int = DEFAULT_ORDER) -> Jet:
    """F = (1, f(u, v)) as an order-K jet vector of R^{n+1,1}."""
    f = chart.eval(u, v, order)
    one = Jet.constant(np.ones(f.shape[:-1]), order)
    return Jet.stack([one] + [f.comp(i) for i in range(f.shape[-1])])


def canonical_lift(F: Jet, eps_imm: float = EPS_IMM, points=None) -> Jet:
    """Y = F / sqrt(2 <F_z, F_zbar>), the lift with |dY|^2 = |dz|^2."""
    if np.any(F.value[..., 0].real <= 0):
        raise ChartError("lift leaves the forward light cone (F_0 <= 0)")
    g = lorentz.inner(F.dz(), F.dzb())
    bad = g.value.real <= eps_imm
    if np.any(bad):
        where = None
        if points is not None:
            u, v = points
            where = list(zip(np.asarray(u)[bad].tolist(), np.asarray(v)[bad].tolist()))
        raise SingularNormalizationError(
            f"not an immersion: <F_z,F_zbar> <= {eps_imm:g} at {int(bad.sum())} point(s)"
            + (f", e.g. (u,v)={where[0]}" if where else ""),
            where,
        )
    scale = (2.0 * g.real).sqrt().reciprocal()
    return scale[..., None] * F.truncate(g.order)


def lift_chart(chart: SurfaceChart, u, v, order: int = DEFAULT_ORDER) -> Jet:
    """Canonical lift of a chart at points (u, v); the result has order K-1."""
    return canonical_lift(light_cone_lift(chart, u, v, order), points=(u, v))


# -- catalog -------------------------------------------------------------
def _sphere(n: int = 3, radius: float = 2.0) -> SurfaceChart:
    def func(U, V):
        r2 = U * U + V * V
        inv = (1.0 + r2).reciprocal()
        return [2.0 * U * inv, 2.0 * V * inv, (r2 - 1.0) * inv]

    dom = Domain(-radius, radius, -radius, radius)
    return SurfaceChart("sphere", n, dom, func, native_n=2, params={"radius": radius})


def _flat_torus(r1: float, r2: float):
    """Product torus (r1 e^{iu}, r2 e^{i r1 v / r2}), conformal and flat."""
    w = r1 / r2

    def func(U, V):
        return [r1 * U.cos(), r1 * U.sin(), r2 * (w * V).cos(), r2 * (w * V).sin()]

    return func


def _clifford(n: int = 3) -> SurfaceChart:
    r = 1.0 / math.sqrt(2.0)
    dom = Domain(0.0, 2 * math.pi, 0.0, 2 * math.pi, True, True)
    return SurfaceChart("clifford", n, dom, _flat_torus(r, r), native_n=3)


def _perturbed_clifford(eps: float = 0.05, n: int = 3) -> SurfaceChart:
    """Flat torus with radii (cos(pi/4 + eps), sin(pi/4 + eps)).

    It stays conformal and spherical but is Willmore only at eps = 0.
    """
    r1 = math.cos(math.pi / 4 + eps)
    r2 = math.sin(math.pi / 4 + eps)
    if eps == 0.0:
        r1 = r2 = 1.0 / math.sqrt(2.0)
    dom = Domain(0.0, 2 * math.pi, 0.0, 2 * math.pi * r2 / r1, True, True)
    return SurfaceChart(
        "perturbed-clifford", n, dom, _flat_torus(r1, r2), native_n=3, params={"eps": eps}
    )


def _veronese(n: int = 4, radius: float = 1.5) -> SurfaceChart:
    """Veronese surface in S^4 precomposed with inverse stereographic projection."""
    s3 = math.sqrt(3.0)

    def func(U, V):
        r2 = U * U + V * V
        inv = (1.0 + r2).reciprocal()
        x, y, z = 2.0 * U * inv, 2.0 * V * inv, (r2 - 1.0) * inv
        return [
            s3 * y * z,
            s3 * x * z,
            s3 * x * y,
            0.5 * s3 * (x * x - y * y),
            0.5 * (x * x + y * y - 2.0 * z * z),
        ]

    dom = Domain(-radius, radius, -radius, radius)
    return SurfaceChart("veronese", n, dom, func, native_n=4, params={"radius": radius})


def graph_chart(terms, n: int, domain: Domain, check_grid: int = 8) -> SurfaceChart:
    """User chart given by trigonometric polynomials per ambient coordinate.

    ``terms`` is a list of dicts ``{component, p, q, cos, sin}`` meaning
    ``cos * cos(p u + q v) + sin * sin(p u + q v)`` added to that component.
    The chart is accepted only if it is spherical and conformal on a check
    grid; spherical charts are renormalized exactly, never projected.
    """
    table = []
    for t in terms:
        unknown = set(t) - {"component", "p", "q", "cos", "sin"}
        if unknown:
            raise ChartError(f"unknown keys in graph term: {sorted(unknown)}")
        c = int(t["component"])
        if not 0 <= c <= n:
            raise ChartError(f"component {c} outside 0..{n}")
        table.append((c, float(t.get("p", 0)), float(t.get("q", 0)),
                      float(t.get("cos", 0.0)), float(t.get("sin", 0.0))))

    def raw(U, V):
        comps = [Jet.zeros(U.shape, U.order) for _ in range(n + 1)]
        for c, p, q, a, b in table:
            arg = p * U + q * V
            if a:
                comps[c] = comps[c] + a * arg.cos()
            if b:
                comps[c] = comps[c] + b * arg.sin()
        return comps

    def func(U, V):
        comps = raw(U, V)
        norm2 = comps[0] * comps[0]
        for x in comps[1:]:
            norm2 = norm2 + x * x
        inv = norm2.real.sqrt().reciprocal()
        return [x * inv for x in comps]

    u, v = GridSpec(check_grid, check_grid).points(domain)
    U, V = Jet.variables(u, v, 1)
    comps = raw(U, V)
    sph = max(
        float(np.max(np.abs(sum(x.value**2 for x in comps) - 1.0))),
        0.0,
    )
    if sph > 1e-9:
        raise ChartError(f"graph chart is not spherical: max | |f|^2 - 1 | = {sph:.3e}")
    chart = SurfaceChart("graph", n, domain, func, native_n=n, params={"terms": terms})
    res = conformality_residual(chart, u, v)
    if res > CONFORMAL_TOL * 10:
        raise ChartError(f"graph chart is not conformal: max |<F_z,F_z>| = {res:.3e}")
    return chart


def conformality_residual(chart: SurfaceChart, u, v) -> float:
    F = light_cone_lift(chart, u, v, 1)
    Fz = F.dz()
    return float(np.max(np.abs(lorentz.inner(Fz, Fz).value)))


_CATALOG = {
    "sphere": _sphere,
    "clifford": _clifford,
    "veronese": _veronese,
    "perturbed-clifford": _perturbed_clifford,
}

CATALOG_NAMES = tuple(_CATALOG) + ("graph",)


def catalog(name: str, **params) -> SurfaceChart:
    """Look up a chart by name: sphere, clifford, veronese, perturbed-clifford, graph."""
    if name == "graph":
        try:
            terms = params.pop("terms")
            n = int(params.pop("n"))
            domain = params.pop("domain")
        except KeyError as exc:
            raise ChartError(f"graph chart needs {exc.args[0]!r}") from None
        if not isinstance(domain, Domain):
            periodic = params.pop("periodic", (False, False))
            domain = Domain(*map(float, domain), *map(bool, periodic))
        if params:
            raise ChartError(f"unknown graph parameters: {sorted(params)}")
        return graph_chart(terms, n, domain)
    if name not in _CATALOG:
        raise ChartError(f"unknown chart {name!r}; known: {', '.join(CATALOG_NAMES)}")
    try:
        chart = _CATALOG[name](**params)
    except TypeError as exc:
        raise ChartError(f"bad parameters for {name}: {exc}") from None
    if chart.n < chart.native_n or chart.n < 3:
        raise ChartError(f"{name} needs ambient n >= {max(3, chart.native_n)}")
    return chart


def fit_graph(points: np.ndarray, domain: Domain, tol: float = 1e-9) -> SurfaceChart:
    """Trigonometric interpolation of a sampled periodic surface.

    ``points`` has shape (nu, nv, n+1) on the periodic lattice of ``domain``;
    used to re-ingest an exported surface grid as a ``graph`` chart.
    """
    if not (domain.periodic_u and domain.periodic_v):
        raise ChartError("re-ingestion by trigonometric fit needs a doubly periodic domain")
    nu, nv, m = points.shape
    Lu, Lv = domain.u1 - domain.u0, domain.v1 - domain.v0
    coef = np.fft.fft2(points, axes=(0, 1)) / (nu * nv)
    ku = np.fft.fftfreq(nu, 1.0 / nu)
    kv = np.fft.fftfreq(nv, 1.0 / nv)
    terms = []
    for c in range(m):
        for a, p in enumerate(ku):
            for b, q in enumerate(kv):
                z = coef[a, b, c]
                if abs(z) < tol * 1e-3:
                    continue
                # exp(i(pu' + qv')) with u' = 2 pi (u - u0) / Lu
                pp, qq = 2 * np.pi * p / Lu, 2 * np.pi * q / Lv
                phase = pp * domain.u0 + qq * domain.v0
                z = z * np.exp(-1j * phase)
                terms.append({"component": c, "p": pp, "q": qq,
                              "cos": float(z.real), "sin": float(-z.imag)})
    return graph_chart(terms, m - 1, domain)
