import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lightcone import jet
from lightcone.jet import Jet, OrderExhaustedError, SingularJetError

u, v = sp.symbols("u v")
MONOS = [(i, j) for i in range(4) for j in range(4 - i)]


def poly(coefs):
    return sum(c * u**i * v**j for c, (i, j) in zip(coefs, MONOS))


def poly_jet(coefs, U, V):
    out = 0.0 * U
    for c, (i, j) in zip(coefs, MONOS):
        out = out + c * U**i * V**j if (i or j) else out + c
    return out


def test_leibniz_against_symbolic(rng):
    for _ in range(5):
        a = rng.normal(size=len(MONOS)).round(3)
        b = rng.normal(size=len(MONOS)).round(3)
        u0, v0 = rng.normal(size=2).round(3)
        U, V = Jet.variables(u0, v0, 6)
        prod = poly_jet(a, U, V) * poly_jet(b, U, V)
        expr = sp.expand(poly(a) * poly(b))
        for p in range(7):
            for q in range(7 - p):
                exact = float(sp.diff(expr, u, p, v, q).subs({u: u0, v: v0}))
                assert abs(prod.partial(p, q) - exact) < 1e-13 * max(1.0, abs(exact))


def test_laplacian_identity(rng):
    a = rng.normal(size=len(MONOS))
    U, V = Jet.variables(rng.normal(size=3), rng.normal(size=3), 4)
    f = poly_jet(a, U, V).exp()
    lap = f.du().du() + f.dv().dv()
    assert np.max(np.abs(f.dz().dzb().value - 0.25 * lap.value)) < 1e-14 * np.max(np.abs(lap.value)) * 10


def test_constant_jet():
    c = Jet.constant(2.5 - 1j, 3)
    assert c.value == 2.5 - 1j
    assert np.all(c.du().value == 0)


def test_order_exhausted():
    U, _ = Jet.variables(0.0, 0.0, 1)
    with pytest.raises(OrderExhaustedError):
        U.du().du()


def test_singular_division():
    U, _ = Jet.variables(0.0, 0.0, 3)
    with pytest.raises(SingularJetError):
        1.0 / U


@given(st.floats(0.2, 3.0), st.floats(0.0, 2.0))
@settings(max_examples=30)
def test_elementary_functions(u0, v0):
    U, V = Jet.variables(u0, v0, 4)
    f = U * U + V
    assert np.isclose(f.sqrt().du().value, U.value / np.sqrt(f.value))
    assert np.isclose((f.sin() ** 2 + f.cos() ** 2).du().value, 0, atol=1e-12)
    assert np.isclose((f.exp() * (-f).exp()).value, 1)
    inv = f.reciprocal()
    r = inv * f
    assert np.max(np.abs(r.c[1:])) < 1e-14 * np.max(np.abs(inv.c)) * np.max(np.abs(f.c))


def test_wirtinger_of_holomorphic():
    U, V = Jet.variables(0.4, 0.7, 5)
    z = U + 1j * V
    f = (z * z * z).exp()
    assert np.max(np.abs(f.dzb().c)) < 1e-12
    z0 = 0.4 + 0.7j
    assert np.isclose(f.dz().value, 3 * z0**2 * np.exp(z0**3))
    assert np.isclose(jet.wirtinger(f, 1, 0).value, f.dz().value)


def test_conj_and_parts():
    U, V = Jet.variables(0.1, 0.2, 2)
    f = U + 1j * V
    assert np.isclose(f.conj().dz().value, 0)
    assert np.isclose(f.real.value, 0.1)
    assert np.isclose(f.imag.value, 0.2)


def test_where_and_stack():
    U, V = Jet.variables(np.array([0.0, 1.0]), np.array([0.0, 0.0]), 2)
    w = jet.where(np.array([True, False]), U, V)
    assert np.allclose(w.du().value, [1, 0])
    s = Jet.stack([U, V])
    assert s.shape == (2, 2)
    assert np.allclose(s.comp(1).dv().value, 1)


def test_wirtinger_identities(rng):
    U, V = Jet.variables(rng.normal(size=4), rng.normal(size=4), 5)
    f = (U * V + 0.5j * U * U * U).sin() + V.exp()
    scale = np.max(np.abs(f.c))

    def close(a, b):
        return np.max(np.abs(a.c - b.c)) < 1e-14 * scale

    assert close(f.dz().dzb(), f.dzb().dz())
    assert close(f.conj().dz(), f.dzb().conj())
    x = f.real
    assert close(jet.wirtinger(x, 0, 1), jet.wirtinger(x, 1, 0).conj())
    g = U * U - V
    assert close((f * g).dz(), f.dz() * g + f * g.dz())
