"""Truncated bivariate Taylor jets in the real coordinates (u, v).

A :class:`Jet` of order ``K`` holds the Taylor coefficients of a (possibly
complex valued) function around a base point, truncated after total degree
``K``.  Coefficients live on the first array axis, ordered by total degree,
so truncating to a lower order is a prefix slice.  Every further axis is a
*batch* axis: grid points, vector components, matrix entries.  Arithmetic
broadcasts over batch axes the way numpy does.

All derivatives in this package come from jets; there are no finite
differences anywhere.  With ``z = u + iv`` the Wirtinger operators are

    d/dz = (d/du - i d/dv) / 2,    d/dzbar = (d/du + i d/dv) / 2.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

DEFAULT_ORDER = 6
EPS_DIV = 1e-12


class SingularJetError(ZeroDivisionError):
    """Division by (or root of) a jet whose constant term is too small."""


class OrderExhaustedError(ValueError):
    """A derivative was requested beyond the retained order."""


class _Tables:
    def __init__(self, K: int):
        pairs = [(d - k, k) for d in range(K + 1) for k in range(d + 1)]
        self.K = K
        self.pairs = pairs
        self.index = {p: i for i, p in enumerate(pairs)}
        self.size = len(pairs)
        self.degree = np.array([j + k for j, k in pairs])
        # a[i] * b[:prefix[i]] lands on targets[i]
        self.prefix = [_size(K - j - k) for j, k in pairs]
        self.targets = [
            np.array([self.index[(j + p, k + q)] for p, q in pairs[: self.prefix[i]]])
            for i, (j, k) in enumerate(pairs)
        ]
        if K > 0:
            low = pairs[: _size(K - 1)]
            self.du_src = np.array([self.index[(j + 1, k)] for j, k in low])
            self.du_w = np.array([j + 1.0 for j, k in low])
            self.dv_src = np.array([self.index[(j, k + 1)] for j, k in low])
            self.dv_w = np.array([k + 1.0 for j, k in low])


def _size(K: int) -> int:
    return (K + 1) * (K + 2) // 2 if K >= 0 else 0


@lru_cache(maxsize=None)
def _tables(K: int) -> _Tables:
    return _Tables(K)


def _expand(c: np.ndarray, ndim: int) -> np.ndarray:
    """Insert unit batch axes right after the coefficient axis."""
    missing = ndim - c.ndim
    if missing <= 0:
        return c
    return c.reshape(c.shape[:1] + (1,) * missing + c.shape[1:])


class Jet:
    """Truncated Taylor expansion, batched over trailing axes.

    ``c[i, ...]`` is the coefficient of ``(u-u0)**j (v-v0)**k`` for the i-th
    pair ``(j, k)`` in degree order; :meth:`partial` converts to mixed partial
    derivatives.
    """

    __slots__ = ("c", "order")
    __array_priority__ = 1000

    def __init__(self, coeffs, order: int):
        c = np.asarray(coeffs, dtype=complex)
        if c.shape[0] != _size(order):
            raise ValueError(
                f"order {order} needs {_size(order)} coefficients, got {c.shape[0]}"
            )
        self.c = c
        self.order = order

    # -- construction --------------------------------------------------
    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = np.asarray(value, dtype=complex)
        c = np.zeros((_size(order),) + value.shape, dtype=complex)
        c[0] = value
        return cls(c, order)

    @classmethod
    def zeros(cls, shape, order: int) -> "Jet":
        return cls(np.zeros((_size(order),) + tuple(shape), dtype=complex), order)

    @classmethod
    def variables(cls, u0, v0, order: int = DEFAULT_ORDER) -> tuple["Jet", "Jet"]:
        """Jets of the coordinate functions u and v at base points (u0, v0)."""
        u0, v0 = np.broadcast_arrays(np.asarray(u0, float), np.asarray(v0, float))
        U = cls.constant(u0, order)
        V = cls.constant(v0, order)
        if order >= 1:
            t = _tables(order)
            U.c[t.index[(1, 0)]] = 1.0
            V.c[t.index[(0, 1)]] = 1.0
        return U, V

    @classmethod
    def stack(cls, jets, axis: int = -1) -> "Jet":
        """Stack jets along a new batch axis (default: last)."""
        K = min(j.order for j in jets)
        arrays = [j.truncate(K).c for j in jets]
        nd = max(a.ndim for a in arrays)
        arrays = [_expand(a, nd) for a in arrays]
        shape = np.broadcast_shapes(*(a.shape for a in arrays))
        arrays = [np.broadcast_to(a, shape) for a in arrays]
        if axis < 0:
            axis = len(shape) + axis + 1
        else:
            axis += 1
        return cls(np.stack(arrays, axis=axis), K)

    # -- inspection ----------------------------------------------------
    @property
    def shape(self) -> tuple:
        return self.c.shape[1:]

    @property
    def value(self) -> np.ndarray:
        """Constant term, i.e. the value at the base point."""
        return self.c[0]

    def coefficient(self, j: int, k: int) -> np.ndarray:
        return self.c[_tables(self.order).index[(j, k)]]

    def partial(self, j: int, k: int) -> np.ndarray:
        """Mixed partial d^j/du^j d^k/dv^k at the base point."""
        if j + k > self.order:
            raise OrderExhaustedError(f"partial ({j},{k}) beyond order {self.order}")
        return self.coefficient(j, k) * (math.factorial(j) * math.factorial(k))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.c))) if self.c.size else 0.0

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape})"

    # -- batch manipulation --------------------------------------------
    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.c[(slice(None),) + key], self.order)

    def comp(self, i) -> "Jet":
        """Select along the last batch axis (vector component)."""
        return Jet(self.c[..., i], self.order)

    def sum(self, axis=-1) -> "Jet":
        axis = axis + self.c.ndim if axis < 0 else axis + 1
        return Jet(self.c.sum(axis=axis), self.order)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderExhaustedError(f"cannot raise order {self.order} -> {order}")
        if order == self.order:
            return self
        return Jet(self.c[: _size(order)], order)

    def broadcast_to(self, shape) -> "Jet":
        return Jet(np.broadcast_to(self.c, self.c.shape[:1] + tuple(shape)), self.order)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        """Return (a, b, K) coefficient arrays aligned for broadcasting."""
        if isinstance(other, Jet):
            K = min(self.order, other.order)
            a = self.c[: _size(K)]
            b = other.c[: _size(K)]
            nd = max(a.ndim, b.ndim)
            return _expand(a, nd), _expand(b, nd), K
        return None

    def __add__(self, other):
        co = self._coerce(other)
        if co is not None:
            a, b, K = co
            return Jet(a + b, K)
        other = np.asarray(other)
        shape = np.broadcast_shapes(self.shape, other.shape)
        c = np.array(np.broadcast_to(_expand(self.c, len(shape) + 1), self.c.shape[:1] + shape))
        c[0] += other
        return Jet(c, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            other = np.asarray(other)
            return Jet(_expand(self.c, other.ndim + 1) * other, self.order)
        a, b, K = co
        return Jet(_mul(a, b, K), K)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        other = np.asarray(other)
        return Jet(_expand(self.c, other.ndim + 1) / other, self.order)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, m: int):
        if not isinstance(m, (int, np.integer)) or m < 0:
            raise ValueError("only non-negative integer powers")
        out = Jet.constant(np.ones(self.shape), self.order)
        for _ in range(m):
            out = out * self
        return out

    def conj(self) -> "Jet":
        return Jet(np.conj(self.c), self.order)

    @property
    def real(self) -> "Jet":
        return Jet(self.c.real.astype(complex), self.order)

    @property
    def imag(self) -> "Jet":
        return Jet(self.c.imag.astype(complex), self.order)

    # -- derivatives ---------------------------------------------------
    def du(self) -> "Jet":
        if self.order < 1:
            raise OrderExhaustedError("order exhausted")
        t = _tables(self.order)
        w = t.du_w.reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet(self.c[t.du_src] * w, self.order - 1)

    def dv(self) -> "Jet":
        if self.order < 1:
            raise OrderExhaustedError("order exhausted")
        t = _tables(self.order)
        w = t.dv_w.reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet(self.c[t.dv_src] * w, self.order - 1)

    def dz(self) -> "Jet":
        return 0.5 * (self.du() - 1j * self.dv())

    def dzb(self) -> "Jet":
        return 0.5 * (self.du() + 1j * self.dv())

    def wirtinger(self, p: int, q: int) -> "Jet":
        """Apply (d/dz)^p (d/dzbar)^q."""
        if p + q > self.order:
            raise OrderExhaustedError(
                f"wirtinger({p},{q}) needs order {p + q}, jet has {self.order}"
            )
        out = self
        for _ in range(p):
            out = out.dz()
        for _ in range(q):
            out = out.dzb()
        return out

    # -- elementary functions ------------------------------------------
    def _compose(self, derivs) -> "Jet":
        """f(self) from the Taylor data derivs[m] = f^(m)(a0) / m!."""
        K = self.order
        h = Jet(self.c.copy(), K)
        h.c[0] = 0.0
        out = Jet.constant(derivs[K], K)
        for m in range(K - 1, -1, -1):
            out = out * h + derivs[m]
        return out

    def _check_nonzero(self, eps: float, what: str):
        small = np.abs(self.value) < eps
        if np.any(small):
            raise SingularJetError(
                f"{what} of a jet with |constant term| < {eps:g} "
                f"at {int(small.sum())} batch point(s)"
            )

    def reciprocal(self, eps: float = EPS_DIV) -> "Jet":
        self._check_nonzero(eps, "division")
        a0 = self.value
        inv = 1.0 / a0
        derivs = [inv]
        for _ in range(self.order):
            derivs.append(-derivs[-1] * inv)
        return self._compose(derivs)

    def sqrt(self, eps: float = EPS_DIV) -> "Jet":
        """Principal square root; for real jets the constant term must be > 0."""
        self._check_nonzero(eps, "sqrt")
        a0 = self.value
        if np.all(np.abs(a0.imag) == 0) and np.any(a0.real < 0):
            raise SingularJetError("sqrt of a real jet with negative constant term")
        r = np.sqrt(a0)
        derivs = [r]
        coef = 1.0
        for m in range(1, self.order + 1):
            coef *= (0.5 - (m - 1)) / m
            derivs.append(coef * r / a0**m)
        return self._compose(derivs)

    def exp(self) -> "Jet":
        e = np.exp(self.value)
        return self._compose([e / math.factorial(m) for m in range(self.order + 1)])

    def sin(self) -> "Jet":
        a0 = self.value
        return self._compose(
            [np.sin(a0 + m * np.pi / 2) / math.factorial(m) for m in range(self.order + 1)]
        )

    def cos(self) -> "Jet":
        a0 = self.value
        return self._compose(
            [np.cos(a0 + m * np.pi / 2) / math.factorial(m) for m in range(self.order + 1)]
        )


def _mul(a: np.ndarray, b: np.ndarray, K: int) -> np.ndarray:
    t = _tables(K)
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    out = np.zeros((t.size,) + shape, dtype=complex)
    for i in range(t.size):
        ai = a[i]
        if not ai.any():
            continue
        m = t.prefix[i]
        out[t.targets[i]] += ai * b[:m]
    return out


def where(mask, a: Jet, b: Jet) -> Jet:
    """Pointwise select between two jets using a batch-shaped boolean mask."""
    K = min(a.order, b.order)
    ca, cb = a.truncate(K).c, b.truncate(K).c
    nd = max(ca.ndim, cb.ndim)
    return Jet(np.where(np.asarray(mask), _expand(ca, nd), _expand(cb, nd)), K)


def sqrt(x: Jet, eps: float = EPS_DIV) -> Jet:
    return x.sqrt(eps)


def sin(x: Jet) -> Jet:
    return x.sin()


def cos(x: Jet) -> Jet:
    return x.cos()


def exp(x: Jet) -> Jet:
    return x.exp()


def conj(x: Jet) -> Jet:
    return x.conj()


def wirtinger(x: Jet, p: int, q: int) -> Jet:
    return x.wirtinger(p, q)


def eval0(x: Jet) -> np.ndarray:
    return x.value


_UNARY = {"sqrt": sqrt, "sin": sin, "cos": cos, "exp": exp, "conj": conj}


def jet_arith(op: str, *args):
    """Dispatch a named arithmetic operation (``add``, ``mul``, ``sqrt``, ...)."""
    if op in _UNARY:
        (x,) = args
        return _UNARY[op](x)
    a, b = args
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")
