"""Minkowski linear algebra on R^{n+1,1} and its complexification.

Vectors are plain numpy arrays whose last axis holds the n+2 coordinates,
index 0 being the timelike one, or :class:`~lightcone.jet.Jet` objects whose
last batch axis holds them.  The form is bilinear, never Hermitian: pass
``np.conj(b)`` explicitly when a Hermitian pairing is meant.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .jet import Jet


class DimensionMismatch(ValueError):
    pass


class FrameError(ValueError):
    """A frame {Y, Yz, Yzb, N} violates its Gram relations."""


def metric(dim: int) -> np.ndarray:
    """The form matrix diag(-1, 1, ..., 1) of size ``dim``."""
    eta = np.eye(dim)
    eta[0, 0] = -1.0
    return eta


def _dim(x) -> int:
    return x.shape[-1]


def minkowski_inner(a, b):
    """Bilinear pairing <a, b> = -a0 b0 + sum_i a_i b_i.

    Works for numpy arrays (real or complex) and for jets; the result has
    the broadcast batch shape of the inputs.
    """
    if _dim(a) != _dim(b):
        raise DimensionMismatch(f"ambient dimensions differ: {_dim(a)} vs {_dim(b)}")
    if isinstance(a, Jet) or isinstance(b, Jet):
        if not isinstance(a, Jet):
            a, b = b, a
        p = a * b
        return Jet(p.c[..., 1:].sum(axis=-1) - p.c[..., 0], p.order)
    a = np.asarray(a)
    b = np.asarray(b)
    return np.sum(a[..., 1:] * b[..., 1:], axis=-1) - a[..., 0] * b[..., 0]


inner = minkowski_inner


def apply(T: np.ndarray, x):
    """Apply the linear map ``T`` to a vector (array or jet)."""
    if isinstance(x, Jet):
        return Jet(x.c @ T.T, x.order)
    return np.asarray(x) @ T.T


@dataclass(frozen=True)
class Bivector:
    """A sum of wedge products a ^ b, stored as factor pairs.

    Factors may be arrays or jets; pairings are computed termwise, so the
    antisymmetry a ^ b = -(b ^ a) holds for every operation here.
    """

    terms: tuple

    @classmethod
    def wedge(cls, a, b) -> "Bivector":
        return cls(((a, b),))

    def __add__(self, other: "Bivector") -> "Bivector":
        return Bivector(self.terms + other.terms)

    def __neg__(self) -> "Bivector":
        return Bivector(tuple((-a, b) for a, b in self.terms))

    def __sub__(self, other: "Bivector") -> "Bivector":
        return self + (-other)

    def scale(self, c) -> "Bivector":
        return Bivector(tuple((c * a, b) for a, b in self.terms))


def wedge(a, b) -> Bivector:
    return Bivector.wedge(a, b)


def wedge_inner(p: Bivector, q: Bivector):
    """<a^b, c^d> = <a,c><b,d> - <a,d><b,c>, extended bilinearly."""
    total = 0
    for a, b in p.terms:
        for c, d in q.terms:
            total = total + (inner(a, c) * inner(b, d) - inner(a, d) * inner(b, c))
    return total


def gram_determinant(vectors_a, vectors_b):
    """Pairing of two k-blades: det(<a_i, b_j>), batched over points."""
    k = len(vectors_a)
    G = np.empty(np.broadcast_shapes(*(np.shape(v)[:-1] for v in vectors_a + vectors_b)) + (k, k),
                 dtype=complex)
    for i, a in enumerate(vectors_a):
        for j, b in enumerate(vectors_b):
            G[..., i, j] = minkowski_inner(a, b)
    return np.linalg.det(G)


def random_lorentz(seed: int, n: int, scale: float = 0.4) -> np.ndarray:
    """A deterministic element of the identity component of O(n+1, 1).

    Seed 0 gives the identity.  Otherwise the exponential of a random
    generator X = eta K with K antisymmetric, so X is skew for the form and
    exp(X) preserves it, the time orientation and the orientation.
    """
    dim = n + 2
    if seed == 0:
        return np.eye(dim)
    rng = np.random.default_rng(seed)
    K = rng.normal(scale=scale, size=(dim, dim))
    K = K - K.T
    return expm(metric(dim) @ K)


def is_forward_null(x, tol: float = 1e-12) -> np.ndarray:
    x = np.asarray(x)
    scale = np.maximum(1.0, np.abs(x[..., 0]) ** 2)
    return (np.abs(minkowski_inner(x, x)) <= tol * scale) & (x[..., 0].real > 0)


def frame_gram_residual(Y, Yz, Yzb, N) -> float:
    """Largest violation of the canonical-frame Gram relations (values only)."""
    val = [v.value if isinstance(v, Jet) else np.asarray(v) for v in (Y, Yz, Yzb, N)]
    Y, Yz, Yzb, N = val
    res = [
        minkowski_inner(Y, Y),
        minkowski_inner(N, N),
        minkowski_inner(Yz, Yz),
        minkowski_inner(Y, N) + 1.0,
        minkowski_inner(Yz, Yzb) - 0.5,
        minkowski_inner(N, Yz),
        minkowski_inner(Y, Yz),
    ]
    return float(max(np.max(np.abs(r)) for r in res))


def dual_frame_projector(frame, X, check: bool = True, tol: float = 1e-9):
    """Split X into its parts along V = span{Y, Yz, Yzb, N} and V-perp.

    ``frame`` is anything with attributes ``Y, Yz, Yzb, N`` or a 4-tuple.
    Uses the dual basis of the canonical frame:
    tan = -<X,N> Y - <X,Y> N + 2<X,Yzb> Yz + 2<X,Yz> Yzb.
    """
    if isinstance(frame, tuple):
        Y, Yz, Yzb, N = frame
    else:
        Y, Yz, Yzb, N = frame.Y, frame.Yz, frame.Yzb, frame.N
    if check:
        r = frame_gram_residual(Y, Yz, Yzb, N)
        if r > tol:
            raise FrameError(f"frame Gram residual {r:.3e} exceeds {tol:g}")
    tan = (
        -_expand_last(inner(X, N)) * Y
        - _expand_last(inner(X, Y)) * N
        + 2 * _expand_last(inner(X, Yzb)) * Yz
        + 2 * _expand_last(inner(X, Yz)) * Yzb
    )
    return tan, X - tan


def _expand_last(s):
    """Give a scalar field a trailing unit axis so it scales vectors."""
    if isinstance(s, Jet):
        return s[..., None]
    return np.asarray(s)[..., None]


def scal(s, vec):
    """Multiply a vector field by a scalar field with matching batch shape."""
    return _expand_last(s) * vec
