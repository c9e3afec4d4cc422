"""Chebyshev helpers: local spectral differentiation and a half-line interpolant."""

from __future__ import annotations

import numpy as np


def lobatto(N: int, a: float, b: float) -> np.ndarray:
    """N+1 Chebyshev-Lobatto points on [a, b], in increasing order."""
    x = -np.cos(np.pi * np.arange(N + 1) / N)
    return a + (b - a) * (x + 1.0) / 2.0


def diff_matrix(N: int, a: float, b: float) -> np.ndarray:
    """Spectral differentiation matrix on :func:`lobatto` points (Trefethen's cheb)."""
    x = -np.cos(np.pi * np.arange(N + 1) / N)
    c = np.ones(N + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(N + 1)
    X = np.tile(x, (N + 1, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(N + 1))
    D -= np.diag(D.sum(axis=1))
    return D * (2.0 / (b - a))


class HalfLineInterpolant:
    """Chebyshev interpolant of f(r), r >= 0, in the mapped variable of v = r^2.

    v = scale (1 + x) / (1 - x) sends x in (-1, 1) to the half line, so
    functions smooth in r^2 with algebraic or faster decay are resolved with
    a modest number of first-kind nodes.  Values may carry trailing batch
    axes.
    """

    def __init__(self, f, N: int = 96, scale: float = 1.0):
        k = np.arange(N)
        self.x = np.cos(np.pi * (k + 0.5) / N)
        self.scale = float(scale)
        v = self.scale * (1.0 + self.x) / (1.0 - self.x)
        self.nodes = np.sqrt(v)
        vals = np.asarray(f(self.nodes), dtype=float)
        self.values = vals
        T = np.cos(np.outer(np.arange(N), np.pi * (k + 0.5) / N))
        coef = (2.0 / N) * np.tensordot(T, vals, axes=(1, 0))
        coef[0] *= 0.5
        self.coef = coef

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        v = r**2
        x = (v - self.scale) / (v + self.scale)
        # Clenshaw over the leading (degree) axis; result has shape r.shape + batch
        c = self.coef
        xb = x.reshape(x.shape + (1,) * (c.ndim - 1))
        b1 = np.zeros(x.shape + c.shape[1:])
        b2 = np.zeros_like(b1)
        for j in range(len(c) - 1, 0, -1):
            b1, b2 = 2.0 * xb * b1 - b2 + c[j], b1
        return xb * b1 - b2 + c[0]

    def limit(self) -> np.ndarray:
        """Value as r -> infinity (x -> 1)."""
        return self.coef.sum(axis=0)


class IntervalInterpolant:
    """Chebyshev interpolant of f on [a, b] at first-kind nodes; batch axes trail."""

    def __init__(self, f, a: float, b: float, N: int = 48):
        k = np.arange(N)
        x = np.cos(np.pi * (k + 0.5) / N)
        self.a, self.b = float(a), float(b)
        self.nodes = a + (b - a) * (x + 1.0) / 2.0
        vals = np.asarray(f(self.nodes), dtype=float)
        self.values = vals
        T = np.cos(np.outer(k, np.pi * (k + 0.5) / N))
        coef = (2.0 / N) * np.tensordot(T, vals, axes=(1, 0))
        coef[0] *= 0.5
        self.coef = coef

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        x = (2.0 * r - self.a - self.b) / (self.b - self.a)
        c = self.coef
        xb = x.reshape(x.shape + (1,) * (c.ndim - 1))
        b1 = np.zeros(x.shape + c.shape[1:])
        b2 = np.zeros_like(b1)
        for j in range(len(c) - 1, 0, -1):
            b1, b2 = 2.0 * xb * b1 - b2 + c[j], b1
        return xb * b1 - b2 + c[0]
