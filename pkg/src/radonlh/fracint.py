"""Erdelyi-Kober fractional integrals with quadratic kernel and their inverses.

    (I^a_{-,2} chi)(t) = 2/Gamma(a) int_t^inf (r^2 - t^2)^{a-1} chi(r) r dr
    (I^a_{+,2} chi)(r) = 2/Gamma(a) int_0^r  (r^2 - t^2)^{a-1} chi(t) t dt

Both are Riemann-Liouville / Weyl integrals in the variable v = r^2.  The
operand is either a :class:`RadialSamples` or a vectorized callable
``chi(r) -> array`` whose leading axis follows ``r`` (extra trailing axes
are carried along as a batch).  Callables are evaluated exactly at the
quadrature nodes; sampled data are interpolated by a cubic spline in r^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, gamma, log, sqrt
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.special import roots_jacobi, roots_legendre

from . import _cheb
from .errors import DecayTooSlow, GridTooCoarse, NonPositivePoint, OrderTooSmall, TailUnbounded
from .spherical import richardson

TAIL_TOL = 1e-10


@dataclass(frozen=True)
class FractionalOrder:
    alpha: float
    side: str = "minus"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("fractional order must be positive")
        if self.side not in ("minus", "plus"):
            raise ValueError("side must be 'minus' or 'plus'")


@dataclass(frozen=True, eq=False)
class RadialSamples:
    """One-dimensional profile chi(r) on a strictly increasing positive grid.

    ``func``, when given, is the exact evaluator and the samples are only
    a record.  ``decay_rate`` sigma declares |chi(r)| <= C r^-sigma beyond
    the grid; ``limit`` declares chi(r) -> limit as r -> infinity.
    """

    grid: np.ndarray
    values: np.ndarray
    decay_rate: float | None = None
    func: Callable | None = None
    breakpoints: tuple = ()
    limit: float | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or len(grid) < 2:
            raise ValueError("grid must be one-dimensional with at least two points")
        if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing and positive")
        if values.shape[0] != len(grid):
            raise ValueError("values must follow the grid")
        if self.decay_rate is not None and not self.decay_rate > 0:
            raise ValueError("decay rate must be positive")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))

    @classmethod
    def from_function(cls, f, grid, decay_rate=None, breakpoints=(), limit=None) -> "RadialSamples":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(f(grid), dtype=float), decay_rate, f, tuple(breakpoints), limit)

    def _spline(self):
        spl = getattr(self, "_spl", None)
        if spl is None:
            spl = CubicSpline(self.grid**2, self.values, axis=0)
            object.__setattr__(self, "_spl", spl)
        return spl

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(r), dtype=float)
        out = self._spline()(r**2)
        rmax = self.grid[-1]
        beyond = r > rmax
        if np.any(beyond):
            if self.decay_rate is None:
                if self.limit is None:
                    raise GridTooCoarse("evaluation beyond the grid without a declared decay")
                out[beyond] = self.limit
            else:
                scale = (r[beyond] / rmax) ** (-self.decay_rate)
                out[beyond] = self.values[-1] * scale.reshape(scale.shape + (1,) * (self.values.ndim - 1))
        return out


def _as_callable(chi, decay_rate=None, breakpoints=()):
    if isinstance(chi, RadialSamples):
        dr = chi.decay_rate if decay_rate is None else decay_rate
        bp = tuple(chi.breakpoints) + tuple(breakpoints)
        rmax = chi.grid[-1] if chi.func is None else None
        return chi, dr, bp, rmax
    return chi, decay_rate, tuple(breakpoints), None


def _batch_max(a) -> float:
    a = np.abs(np.asarray(a))
    return float(a.max()) if a.size else 0.0


_GL_X, _GL_W = roots_legendre(32)


def _ek_minus(chi, alpha: float, t: float, decay_rate, breakpoints=(), rmax=None, nodes: int = 40, return_error=False):
    """(1/Gamma(a)) int_0^inf s^{a-1} chi(sqrt(s + t^2)) ds, panelled in s."""
    if decay_rate is None or decay_rate <= 2.0 * alpha:
        raise DecayTooSlow(f"decay rate {decay_rate} must exceed 2*alpha = {2 * alpha}")
    t2 = t * t
    cuts = sorted({b * b - t2 for b in breakpoints if b * b - t2 > 0})
    # the first panel scales with t^2 so weights such as r^{1-n} stay resolved near r = t
    s1 = min([1.0, max(t2, 1e-8)] + cuts) if t2 > 0 else min([1.0] + cuts)
    xj, wj = roots_jacobi(nodes, 0.0, alpha - 1.0)
    s = s1 * (1.0 + xj) / 2.0
    vals = chi(np.sqrt(s + t2))
    total = (s1 / 2.0) ** alpha * np.tensordot(wj, vals, axes=(0, 0))
    edges = [s1]
    # grow panels geometrically, stopping at breakpoints and, for sampled data, the grid end
    stops = list(cuts)
    if rmax is not None and rmax * rmax - t2 > s1:
        stops.append(rmax * rmax - t2)
    stops = sorted(x for x in stops if x > s1)
    tail = np.inf
    for _ in range(400):
        a = edges[-1]
        b = 2.0 * a
        if stops and stops[0] <= b * 1.000001:
            b = stops.pop(0)
        sp = a + (b - a) * (_GL_X + 1.0) / 2.0
        rp = np.sqrt(sp + t2)
        vp = chi(rp)
        wts = _GL_W * (b - a) / 2.0 * sp ** (alpha - 1.0)
        total = total + np.tensordot(wts, vp, axes=(0, 0))
        edges.append(b)
        # tail bound 2 C R^{2a - sigma} / ((sigma - 2a) Gamma(a)) with C = sup |chi| r^sigma on the panel
        mag = _batch_max(np.abs(vp).reshape(len(rp), -1).max(axis=1) * rp ** (2.0 * alpha))
        tail = 2.0 * mag / ((decay_rate - 2.0 * alpha) * gamma(alpha))
        past_data = rmax is None or b >= rmax * rmax - t2
        if tail < TAIL_TOL and not stops and past_data and b >= 4.0:
            break
    else:
        raise DecayTooSlow("tail bound did not fall below tolerance")
    total = total / gamma(alpha)
    if return_error:
        return total, tail
    return total


def _ek_plus(chi, alpha: float, r: float, nodes: int = 64):
    """2/Gamma(a) r^{2a} int_0^1 (1 - w^2)^{a-1} chi(r w) w dw, Gauss-Jacobi in w."""
    xj, wj = roots_jacobi(nodes, alpha - 1.0, 0.0)
    w = (1.0 + xj) / 2.0
    vals = np.asarray(chi(r * w))
    g = (1.0 + w) ** (alpha - 1.0) * w
    g = g.reshape(g.shape + (1,) * (vals.ndim - 1))
    integral = 0.5**alpha * np.tensordot(wj, g * vals, axes=(0, 0))
    return 2.0 / gamma(alpha) * r ** (2.0 * alpha) * integral


def ek_integral(chi, order: FractionalOrder, t, *, decay_rate=None, breakpoints=(), return_error=False):
    """Erdelyi-Kober integral I^alpha_{+-,2} of ``chi`` evaluated at ``t``.

    ``t`` may be a scalar or an array.  On the minus side the declared
    decay rate must exceed 2*alpha; with ``return_error`` the tail bound is
    returned alongside the value.
    """
    fn, dr, bp, rmax = _as_callable(chi, decay_rate, breakpoints)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts <= 0):
        raise NonPositivePoint("evaluation point must be positive")
    out, errs = [], []
    for ti in ts:
        if order.side == "minus":
            v, e = _ek_minus(fn, order.alpha, float(ti), dr, bp, rmax, return_error=True)
        else:
            v, e = _ek_plus(fn, order.alpha, float(ti)), 0.0
        out.append(v)
        errs.append(e)
    out = np.array(out)
    if np.ndim(t) == 0:
        out = out[0]
        return (out, errs[0]) if return_error else out
    return (out, np.array(errs)) if return_error else out


# ----------------------------------------------------------------------------
# derivatives
# ----------------------------------------------------------------------------

_CHEB_N = 16


def _stencil(t: float, lo: float | None, hi: float | None, width: float | None):
    h = 0.5 * t if width is None else width
    h = min(h, 0.5)
    if lo is not None:
        h = min(h, t - lo)
    if hi is not None:
        h = min(h, hi - t)
    if h <= 1e-3 * t:
        raise GridTooCoarse("differentiation stencil would leave the grid")
    return h


def _d_power(vals: np.ndarray, r: np.ndarray, m: int, sign: float) -> np.ndarray:
    """Apply (sign * D)^m, D = (1/2r) d/dr, on Chebyshev-Lobatto nodes ``r``."""
    N = len(r) - 1
    Dr = _cheb.diff_matrix(N, r[0], r[-1])
    Dop = sign * Dr / (2.0 * r)[:, None]
    out = vals
    for _ in range(m):
        out = np.tensordot(Dop, out, axes=(1, 0))
    return out


def _ek_derivative_one(fn, n: int, side: str, t: float, decay_rate, breakpoints, rmax, lo, hi, width=None):
    h = _stencil(t, lo, hi, width)
    r = _cheb.lobatto(_CHEB_N, t - h, t + h)
    mid = _CHEB_N // 2
    if n % 2 == 0:
        m = n // 2 - 1
        vals = np.asarray(fn(r))
        return _d_power(vals, r, m, -1.0 if side == "minus" else 1.0)[mid]
    m = (n - 1) // 2
    if side == "minus":
        def weighted(x):
            x = np.asarray(x)
            v = np.asarray(fn(x))
            return v * (x ** (1 - n)).reshape(x.shape + (1,) * (v.ndim - 1))

        dr = None if decay_rate is None else decay_rate + n - 1
        inner = np.array([_ek_minus(weighted, 0.5, rj, dr, breakpoints, rmax) for rj in r])
        inner = inner * (r ** (n - 2)).reshape((-1,) + (1,) * (inner.ndim - 1))
        return t * _d_power(inner, r, m, -1.0)[mid]
    inner = np.array([_ek_plus(fn, 0.5, rj) for rj in r])
    return _d_power(inner, r, m, 1.0)[mid]


def ek_derivative(chi, n: int, side: str, t, *, decay_rate=None, breakpoints=(), width=None):
    """Erdelyi-Kober derivative D^{n/2-1}_{+-,2}, the left inverse of I^{n/2-1}_{+-,2}.

    even n:  minus (-D)^{n/2-1} chi,            plus D^{n/2-1} chi
    odd n:   minus r (-D)^{(n-1)/2} r^{n-2} I^{1/2}_{-,2} r^{1-n} chi
             plus  D^{(n-1)/2} I^{1/2}_{+,2} chi
    with D = (1/2r) d/dr realized by spectral differentiation on a local
    Chebyshev stencil around each evaluation point.
    """
    if n < 3:
        raise ValueError("dimension must be at least 3")
    if side not in ("minus", "plus"):
        raise ValueError("side must be 'minus' or 'plus'")
    fn, dr, bp, rmax = _as_callable(chi, decay_rate, breakpoints)
    lo = hi = None
    if isinstance(chi, RadialSamples) and chi.func is None:
        lo, hi = chi.grid[0], chi.grid[-1]
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts <= 0):
        raise NonPositivePoint("evaluation point must be positive")
    out = np.array([_ek_derivative_one(fn, n, side, float(ti), dr, bp, rmax, lo, hi, width) for ti in ts])
    return out[0] if np.ndim(t) == 0 else out


def d_operator(chi: RadialSamples) -> RadialSamples:
    """D chi = d chi / d(r^2) on the grid of ``chi``.

    Exact callables are differentiated spectrally on local Chebyshev
    stencils; sampled data through the cubic spline in r^2.
    """
    if len(chi.grid) < 8:
        raise GridTooCoarse("at least 8 grid points are required")
    if chi.func is None:
        vals = chi._spline().derivative()(chi.grid**2)
        return RadialSamples(chi.grid, vals, chi.decay_rate)
    out = []
    for r0 in chi.grid:
        h = _stencil(r0, None, None, None)
        r = _cheb.lobatto(_CHEB_N, r0 - h, r0 + h)
        out.append(_d_power(np.asarray(chi.func(r)), r, 1, 1.0)[_CHEB_N // 2])
    return RadialSamples(chi.grid, np.array(out), chi.decay_rate)


# ----------------------------------------------------------------------------
# kappa constants and Marchaud-type integrals
# ----------------------------------------------------------------------------


def kappa(ell: int, n: int) -> float:
    """kappa_ell = int_0^inf (1 - e^{-t})^ell t^{-n/2} dt in closed form."""
    if ell <= n / 2.0 - 1.0:
        raise OrderTooSmall(f"ell={ell} must exceed n/2 - 1 = {n / 2 - 1}")
    h = n / 2.0 - 1.0
    if n % 2:
        s = sum(comb(ell, j) * (-1) ** j * j**h for j in range(1, ell + 1))
        return gamma(1.0 - n / 2.0) * s
    s = sum(comb(ell, j) * (-1) ** j * j**h * log(j) for j in range(1, ell + 1))
    return (-1) ** (n // 2) / factorial(n // 2 - 1) * s


def kappa_numeric(ell: int, n: int) -> float:
    """The defining integral of kappa, by adaptive quadrature (an independent check)."""
    f = lambda t: (-np.expm1(-t)) ** ell * t ** (-n / 2.0)
    a, _ = quad(f, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    b, _ = quad(f, 1.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
    return a + b


def _marchaud_parts(G, ell, n):
    if isinstance(G, RadialSamples):
        lim = G.limit
        rmax = float(G.grid[-1])
    else:
        lim = getattr(G, "limit", None)
        if callable(lim):
            lim = lim()
        rmax = getattr(G, "r_max", None)
    if lim is None:
        raise TailUnbounded("the profile needs a declared limit at infinity")
    if rmax is None:
        rmax = 10.0
    if ell <= n / 2.0 - 1.0:
        raise OrderTooSmall(f"ell={ell} must exceed n/2 - 1 = {n / 2 - 1}")
    return float(np.asarray(lim).ravel()[0]) if np.ndim(lim) else float(lim), float(rmax)


def marchaud_value(G, ell: int, n: int, eps: float, *, panel_nodes: int = 24) -> float:
    """(1/kappa_ell) int_eps^inf [sum_j (-1)^j C(ell,j) G(sqrt(j r))] r^{-n/2} dr.

    ``G`` is a :class:`RadialSamples` with a declared ``limit`` or a callable
    with ``limit`` and ``r_max`` attributes.  Beyond r = r_max^2 every shifted
    term sits at the limit and the tail is integrated in closed form.
    """
    if not eps > 0:
        raise NonPositivePoint("eps must be positive")
    lim, rmax = _marchaud_parts(G, ell, n)
    coef = np.array([comb(ell, j) * (-1) ** j for j in range(ell + 1)], dtype=float)
    roots = np.sqrt(np.arange(ell + 1, dtype=float))
    g0 = float(np.asarray(G(np.array([0.0]))).ravel()[0])

    def delta(w):  # w = sqrt(r)
        rho = np.outer(w, roots[1:]).ravel()
        vals = np.asarray(G(rho), dtype=float).reshape(len(w), ell)
        return coef[0] * g0 + vals @ coef[1:]

    W = max(rmax, 2.0 * sqrt(eps))
    a = sqrt(eps)
    edges = [a]
    while edges[-1] < min(1.0, W):
        edges.append(min(2.0 * edges[-1], min(1.0, W)))
    while edges[-1] < W:
        edges.append(min(edges[-1] + 0.5, W))
    x, wx = roots_legendre(panel_nodes)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        w = lo + (hi - lo) * (x + 1.0) / 2.0
        total += np.sum(wx * (hi - lo) / 2.0 * 2.0 * w ** (1 - n) * delta(w))
    T = W * W
    h = n / 2.0 - 1.0
    total += (g0 - lim) * T ** (-h) / h
    return total / kappa(ell, n)


def marchaud_limit(G, ell: int, n: int, levels: Sequence[int] = (6, 7, 8, 9, 10)) -> float:
    """eps -> 0 limit of :func:`marchaud_value` on eps = 2^-m, Richardson-extrapolated.

    For profiles smooth in r^2 the truncation error expands in powers
    eps^{k + 1 - n/2}, k >= ell, which fixes the extrapolation exponents.
    """
    seq = [marchaud_value(G, ell, n, 2.0 ** (-m)) for m in levels]
    orders = [k + 1 - n / 2.0 for k in range(ell, ell + len(seq))]
    return richardson(seq, 2.0, orders)
