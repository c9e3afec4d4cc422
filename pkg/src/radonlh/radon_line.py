"""Radon transform of line functions and its inversion on quasi-radial data.

A line is parametrized by a direction omega and the foot point u of the
perpendicular from the origin.  A quasi-radial line function depends on
(omega, |u|) only, and its transform factors as a Funk transform in the
direction times an Erdelyi-Kober integral in the radius:

    R f(theta, t) = pi^{n/2-1} (I^{n/2-1}_{-,2} (x) F) f0 (theta, |t|).

Both factors are diagonal in spherical-harmonic coefficients, so the data
layout here is literally coefficients x radial profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gamma, pi
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi
from scipy.stats import multivariate_t

from ._cheb import HalfLineInterpolant
from .errors import DecayTooSlow, NonPositivePoint, NotEven, OddComponent, UnsupportedDimension
from .fracint import RadialSamples, _ek_minus, ek_derivative
from .spherical import (
    MAX_DIM,
    MIN_DIM,
    SphereGrid,
    sphere_rule,
    funk_multipliers,
    harmonic_basis,
    harmonic_degrees,
    subsphere_nodes,
)
from .geometry import unit


def sphere_area(m: int) -> float:
    """Surface area of the unit sphere S^m in R^{m+1}."""
    return 2.0 * pi ** ((m + 1) / 2.0) / gamma((m + 1) / 2.0)


@lru_cache(maxsize=16)
def _analysis(n: int, L: int):
    """Grid exact to degree 2L, basis (P, nb) and the weighted analysis matrix (nb, P)."""
    if not MIN_DIM <= n <= MAX_DIM:
        raise UnsupportedDimension(f"dimension n={n} outside {MIN_DIM}..{MAX_DIM}")
    nodes, w = sphere_rule(n, max(L, 1))
    grid = SphereGrid(n, nodes, w, max(L, 1))
    Y = harmonic_basis(grid.nodes, n, L)
    A = (Y * grid.weights[:, None]).T
    return grid, Y, A


def _odd_fraction(coeffs: np.ndarray, n: int, L: int) -> float:
    c2 = np.asarray(coeffs) ** 2
    deg = harmonic_degrees(n, L)
    c2 = c2.reshape(-1, len(deg)) if c2.shape[-1] == len(deg) else c2.T.reshape(-1, len(deg))
    tot = float(c2.sum())
    return 0.0 if tot == 0 else float(c2[:, deg % 2 == 1].sum()) / tot


@dataclass(frozen=True, eq=False)
class QuasiRadialFunction:
    """Line function f(omega, u) = f0(omega, |u|).

    Either ``func`` (an elementwise callable ``f0(omega, r)`` broadcasting
    omega of shape (..., n) against r of shape (...)) or a coefficient table
    ``coeffs`` of shape (len(radial_grid), nb) in the orthonormal harmonic
    basis of degree <= L.  ``decay_rate`` bounds |f0| <= C r^-sigma and must
    exceed n - 2 for the transform to converge.
    """

    n: int
    L: int
    decay_rate: float
    func: Callable | None = None
    radial_grid: np.ndarray | None = None
    coeffs: np.ndarray | None = None
    odd_fraction: float = 0.0

    def __post_init__(self):
        if (self.func is None) == (self.coeffs is None):
            raise ValueError("give exactly one of func or coeffs")
        if self.coeffs is not None:
            nb = len(harmonic_degrees(self.n, self.L))
            c = np.asarray(self.coeffs, dtype=float)
            if c.shape != (len(self.radial_grid), nb):
                raise ValueError(f"coefficient table must have shape ({len(self.radial_grid)}, {nb})")
            object.__setattr__(self, "coeffs", c)
            object.__setattr__(self, "radial_grid", np.asarray(self.radial_grid, dtype=float))

    @classmethod
    def from_callable(cls, f0, n: int, L: int = 8, decay_rate: float = 50.0) -> "QuasiRadialFunction":
        return cls(n, L, decay_rate, func=f0)

    def _profile(self) -> RadialSamples:
        prof = getattr(self, "_prof", None)
        if prof is None:
            prof = RadialSamples(self.radial_grid, self.coeffs, self.decay_rate)
            object.__setattr__(self, "_prof", prof)
        return prof

    def coefficients(self, r) -> np.ndarray:
        """Harmonic coefficients at radii ``r``: shape (len(r), nb)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if self.func is None:
            return self._profile()(r)
        grid, _, A = _analysis(self.n, self.L)
        vals = np.asarray(self.func(grid.nodes[None, :, :], r[:, None]), dtype=float)
        return vals @ A.T

    def __call__(self, omega, r) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        r = np.asarray(r, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(omega, r), dtype=float)
        om, rr = np.broadcast_arrays(omega, r[..., None])
        flat_o = om.reshape(-1, self.n)
        flat_r = rr[..., 0].reshape(-1)
        Y = harmonic_basis(flat_o, self.n, self.L)
        c = self._profile()(flat_r)
        return np.sum(Y * c, axis=1).reshape(rr.shape[:-1])

    def line_function(self):
        """f(omega, u) for line samples: u is the foot point, omega the direction."""
        return lambda omega, u: self(omega, np.linalg.norm(u, axis=-1))


@dataclass(frozen=True, eq=False)
class HyperplaneFunction:
    """Function g(theta, t) on hyperplanes {x : <x, theta> = t}.

    Either an elementwise callable ``func(theta, t)`` or a spectral profile:
    harmonic coefficients (degree <= L) as functions of |t|, stored as a
    :class:`HalfLineInterpolant`.  The spectral form is even in t by
    construction.
    """

    n: int
    L: int
    decay_rate: float
    func: Callable | None = None
    profile: HalfLineInterpolant | None = None
    even_in_t: bool = True

    def __post_init__(self):
        if (self.func is None) == (self.profile is None):
            raise ValueError("give exactly one of func or profile")

    @classmethod
    def from_callable(cls, g, n: int, L: int = 8, decay_rate: float = 50.0, even_in_t: bool = True):
        return cls(n, L, decay_rate, func=g, even_in_t=even_in_t)

    def coefficients(self, t) -> np.ndarray:
        """Harmonic coefficients of g(., t): shape (len(t), nb)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.profile is not None:
            return self.profile(np.abs(t))
        grid, _, A = _analysis(self.n, self.L)
        vals = np.asarray(self.func(grid.nodes[None, :, :], t[:, None]), dtype=float)
        return vals @ A.T

    def __call__(self, theta, t) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        t = np.asarray(t, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(theta, t), dtype=float)
        th, tt = np.broadcast_arrays(theta, t[..., None])
        Y = harmonic_basis(th.reshape(-1, self.n), self.n, self.L)
        c = self.profile(np.abs(tt[..., 0].reshape(-1)))
        return np.sum(Y * c, axis=1).reshape(tt.shape[:-1])


def _check_decay(sigma: float, n: int):
    if sigma is None or sigma <= n - 2:
        raise DecayTooSlow(f"decay rate {sigma} must exceed n - 2 = {n - 2}")


def radon_forward_quasiradial(f: QuasiRadialFunction, theta, t, resolution: int = 32):
    """R f at (theta, t) for a quasi-radial f.

    The Funk transform is taken per radius on the great subsphere orthogonal
    to theta, then the Erdelyi-Kober integral of order n/2 - 1 in r at |t|.
    ``theta`` may be a batch (m, n); ``t`` a scalar.
    """
    n = f.n
    _check_decay(f.decay_rate, n)
    theta = np.asarray(theta, dtype=float)
    single = theta.ndim == 1
    poles = np.atleast_2d(theta)
    poles = poles / np.linalg.norm(poles, axis=1, keepdims=True)
    alpha = n / 2.0 - 1.0
    if f.func is not None:
        pts, w = subsphere_nodes(poles, resolution)  # (m, N, n)

        def chi(r):
            r = np.asarray(r)
            vals = f.func(pts[None, :, :, :], r[:, None, None])
            vals = np.broadcast_to(np.asarray(vals, dtype=float), (len(r),) + pts.shape[:2])
            return vals @ w  # (R, m)
    else:
        Y = harmonic_basis(poles, n, f.L) * funk_multipliers(n, f.L)

        def chi(r):
            return f.coefficients(r) @ Y.T

    val = pi**alpha * _ek_minus(chi, alpha, abs(float(t)), f.decay_rate)
    return float(val[0]) if single else val


def radon_forward(f: QuasiRadialFunction, nodes: int = 96, scale: float = 1.0) -> HyperplaneFunction:
    """Transform of a quasi-radial function as a spectral :class:`HyperplaneFunction`.

    Coefficient profiles are computed at the nodes of a half-line Chebyshev
    interpolant in t: Funk multipliers times the Erdelyi-Kober integral of
    each harmonic coefficient of f0.
    """
    n = f.n
    _check_decay(f.decay_rate, n)
    alpha = n / 2.0 - 1.0
    lam = funk_multipliers(n, f.L)

    def profile(t):
        out = np.array([_ek_minus(f.coefficients, alpha, float(ti), f.decay_rate) for ti in np.atleast_1d(t)])
        return pi**alpha * out * lam

    interp = HalfLineInterpolant(profile, N=nodes, scale=scale)
    return HyperplaneFunction(n, f.L, max(f.decay_rate - (n - 2), 1e-3), profile=interp)


def _student(rng, d: int, size: int, df: float):
    """Samples from a standard d-variate Student-t and their densities."""
    prop = multivariate_t(loc=np.zeros(d), shape=np.eye(d), df=df, seed=rng)
    y = np.asarray(prop.rvs(size=size)).reshape(size, d)
    return y, np.exp(np.atleast_1d(prop.logpdf(y))).reshape(size)


def _perp_frames(rng, fixed: list, size: int, n: int) -> np.ndarray:
    """Random orthonormal frames (size, n, n - len(fixed)) of the complement of ``fixed`` columns."""
    M = rng.standard_normal((size, n, n))
    for j, v in enumerate(fixed):
        M[:, :, j] = v
    Q, _ = np.linalg.qr(M)
    return Q[:, :, len(fixed):]


def _uniform_perp(rng, axis: np.ndarray) -> np.ndarray:
    """Uniform unit vectors orthogonal to each row of ``axis`` (shape (N, n))."""
    z = rng.standard_normal(axis.shape)
    z -= np.sum(z * axis, axis=1, keepdims=True) * axis
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _fiber_samples(theta: np.ndarray, rng, df: float):
    """Directions omega in theta-perp and fiber points x in omega-perp cap theta-perp.

    Returns (omega, x, q) where q is the proposal density of x on the
    (n-2)-dimensional fiber.
    """
    N, n = theta.shape
    omega = _uniform_perp(rng, theta)
    frame = _perp_frames(rng, [theta, omega], N, n)
    y, q = _student(rng, n - 2, N, df)
    return omega, np.einsum("nij,nj->ni", frame, y), q


def radon_forward_mc(f, theta, t: float, samples: int = 100_000, seed: int = 0, df: float = 3.0):
    """Monte-Carlo estimate of R f(theta, t) and its standard error.

    ``f(omega, u)`` is a line function evaluated on batches (N, n) of
    directions and foot points.  Directions are uniform on the great
    subsphere orthogonal to theta; the (n-2)-dimensional fiber is sampled
    from a multivariate Student-t proposal with ``df`` degrees of freedom.
    """
    theta = unit(theta)
    rng = np.random.default_rng(seed)
    thetas = np.broadcast_to(theta, (samples, theta.size)).copy()
    omega, x, q = _fiber_samples(thetas, rng, df)
    vals = np.asarray(f(omega, t * theta + x), dtype=float) / q
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))


class _FunkInverter:
    """Maps g(., t) to the coefficients of F^{-1} g(., t), batched over t."""

    def __init__(self, g: HyperplaneFunction):
        self.g = g
        lam = funk_multipliers(g.n, g.L)
        deg = harmonic_degrees(g.n, g.L)
        inv = np.zeros_like(lam)
        even = deg % 2 == 0
        inv[even] = 1.0 / lam[even]
        self.inv = inv

    def __call__(self, t):
        return self.g.coefficients(t) * self.inv


def _check_even(g: HyperplaneFunction, ts: np.ndarray, tol: float = 1e-8):
    if g.func is None:
        return
    grid, _, _ = _analysis(g.n, g.L)
    pos = np.asarray(g.func(grid.nodes[None, :, :], ts[:, None]), dtype=float)
    neg = np.asarray(g.func(grid.nodes[None, :, :], -ts[:, None]), dtype=float)
    scale = max(np.abs(pos).max(), 1e-300)
    if np.abs(pos - neg).max() > tol * scale:
        raise NotEven("hyperplane function is not even in t")


def radon_invert(g: HyperplaneFunction, radial_grid=None, *, odd_tol: float = 1e-8, allow_odd: bool = False) -> QuasiRadialFunction:
    """Recover the quasi-radial f0 with R f = g.

    f0 = pi^{1-n/2} (D^{n/2-1}_{-,2} (x) F^{-1}) g: every harmonic coefficient
    of g(., t) is divided by its Funk multiplier, then the Erdelyi-Kober
    derivative in t is evaluated at the radial grid.  The odd-degree energy
    fraction of g is stored on the result; above ``odd_tol`` it raises
    :class:`OddComponent` unless ``allow_odd``.
    """
    n = g.n
    r = np.linspace(0.1, 4.0, 40) if radial_grid is None else np.asarray(radial_grid, dtype=float)
    if np.any(r <= 0):
        raise NonPositivePoint("radial grid must be positive")
    _check_even(g, r)
    odd = _odd_fraction(g.coefficients(r), n, g.L)
    if odd > odd_tol and not allow_odd:
        raise OddComponent(f"odd-degree energy fraction {odd:.3e} exceeds {odd_tol:g}")
    chi = _FunkInverter(g)
    coeffs = ek_derivative(chi, n, "minus", r, decay_rate=g.decay_rate)
    coeffs = pi ** (1.0 - n / 2.0) * np.asarray(coeffs)
    return QuasiRadialFunction(n, g.L, g.decay_rate + n - 2, radial_grid=r, coeffs=coeffs, odd_fraction=odd)


def radon_radial(f0, k: int, kprime: int, s: float, decay_rate: float | None = None) -> float:
    """R_{k,k'} of a radial function: sigma_{k'-k-1} int_s^inf f0(r) (r^2 - s^2)^{(k'-k)/2-1} r dr.

    Equals pi^a I^a_{-,2} f0 (s) with a = (k' - k)/2.  ``f0`` is a
    :class:`RadialSamples` or a callable with its ``decay_rate`` declared.
    """
    if not 1 <= k < kprime:
        raise ValueError("need 1 <= k < k'")
    if s < 0:
        raise NonPositivePoint("distance must be non-negative")
    a = (kprime - k) / 2.0
    sigma = f0.decay_rate if isinstance(f0, RadialSamples) else decay_rate
    bp = f0.breakpoints if isinstance(f0, RadialSamples) else ()
    rmax = f0.grid[-1] if isinstance(f0, RadialSamples) and f0.func is None else None
    return float(pi**a * _ek_minus(f0, a, float(s), sigma, bp, rmax))


def dual_radial(phi0, k: int, kprime: int, n: int, r: float, nodes: int = 64) -> float:
    """Dual of :func:`radon_radial` for radial phi0 on k'-planes, evaluated on a k-plane at distance r."""
    if not 1 <= k < kprime <= n - 1:
        raise ValueError("need 1 <= k < k' <= n - 1")
    if r <= 0:
        raise NonPositivePoint("distance must be positive")
    a = (kprime - k) / 2.0
    const = sphere_area(kprime - k - 1) * sphere_area(n - kprime - 1) / sphere_area(n - k - 1)
    xj, wj = roots_jacobi(nodes, a - 1.0, 0.0)
    w = (1.0 + xj) / 2.0
    vals = np.asarray(phi0(r * w), dtype=float)
    integrand = (1.0 + w) ** (a - 1.0) * w ** (n - kprime - 1) * vals
    # the powers of r cancel exactly after s = r w
    return float(const * 0.5**a * np.dot(wj, integrand))
