"""Quadrature on spheres, real spherical harmonics and the Funk transform.

All measures are probability measures: grid weights sum to one, and the
Funk transform averages over great subspheres.  Spherical harmonics are
built by the classical Gegenbauer recursion over the last coordinate, so
any dimension works without tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.special import roots_jacobi

from .errors import DegreeOverflow, OddComponent, UnsupportedDimension
from .geometry import householder_frames, unit

MIN_DIM, MAX_DIM = 3, 6


def gegenbauer(kmax: int, lam: float, x) -> np.ndarray:
    """Values C_k^lam(x) for k = 0..kmax by the three-term recurrence.

    Returns an array of shape ``(kmax + 1,) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * lam * x
    for k in range(1, kmax):
        out[k + 1] = (2.0 * (k + lam) * x * out[k] - (k + 2.0 * lam - 1.0) * out[k - 1]) / (k + 1)
    return out


@lru_cache(maxsize=64)
def _sphere_rule(m: int, L: int):
    """Product rule on S^{m-1} in R^m, exact for polynomials of degree <= 2L.

    An even number of circle points keeps the node set antipodally
    symmetric, so even functions never leak into odd coefficients.
    """
    if m == 2:
        N = 2 * L + 2
        # half-step offset keeps nodes off the coordinate axes
        a = 2.0 * np.pi * (np.arange(N) + 0.5) / N
        nodes = np.column_stack([np.cos(a), np.sin(a)])
        weights = np.full(N, 1.0 / N)
    else:
        b = (m - 3) / 2.0
        z, wz = roots_jacobi(L + 1, b, b)
        wz = wz / wz.sum()
        sub, wsub = _sphere_rule(m - 1, L)
        s = np.sqrt(np.clip(1.0 - z**2, 0.0, None))
        nodes = np.concatenate(
            [np.column_stack([si * sub, np.full(len(sub), zi)]) for zi, si in zip(z, s)]
        )
        weights = np.concatenate([wi * wsub for wi in wz])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def sphere_rule(m: int, L: int):
    """Nodes and probability weights on S^{m-1} exact to degree 2L (any m >= 2)."""
    if m < 2:
        raise UnsupportedDimension("need at least a circle")
    return _sphere_rule(int(m), int(L))


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature grid for the normalized surface measure on S^{n-1}."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    degree: int  # integrates all harmonics up to degree 2*degree

    def integrate(self, values) -> np.ndarray:
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def __len__(self):
        return len(self.weights)


def build_grid(n: int, resolution: int) -> SphereGrid:
    if not MIN_DIM <= n <= MAX_DIM:
        raise UnsupportedDimension(f"dimension n={n} outside {MIN_DIM}..{MAX_DIM}")
    if resolution < 4:
        raise ValueError("grid resolution must be at least 4")
    nodes, weights = sphere_rule(n, resolution)
    return SphereGrid(n, nodes, weights, resolution)


@dataclass(frozen=True)
class SubsphereQuadrature:
    """Probability measure on the great subsphere S^{n-1} cap pole-perp."""

    pole: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray


def subsphere_quadrature(pole, resolution: int = 32) -> SubsphereQuadrature:
    pole = unit(pole)
    n = pole.size
    ref, w = sphere_rule(n - 1, resolution)
    frame = householder_frames(pole[None, :])[0]
    return SubsphereQuadrature(pole, ref @ frame, w)


def subsphere_nodes(poles: np.ndarray, resolution: int):
    """Batched subsphere nodes: shape (m, N, n), with the shared weights (N,)."""
    poles = np.atleast_2d(poles)
    n = poles.shape[1]
    ref, w = sphere_rule(n - 1, resolution)
    frames = householder_frames(poles)
    return np.einsum("jk,mkn->mjn", ref, frames), w


# ----------------------------------------------------------------------------
# spherical harmonics
# ----------------------------------------------------------------------------


def _hom_harmonics(X: np.ndarray, L: int):
    """Unnormalized homogeneous harmonics on R^m of degree <= L, as (degree, values)."""
    m = X.shape[1]
    if m == 2:
        z = X[:, 0] + 1j * X[:, 1]
        out = [(0, np.ones(len(X)))]
        p = np.ones(len(X), dtype=complex)
        for k in range(1, L + 1):
            p = p * z
            out.append((k, p.real.copy()))
            out.append((k, p.imag.copy()))
        return out
    inner = _hom_harmonics(X[:, : m - 1], L)
    rho = np.linalg.norm(X, axis=1)
    safe = rho > 0
    s = np.where(safe, X[:, m - 1] / np.where(safe, rho, 1.0), 0.0)
    out = []
    for j, Yj in inner:
        lam = j + (m - 2) / 2.0
        Cv = gegenbauer(L - j, lam, s)
        rpow = np.ones_like(rho)
        for d in range(0, L - j + 1):
            out.append((j + d, rpow * Cv[d] * Yj))
            rpow = rpow * rho
    return out


@lru_cache(maxsize=32)
def _harmonic_norms(n: int, L: int):
    nodes, w = sphere_rule(n, L)
    terms = _hom_harmonics(np.asarray(nodes), L)
    degrees = np.array([d for d, _ in terms])
    order = np.argsort(degrees, kind="stable")
    vals = np.array([v for _, v in terms])[order]
    norms = np.sqrt(vals**2 @ w)
    return degrees[order], order, norms


def harmonic_degrees(n: int, L: int) -> np.ndarray:
    return _harmonic_norms(n, L)[0]


def harmonic_basis(points, n: int, L: int) -> np.ndarray:
    """Orthonormal real harmonics of degree <= L at ``points``; shape (P, nb).

    Orthonormal with respect to the probability measure on S^{n-1}; columns
    are sorted by degree (see :func:`harmonic_degrees`).
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    degrees, order, norms = _harmonic_norms(n, L)
    terms = _hom_harmonics(X, L)
    vals = np.array([v for _, v in terms])[order]
    return (vals / norms[:, None]).T


def funk_multiplier(k: int, n: int) -> float:
    """Eigenvalue of the Funk transform on degree-k harmonics of S^{n-1}."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k % 2:
        return 0.0
    lam = (n - 2) / 2.0
    vals = gegenbauer(k, lam, np.array([0.0, 1.0]))[k]
    return float(vals[0] / vals[1])


def funk_multipliers(n: int, L: int) -> np.ndarray:
    """Multipliers for every basis column of :func:`harmonic_basis` (n, L)."""
    table = np.array([funk_multiplier(k, n) for k in range(L + 1)])
    return table[harmonic_degrees(n, L)]


@dataclass(frozen=True)
class HarmonicExpansion:
    """Band-limited function on S^{n-1}: coefficients in the orthonormal basis."""

    n: int
    L: int
    coeffs: np.ndarray

    def __call__(self, points) -> np.ndarray:
        return harmonic_basis(points, self.n, self.L) @ self.coeffs

    @property
    def degrees(self) -> np.ndarray:
        return harmonic_degrees(self.n, self.L)

    def energy_by_degree(self) -> np.ndarray:
        c2 = np.asarray(self.coeffs) ** 2
        if c2.ndim > 1:
            c2 = c2.sum(axis=tuple(range(1, c2.ndim)))
        return np.bincount(self.degrees, weights=c2, minlength=self.L + 1)


@dataclass(frozen=True)
class SphereFunction:
    """Samples of a function on the nodes of a :class:`SphereGrid`.

    Calling it evaluates the band-limited interpolant (harmonics up to the
    grid degree), which reproduces the samples for band-limited input.
    """

    grid: SphereGrid
    samples: np.ndarray
    _expansion: list = field(default_factory=list, repr=False, compare=False)

    @classmethod
    def from_callable(cls, f, grid: SphereGrid) -> "SphereFunction":
        return cls(grid, np.asarray(f(grid.nodes), dtype=float))

    @property
    def n(self) -> int:
        return self.grid.n

    def expansion(self) -> HarmonicExpansion:
        if not self._expansion:
            Y = harmonic_basis(self.grid.nodes, self.n, self.grid.degree)
            self._expansion.append(HarmonicExpansion(self.n, self.grid.degree, Y.T @ (self.grid.weights * self.samples)))
        return self._expansion[0]

    def __call__(self, points) -> np.ndarray:
        return self.expansion()(points)


# ----------------------------------------------------------------------------
# Funk transform and inverses
# ----------------------------------------------------------------------------


def funk_forward(f, theta, resolution: int = 32):
    """Average of ``f`` over the great subsphere orthogonal to ``theta``.

    ``f`` is any vectorized callable on points of shape (N, n).  ``theta``
    may be a single unit vector or a batch of shape (m, n).
    """
    theta = np.asarray(theta, dtype=float)
    single = theta.ndim == 1
    poles = np.atleast_2d(theta)
    poles = poles / np.linalg.norm(poles, axis=1, keepdims=True)
    pts, w = subsphere_nodes(poles, resolution)
    m, N, n = pts.shape
    vals = np.asarray(f(pts.reshape(m * N, n)), dtype=float).reshape(m, N)
    out = vals @ w
    return float(out[0]) if single else out


def _project(samples: np.ndarray, grid: SphereGrid, L: int):
    """Harmonic coefficients (nb, ...) of grid samples (N, ...), plus residual energy."""
    if grid.degree < L:
        raise ValueError("grid is not exact to degree 2L")
    Y = harmonic_basis(grid.nodes, grid.n, L)
    S = np.asarray(samples, dtype=float)
    wS = grid.weights.reshape((-1,) + (1,) * (S.ndim - 1)) * S
    coeffs = np.tensordot(Y, wS, axes=(0, 0))
    total = np.tensordot(grid.weights, S**2, axes=(0, 0))
    return coeffs, total


def _check_spectrum(coeffs, total, degrees, odd_tol, overflow_tol):
    c2 = coeffs**2
    tot = float(np.sum(total))
    if tot <= 0.0:
        return
    odd = float(np.sum(c2[degrees % 2 == 1]))
    if odd > odd_tol * tot:
        raise OddComponent(f"odd-degree energy fraction {odd / tot:.3e} exceeds {odd_tol:g}")
    resid = tot - float(np.sum(c2))
    if resid > overflow_tol * tot:
        raise DegreeOverflow(f"energy fraction above the cutoff {resid / tot:.3e} exceeds {overflow_tol:g}")


def funk_inverse_coeffs(samples, grid: SphereGrid, L: int, eps: float = 0.0, odd_tol: float = 1e-8, overflow_tol: float = 1e-6):
    """Coefficients of F^{-1} applied to grid samples; batch axes trail the node axis."""
    coeffs, total = _project(samples, grid, L)
    degrees = harmonic_degrees(grid.n, L)
    _check_spectrum(coeffs, total, degrees, odd_tol, overflow_tol)
    lam = funk_multipliers(grid.n, L)
    even = degrees % 2 == 0
    inv = np.zeros_like(lam)
    inv[even] = lam[even] / (lam[even] ** 2 + eps)
    return coeffs * inv.reshape((-1,) + (1,) * (coeffs.ndim - 1))


def funk_inverse_spectral(g, L: int, *, grid: SphereGrid | None = None, eps: float = 0.0, odd_tol: float = 1e-8, overflow_tol: float = 1e-6) -> HarmonicExpansion:
    """Invert the Funk transform by dividing even-degree coefficients by lambda_k.

    ``g`` is a :class:`SphereFunction`, or a callable together with ``grid``.
    ``eps`` > 0 replaces 1/lambda by lambda/(lambda^2 + eps).
    """
    if isinstance(g, SphereFunction):
        if grid is None:
            grid = g.grid
        samples = g.samples if grid is g.grid else g(grid.nodes)
    else:
        if grid is None:
            raise ValueError("a grid is required for callable input")
        samples = np.asarray(g(grid.nodes), dtype=float)
    return HarmonicExpansion(grid.n, L, funk_inverse_coeffs(samples, grid, L, eps, odd_tol, overflow_tol))


def richardson(values, ratio: float = 2.0, orders=None) -> float:
    """Extrapolate a sequence computed at steps h, h/ratio, ... to h -> 0.

    ``orders`` are the exponents of the error expansion (default 1, 2, ...).
    """
    T = [float(v) for v in values]
    if orders is None:
        orders = range(1, len(T))
    orders = list(orders)
    for j in range(1, len(T)):
        f = ratio ** orders[j - 1]
        T = [(f * T[i + 1] - T[i]) / (f - 1.0) for i in range(len(T) - 1)]
    return T[0]


def funk_inverse_abel(g, omega, *, resolution: int = 32, nodes: int = 48, levels=(4, 5, 6, 7)) -> float:
    """Inverse Funk transform at ``omega`` by the Abel-type limit formula.

    The spherical mean Phi(s) of ``g`` on the small sphere at height
    sqrt(1 - s^2) above ``omega`` enters a weighted Abel integral A(t); its
    (d/d t^2)^{n-2} derivative is taken spectrally on t^2 in [1/4, 1] and the
    t -> 1 limit is Richardson-extrapolated from t = 1 - 2^-m.
    Only n = 3, 4 are supported.
    """
    omega = unit(omega)
    n = omega.size
    if n not in (3, 4):
        raise UnsupportedDimension("the Abel-type inverse is provided for n = 3, 4")
    sub, wsub = subsphere_nodes(omega[None, :], resolution)
    sub = sub[0]

    def spherical_mean(s):
        s = np.asarray(s, dtype=float)
        c = np.sqrt(np.clip(1.0 - s**2, 0.0, None))
        pts = s[:, None, None] * sub[None, :, :] + c[:, None, None] * omega[None, None, :]
        vals = np.asarray(g(pts.reshape(-1, n)), dtype=float).reshape(len(s), -1)
        return vals @ wsub

    a = n / 2.0 - 2.0
    b = (n - 3) / 2.0
    x, wx = roots_jacobi(nodes, b, a)
    q = (1.0 + x) / 2.0
    wq = wx * 2.0 ** (-a - b - 1.0)
    # 2^{n-2}/(n-3)! makes the operator reproduce constants (see module notes)
    const = 2.0 ** (n - 2) / float(np.prod(np.arange(1, n - 2)))

    def abel(v):
        t = np.sqrt(v)
        means = spherical_mean(np.outer(t, np.sqrt(1.0 - q)).ravel()).reshape(len(t), len(q))
        return const * t ** (2 * a + n - 1) / 2.0 * (means @ wq)

    v0 = 0.25
    deg = 28
    k = np.arange(deg + 1)
    xc = np.cos(np.pi * (k + 0.5) / (deg + 1))
    vc = v0 + (1.0 - v0) * (xc + 1.0) / 2.0
    series = C.chebfit(xc, abel(vc), deg)
    dseries = C.chebder(series, n - 2, scl=2.0 / (1.0 - v0))
    h = [2.0 ** (-m) for m in levels]
    seq = [C.chebval(((1.0 - hi) ** 2 - v0) * 2.0 / (1.0 - v0) - 1.0, dseries) for hi in h]
    return richardson(seq)
