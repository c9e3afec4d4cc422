"""Inversion of the dual transform through the Kelvin-type map nu.

With (A phi)(x) = |x|^{1-n} phi(nu^{-1}(x)), the Radon-John transform of
A phi on (n-2)-planes is a rescaled R* phi:

    Phi(pi) = sigma_{n-2} / (2 |pi|) * R* phi(nu^{-1}(pi)),

so phi is recovered by inverting the (n-2)-plane transform at the point
nu(h).  Two inversions of that transform are provided: a local limit of an
Erdelyi-Kober derivative of the mean value profile, and a Marchaud-type
finite-difference integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

from ._cheb import HalfLineInterpolant
from .errors import ClassViolation, Divergent, OriginPlane
from .fracint import ek_derivative, kappa, marchaud_limit
from .geometry import AffinePlane, Hyperplane, householder_frames, nu_map, ORIGIN_TOL
from .radon_line import sphere_area
from .spherical import richardson, sphere_rule


@dataclass(frozen=True)
class WeightedClassParams:
    """Declared class of phi: weighted L^p (``which='Lp'``) or C_mu (``which='Cmu'``).

    R* phi exists only for 1 <= p < n/(n-2), respectively mu > n-2; anything
    else raises :class:`ClassViolation` on construction.
    """

    n: int
    which: str = "Lp"
    p: float | None = None
    mu: float | None = None

    def __post_init__(self):
        n = self.n
        if self.which == "Lp":
            if self.p is None or not 1.0 <= self.p < n / (n - 2.0):
                raise ClassViolation(f"p={self.p} outside [1, n/(n-2)) = [1, {n / (n - 2.0):g})")
        elif self.which == "Cmu":
            if self.mu is None or not self.mu > n - 2:
                raise ClassViolation(f"mu={self.mu} must exceed n-2 = {n - 2}")
        else:
            raise ValueError("which must be 'Lp' or 'Cmu'")


def phi_p(n: int, p: float, check: bool = True):
    """phi_p(h) = |h|^{1-n} (2 + 1/|h|)^{-n/p} / log(2 + 1/|h|), as phi(theta, t).

    Belongs to the weighted L^p class for every p > 1, but R* phi_p is
    infinite once p >= n/(n-2); with ``check`` that case is rejected here.
    """
    if check:
        WeightedClassParams(n, "Lp", p=p)

    def phi(theta, t):
        a = np.abs(np.asarray(t, dtype=float))
        with np.errstate(divide="ignore", invalid="ignore"):
            s = 2.0 + 1.0 / a
            out = a ** (1.0 - n) * s ** (-n / p) / np.log(s)
        return np.where(a == 0.0, np.inf, out)

    return phi


@dataclass(frozen=True, eq=False)
class SpaceFunction:
    """A function g(x) on R^n minus the origin, vectorized over (..., n)."""

    n: int
    func: Callable

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)


def a_transform(phi, n: int) -> SpaceFunction:
    """(A phi)(x) = |x|^{1-n} phi(h(x/|x|, -1/|x|))."""

    def g(x):
        r = np.linalg.norm(x, axis=-1)
        if np.any(r < ORIGIN_TOL):
            raise OriginPlane("A phi is undefined at the origin")
        theta = x / r[..., None]
        return r ** (1.0 - n) * np.asarray(phi(theta, -1.0 / r), dtype=float)

    return SpaceFunction(n, g)


def space_lp_norm(g: SpaceFunction, p: float, resolution: int = 16, nodes: int = 200) -> float:
    """||g||_p^p over R^n by a sphere rule times a mapped Gauss-Legendre rule in the radius."""
    n = g.n
    dirs, wd = sphere_rule(n, resolution)
    x, wx = roots_legendre(nodes)
    rho = (1.0 + x) / (1.0 - x)
    jac = 2.0 / (1.0 - x) ** 2
    pts = rho[:, None, None] * dirs[None, :, :]
    vals = np.abs(g(pts)) ** p @ wd
    return float(sphere_area(n - 1) * np.sum(wx * jac * rho ** (n - 1) * vals))


def hyperplane_weighted_norm(phi, n: int, p: float, resolution: int = 16, nodes: int = 200) -> float:
    """(sigma_{n-1}/2) int |t|^{(n-1)(p-1)-2} |phi(theta, t)|^p d_*theta dt over the whole cylinder.

    Equals ||A phi||_p^p when both are finite.
    """
    dirs, wd = sphere_rule(n, resolution)
    x, wx = roots_legendre(nodes)
    s = (1.0 + x) / (1.0 - x)
    jac = 2.0 / (1.0 - x) ** 2
    total = 0.0
    for sign in (1.0, -1.0):
        t = sign * s
        vals = np.abs(np.asarray(phi(dirs[None, :, :], t[:, None] * np.ones((1, len(dirs)))), dtype=float)) ** p @ wd
        total += np.sum(wx * jac * s ** ((n - 1) * (p - 1) - 2) * vals)
    return float(sphere_area(n - 1) / 2.0 * total)


def rj_forward(g, plane: AffinePlane, nodes: int = 96, rtol: float = 1e-8) -> float:
    """Integral of g over an (n-2)-plane (polar coordinates in the plane, mapped radius).

    The rule is doubled once; disagreement beyond ``rtol`` means the integral
    is not resolved and raises :class:`Divergent`.
    """
    basis = plane.basis
    d = basis.shape[0]
    if d < 1:
        raise ValueError("the plane must have positive dimension")

    def integrate(N):
        x, wx = roots_legendre(N)
        rho = (1.0 + x) / (1.0 - x)
        jac = 2.0 / (1.0 - x) ** 2
        if d == 1:
            dirs, wd = np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
        else:
            dirs, wd = sphere_rule(d, max(8, N // 8))
            wd = wd * sphere_area(d - 1)
        pts = plane.offset + (rho[:, None, None] * dirs[None, :, :]) @ basis
        vals = np.asarray(g(pts), dtype=float) @ wd
        return float(np.sum(wx * jac * rho ** (d - 1) * vals))

    a, b = integrate(nodes), integrate(2 * nodes)
    if not np.isfinite(b) or abs(a - b) > rtol * max(1.0, abs(b)):
        raise Divergent(f"plane integral not resolved: {a!r} vs {b!r}")
    return b


def nu_lines(basis: np.ndarray, offset: np.ndarray):
    """nu of a batch of (n-2)-planes: line directions and foot points.

    ``basis`` has shape (m, n-2, n) (orthonormal rows), ``offset`` (m, n)
    is orthogonal to them.  The image line is orthogonal to the plane and
    its offset, at the reciprocal distance.
    """
    m, d, n = basis.shape
    r = np.linalg.norm(offset, axis=1)
    if np.any(r < ORIGIN_TOL):
        raise OriginPlane("plane passes through the origin")
    M = np.concatenate([basis, (offset / r[:, None])[:, None, :]], axis=1)  # (m, n-1, n)
    Q, _ = np.linalg.qr(np.transpose(M, (0, 2, 1)), mode="complete")
    omega = Q[:, :, n - 1]
    return omega, -offset / r[:, None] ** 2


def build_phi_batch(f_dual, basis: np.ndarray, offset: np.ndarray) -> np.ndarray:
    """Phi on a batch of (n-2)-planes from the line function f_dual = R* phi."""
    n = basis.shape[2]
    omega, u = nu_lines(basis, offset)
    r = np.linalg.norm(offset, axis=1)
    return sphere_area(n - 2) / (2.0 * r) * np.asarray(f_dual(omega, u), dtype=float)


def build_phi(f_dual, plane: AffinePlane) -> float:
    """Phi(pi) = sigma_{n-2} / (2|pi|) * f_dual(nu^{-1}(pi)) for a single (n-2)-plane."""
    n = plane.dim_ambient
    if plane.dim_plane != n - 2:
        raise ValueError("Phi lives on (n-2)-planes")
    dist = plane.distance()
    if dist < ORIGIN_TOL:
        raise OriginPlane("plane passes through the origin")
    line = nu_map(plane).as_line()
    val = np.asarray(f_dual(line.omega[None, :], line.offset[None, :]), dtype=float)
    return float(sphere_area(n - 2) / (2.0 * dist) * val.reshape(-1)[0])


def haar_rotations(n: int, samples: int, seed: int = 0) -> np.ndarray:
    """Haar-distributed rotations in SO(n) via QR of Gaussian matrices with sign-fixed diagonal."""
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((samples, n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diagonal(R, axis1=1, axis2=2))[:, None, :]
    det = np.linalg.det(Q)
    Q[det < 0, :, 0] *= -1.0
    return Q


@dataclass
class MeanValueProfile:
    """Values of the mean value operator at center x on radii r_j."""

    center: np.ndarray
    radii: np.ndarray
    values: np.ndarray
    method: str
    samples: int = 0
    seed: int | None = None
    stderr: np.ndarray | None = None

    @property
    def value(self) -> float:
        return float(self.values[0])


def _orbit_frames(n: int, method: str, resolution: int, samples: int, seed: int):
    """Frames (basis (K, n-2, n), normal e (K, n), weights (K,)) describing the SO(n) orbit."""
    if method == "quadrature":
        if n != 3:
            raise ValueError("deterministic orbit quadrature is implemented for n = 3")
        dirs, wd = sphere_rule(3, resolution)
        frames = householder_frames(dirs)  # (m, 2, 3)
        psi = 2.0 * np.pi * np.arange(2 * resolution + 1) / (2 * resolution + 1)
        e = np.cos(psi)[None, :, None] * frames[:, None, 0, :] + np.sin(psi)[None, :, None] * frames[:, None, 1, :]
        K = len(dirs) * len(psi)
        basis = np.repeat(dirs[:, None, :], len(psi), axis=1).reshape(K, 1, 3)
        w = np.repeat(wd / len(psi), len(psi))
        return basis, e.reshape(K, 3), w
    G = haar_rotations(n, samples, seed)
    basis = np.transpose(G[:, :, : n - 2], (0, 2, 1))
    return basis, G[:, :, n - 1], np.full(samples, 1.0 / samples)


def rj_meanvalue(Phi, x, r, method: str = "auto", resolution: int = 16, samples: int = 100_000, seed: int = 0, chunk: int = 400_000) -> MeanValueProfile:
    """Mean of Phi over the (n-2)-planes gamma R^{n-2} + x + r gamma e_n, gamma in SO(n).

    ``Phi(basis, offset)`` takes batches of orthonormal bases (K, n-2, n) and
    foot points (K, n).  ``method`` is 'quadrature' (n = 3: sphere rule for
    the plane direction times an azimuth rule), 'haar' (Monte-Carlo with
    seeded rotations, reused across radii) or 'auto'.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rr < 0):
        raise ValueError("radius must be non-negative")
    if method == "auto":
        method = "quadrature" if n == 3 else "haar"
    basis, e, w = _orbit_frames(n, method, resolution, samples, seed)
    K = len(w)
    vals = np.empty(len(rr))
    errs = np.empty(len(rr)) if method == "haar" else None
    for i, ri in enumerate(rr):
        point = x[None, :] + ri * e
        foot = point - np.einsum("kdn,kd->kn", basis, np.einsum("kdn,kn->kd", basis, point))
        phis = np.concatenate([np.asarray(Phi(basis[lo:lo + chunk], foot[lo:lo + chunk]), dtype=float) for lo in range(0, K, chunk)])
        vals[i] = phis @ w
        if errs is not None:
            errs[i] = phis.std(ddof=1) / np.sqrt(K)
    return MeanValueProfile(x, rr, vals, method, K if method == "haar" else 0, seed if method == "haar" else None, errs)


class KelvinInverter:
    """Shared state for inverting R* at many hyperplanes.

    Holds the dual data, the orbit discretization, and a memo of mean value
    profiles keyed by the center nu(h), so the local and Marchaud routes
    reuse the same profile.
    """

    def __init__(self, f_dual, n: int, params: WeightedClassParams | None = None, *, method: str = "auto", resolution: int = 16, samples: int = 20_000, seed: int = 0, nodes: int = 64):
        if params is not None and params.n != n:
            raise ValueError("class parameters declared for a different dimension")
        self.f_dual = f_dual
        self.n = n
        self.params = params
        self.method = method
        self.resolution = resolution
        self.samples = samples
        self.seed = seed
        self.nodes = nodes
        self._memo: dict = {}

    def Phi(self, basis, offset):
        return build_phi_batch(self.f_dual, basis, offset)

    def profile(self, x) -> HalfLineInterpolant:
        x = np.asarray(x, dtype=float)
        key = tuple(np.round(x, 12))
        if key not in self._memo:
            scale = max(1.0, float(x @ x))

            def G(r):
                return rj_meanvalue(self.Phi, x, r, self.method, self.resolution, self.samples, self.seed).values

            self._memo[key] = HalfLineInterpolant(G, N=self.nodes, scale=scale)
        return self._memo[key]

    def _center(self, h: Hyperplane):
        if abs(h.t) < ORIGIN_TOL:
            raise OriginPlane("hyperplane passes through the origin")
        return nu_map(h).as_point(), abs(h.t)

    def local(self, h: Hyperplane, r_schedule: Sequence[float] = (0.4, 0.2, 0.1, 0.05)) -> float:
        x, dist = self._center(h)
        G = self.profile(x)
        n = self.n
        vals = [float(ek_derivative(G, n, "minus", ri, decay_rate=1.0)) for ri in r_schedule]
        lim = richardson(vals, r_schedule[0] / r_schedule[1], [2 * (k + 1) for k in range(len(vals) - 1)])
        return dist ** (1 - n) * pi ** (1.0 - n / 2.0) * lim

    def marchaud(self, h: Hyperplane, ell: int = 1, levels: Sequence[int] = (6, 7, 8, 9, 10)) -> float:
        kappa(ell, self.n)  # OrderTooSmall before any work
        x, dist = self._center(h)
        G = self.profile(x)
        n = self.n
        Gm = _MarchaudProfile(G)
        lim = marchaud_limit(Gm, ell, n, levels)
        return dist ** (1 - n) * pi ** (1.0 - n / 2.0) * lim


class _MarchaudProfile:
    """Adapter giving a tabulated profile the ``limit``/``r_max`` attributes."""

    def __init__(self, G: HalfLineInterpolant, tol: float = 1e-10):
        self.G = G
        self.limit = float(G.limit())
        r = np.linspace(0.0, 60.0, 6001)
        v = np.abs(G(r) - self.limit)
        scale = max(float(v.max()), 1e-300)
        big = np.nonzero(v > tol * scale)[0]
        self.r_max = float(r[min(big[-1] + 1, len(r) - 1)]) if len(big) else 1.0

    def __call__(self, r):
        return self.G(r)


def kelvin_invert(f_dual, h: Hyperplane, n: int | None = None, r_schedule: Sequence[float] = (0.4, 0.2, 0.1, 0.05), params: WeightedClassParams | None = None, inverter: KelvinInverter | None = None, **kw) -> float:
    """phi(h) = |h|^{1-n} pi^{1-n/2} lim_{r->0} D^{n/2-1}_{-,2} G(r), G the mean value profile at nu(h)."""
    if inverter is None:
        inverter = KelvinInverter(f_dual, h.dim_ambient if n is None else n, params, **kw)
    return inverter.local(h, r_schedule)


def kelvin_invert_marchaud(f_dual, h: Hyperplane, ell: int = 1, n: int | None = None, params: WeightedClassParams | None = None, inverter: KelvinInverter | None = None, **kw) -> float:
    """phi(h) = pi^{1-n/2} / (kappa_ell |h|^{n-1}) int_0^inf [sum_j (-1)^j C(ell,j) G(sqrt(j r))] r^{-n/2} dr."""
    n = h.dim_ambient if n is None else n
    kappa(ell, n)
    if inverter is None:
        inverter = KelvinInverter(f_dual, n, params, **kw)
    return inverter.marchaud(h, ell)
