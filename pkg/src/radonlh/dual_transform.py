"""Dual transform R* of hyperplane functions and its inversions.

R* phi(omega, u) averages phi over the hyperplanes containing the line
(omega, u) with respect to the probability measure on the great subsphere
of normals orthogonal to omega.  Two inversions are provided: one for
functions even in t, through cluster means and the plus-side
Erdelyi-Kober derivative, and a pointwise one through the redundant
point-parametrized dual R1*.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma, pi, sqrt

import numpy as np
from scipy.special import roots_jacobi

from ._cheb import IntervalInterpolant
from .errors import Divergent, NonPositivePoint, NotEven
from .fracint import ek_derivative
from .geometry import unit
from .radon_line import (
    HyperplaneFunction,
    QuasiRadialFunction,
    _analysis,
    _fiber_samples,
    _perp_frames,
    _student,
    _uniform_perp,
)
from .spherical import funk_inverse_coeffs, harmonic_basis, harmonic_degrees, subsphere_nodes

_PERP_TOL = 1e-12


def _as_rows(a, n=None) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if n is not None and a.shape[1] != n:
        raise ValueError(f"expected vectors of length {n}")
    return a


def dual_batch(phi, omegas, us, resolution: int = 64, chunk: int = 2_000_000) -> np.ndarray:
    """R* phi on a batch of lines (omegas[i], us[i]) at a fixed subsphere resolution."""
    omegas = _as_rows(omegas)
    us = _as_rows(us, omegas.shape[1])
    omegas = omegas / np.linalg.norm(omegas, axis=1, keepdims=True)
    m = len(omegas)
    out = np.empty(m)
    pts0, w = subsphere_nodes(omegas[:1], resolution)
    step = max(1, chunk // len(w))
    for lo in range(0, m, step):
        hi = min(m, lo + step)
        pts, _ = subsphere_nodes(omegas[lo:hi], resolution)
        t = np.einsum("mjn,mn->mj", pts, us[lo:hi])
        out[lo:hi] = np.asarray(phi(pts, t), dtype=float) @ w
    return out


def dual_apply_sequence(phi, omega, u, resolution: int = 64, doublings: int = 4) -> np.ndarray:
    """Quadrature values of R* phi(omega, u) at resolution * 2^j, j = 0..doublings."""
    omega = unit(omega)
    u = np.asarray(u, dtype=float)
    if abs(float(omega @ u)) > _PERP_TOL * max(1.0, np.linalg.norm(u)):
        raise ValueError("u must be orthogonal to omega")
    return np.array([dual_batch(phi, omega, u, resolution * 2**j)[0] for j in range(doublings + 1)])


def dual_apply(phi, omega, u, resolution: int = 64, rtol: float = 1e-6, max_doublings: int = 5) -> float:
    """R* phi at the line (omega, u), u orthogonal to omega.

    The subsphere rule is refined by doubling its resolution until two
    consecutive values agree to ``rtol`` (relative, floored at 1); if that
    never happens within ``max_doublings`` the sequence is declared
    :class:`Divergent`.  ``phi`` is any elementwise callable phi(theta, t),
    e.g. a :class:`HyperplaneFunction`.
    """
    omega = unit(omega)
    u = np.asarray(u, dtype=float)
    if abs(float(omega @ u)) > _PERP_TOL * max(1.0, np.linalg.norm(u)):
        raise ValueError("u must be orthogonal to omega")
    prev = dual_batch(phi, omega, u, resolution)[0]
    res = resolution
    for _ in range(max_doublings):
        res *= 2
        cur = dual_batch(phi, omega, u, res)[0]
        if not np.isfinite(cur):
            break
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return float(cur)
        prev = cur
    raise Divergent(f"dual quadrature did not settle; last values {prev!r} at resolution {res}")


def dual_function(phi, resolution: int = 64, offset_scale: float | None = 1.0, max_level: int = 8):
    """R* phi as a vectorized line function f(omega, u).

    The integrand phi(theta, theta . u) varies on an angular scale
    proportional to 1/|u|, so with ``offset_scale`` set the resolution is
    doubled for every doubling of |u| beyond ``offset_scale`` (at most
    ``max_level`` times).  ``offset_scale=None`` keeps it fixed.
    """

    def f(omega, u):
        omega = np.asarray(omega, dtype=float)
        shape = omega.shape[:-1]
        n = omega.shape[-1]
        om = omega.reshape(-1, n)
        uu = np.broadcast_to(np.asarray(u, dtype=float), omega.shape).reshape(-1, n)
        if offset_scale is None:
            return dual_batch(phi, om, uu, resolution).reshape(shape)
        size = np.linalg.norm(uu, axis=1) / offset_scale
        level = np.clip(np.ceil(np.log2(np.maximum(size, 1.0))), 0, max_level).astype(int)
        out = np.empty(len(om))
        for lev in np.unique(level):
            sel = level == lev
            out[sel] = dual_batch(phi, om[sel], uu[sel], resolution * 2**lev)
        return out.reshape(shape)

    return f


def dual_r1(phi, omega, x, resolution: int = 64) -> float:
    """R1* phi(omega, x): the average of phi over hyperplanes through the line omega + x.

    The normal theta ranges over the subsphere orthogonal to omega and the
    offset is theta . x, so the omega-component of x never enters.
    """
    omega = unit(omega)
    x = np.asarray(x, dtype=float)
    pts, w = subsphere_nodes(omega[None, :], resolution)
    pts = pts[0]
    return float(np.asarray(phi(pts, pts @ x), dtype=float) @ w)


def dual_r1_function(phi, resolution: int = 64):
    """Vectorized R1* phi: f(omega, x) for batches of shape (..., n)."""

    def f(omega, x):
        omega = np.asarray(omega, dtype=float)
        shape = omega.shape[:-1]
        n = omega.shape[-1]
        xx = np.broadcast_to(np.asarray(x, dtype=float), omega.shape).reshape(-1, n)
        om = omega.reshape(-1, n)
        om = om / np.linalg.norm(om, axis=1, keepdims=True)
        pts, w = subsphere_nodes(om, resolution)
        t = np.einsum("mjn,mn->mj", pts, xx)
        return (np.asarray(phi(pts, t), dtype=float) @ w).reshape(shape)

    return f


def cluster_mean(f, omega, r, resolution: int = 32):
    """Mean of the line function f over the cluster of lines parallel to omega at distance r.

    ``f(omega, u)`` takes batches of directions and foot points.  ``r`` may
    be a scalar or an array; the average over the unit sphere of
    omega-perp uses the deterministic subsphere rule.
    """
    omega = unit(omega)
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rr <= 0):
        raise NonPositivePoint("cluster radius must be positive")
    pts, w = subsphere_nodes(omega[None, :], resolution)
    v = pts[0]
    u = rr[:, None, None] * v[None, :, :]
    om = np.broadcast_to(omega, u.shape)
    vals = np.asarray(f(om, u), dtype=float) @ w
    return float(vals[0]) if np.ndim(r) == 0 else vals


def cluster_mean_formula(phi, omega, r, n: int, resolution: int = 32, nodes: int = 64):
    """(c / r^{n-3}) int_0^r (r^2 - t^2)^{(n-4)/2} F[phi(., t)](omega) dt, c = 2 sigma_{n-3}/sigma_{n-2}.

    Closed-form reference for the cluster mean of R* phi when phi is even.
    """
    omega = unit(omega)
    pts, w = subsphere_nodes(omega[None, :], resolution)
    pts = pts[0]
    a = (n - 4) / 2.0
    c = 2.0 * gamma((n - 1) / 2.0) / (sqrt(pi) * gamma(n / 2.0 - 1.0))
    xj, wj = roots_jacobi(nodes, a, 0.0)
    s = (1.0 + xj) / 2.0  # t = r s, (r^2 - t^2)^a = r^{2a}(1-s)^a(1+s)^a
    out = []
    for ri in np.atleast_1d(r):
        tt = ri * s
        funk = np.asarray(phi(pts[None, :, :], np.broadcast_to(tt[:, None], (len(tt), len(pts)))), dtype=float) @ w
        integral = 0.5 ** (a + 1.0) * np.dot(wj, (1.0 + s) ** a * funk)
        out.append(c * ri ** (2 * a + 1.0 - (n - 3)) * integral)
    out = np.array(out)
    return float(out[0]) if np.ndim(r) == 0 else out


@dataclass(frozen=True)
class ClusterMeanProfile:
    """Cluster means (M_omega f)(r_j) of a line function on a radial grid."""

    omega: np.ndarray
    radii: np.ndarray
    values: np.ndarray


def phi_constant(n: int) -> float:
    """sqrt(pi) / Gamma((n-1)/2), the factor turning r^{n-3} M R* phi into Phi."""
    return sqrt(pi) / gamma((n - 1) / 2.0)


@dataclass(frozen=True, eq=False)
class PhiProfile:
    """Phi(omega, r) = r^{n-3} sqrt(pi)/Gamma((n-1)/2) (M_omega f)(r) on a direction grid.

    ``interp`` holds, per harmonic coefficient of F^{-1} in omega, a
    Chebyshev interpolant in r on [0, r_max].
    """

    n: int
    L: int
    r_max: float
    directions: np.ndarray
    values: np.ndarray  # (N_r, P) on the interpolation nodes
    interp: IntervalInterpolant


def _check_even_in_u(f, n: int, rng_seed: int = 7, tol: float = 1e-6):
    rng = np.random.default_rng(rng_seed)
    om = rng.standard_normal((8, n))
    om /= np.linalg.norm(om, axis=1, keepdims=True)
    u = _uniform_perp(rng, om) * rng.uniform(0.3, 1.5, (8, 1))
    a = np.asarray(f(om, u), dtype=float)
    b = np.asarray(f(om, -u), dtype=float)
    if np.abs(a - b).max() > tol * max(1.0, np.abs(a).max()):
        raise NotEven("the dual data are not even under u -> -u, so phi is not even in t")


def build_phi_profile(f, n: int, L: int = 2, r_max: float = 3.0, radial_nodes: int = 32, cluster_resolution: int = 8, odd_tol: float = 1e-6) -> PhiProfile:
    """Tabulate Phi on a direction grid exact to degree 2L and invert F in omega."""
    grid, _, _ = _analysis(n, L)
    P = len(grid.nodes)
    box = {}

    def table(r):
        vals = np.empty((len(r), P))
        for p, om in enumerate(grid.nodes):
            vals[:, p] = cluster_mean(f, om, r, cluster_resolution)
        box["vals"] = vals
        return vals * (r ** (n - 3) * phi_constant(n))[:, None]

    def coeffs(r):
        samples = table(r)
        return funk_inverse_coeffs(samples.T, grid, L, odd_tol=odd_tol, overflow_tol=np.inf).T

    interp = IntervalInterpolant(coeffs, 0.0, r_max, radial_nodes)
    return PhiProfile(n, L, r_max, grid.nodes, box["vals"], interp)


def dual_invert_even(f, n: int, *, L: int = 2, r_max: float = 3.0, radial_nodes: int = 32, cluster_resolution: int = 8, check_even: bool = True) -> HyperplaneFunction:
    """Recover an even phi from f = R* phi.

    phi(theta, t) = F^{-1}[t D^{n/2-1}_{+,2} Phi](theta, t) for t > 0, with
    Phi built from cluster means of f; extended to t < 0 by evenness.  The
    result is valid for 0 < |t| < r_max / 1.5.
    """
    if check_even:
        _check_even_in_u(f, n)
    prof = build_phi_profile(f, n, L, r_max, radial_nodes, cluster_resolution)
    nb = len(harmonic_degrees(n, L))

    def coeff_at(t):
        t = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
        out = np.empty((len(t), nb))
        for i, ti in enumerate(t):
            width = min(0.5 * ti, (r_max - ti) / 2.0)
            out[i] = ti * ek_derivative(prof.interp, n, "plus", ti, width=width)
        return out

    def phi(theta, t):
        theta = np.asarray(theta, dtype=float)
        t = np.asarray(t, dtype=float)
        th, tt = np.broadcast_arrays(theta, t[..., None])
        flat_t = tt[..., 0].reshape(-1)
        uniq, inv = np.unique(np.abs(flat_t), return_inverse=True)
        c = coeff_at(uniq)[inv]
        Y = harmonic_basis(th.reshape(-1, n), n, L)
        return np.sum(Y * c, axis=1).reshape(tt.shape[:-1])

    return HyperplaneFunction(n, L, np.inf, func=phi)


def dual_invert_pointwise(f_r1, theta, t: float, n: int | None = None, L: int = 16, odd_tol: float = 1e-8, overflow_tol: float = 1e-6) -> float:
    """phi(theta, t) = F^{-1}[omega -> R1* phi(omega, t theta)](theta).

    ``f_r1(omega, x)`` is vectorized over batches of directions.  Works for
    phi that are not even in t.
    """
    theta = unit(theta)
    n = theta.size if n is None else n
    grid, _, _ = _analysis(n, L)
    x = np.broadcast_to(t * theta, grid.nodes.shape)
    g = np.asarray(f_r1(grid.nodes, x), dtype=float)
    coeffs = funk_inverse_coeffs(g, grid, L, odd_tol=odd_tol, overflow_tol=overflow_tol)
    return float(harmonic_basis(theta[None, :], n, L)[0] @ coeffs)


def duality_check(f, phi, n: int, samples: int = 100_000, seed: int = 0, df: float = 3.0):
    """Monte-Carlo estimates of <R f, phi> and <f, R* phi> and their combined standard error.

    Left: theta uniform on the sphere, t and the line fiber from Student-t
    proposals.  Right: omega uniform, u from an (n-1)-variate Student-t on
    omega-perp, theta uniform on the subsphere orthogonal to omega.
    """
    if isinstance(f, QuasiRadialFunction):
        f = f.line_function()
    rng = np.random.default_rng(seed)
    # left pairing
    theta = rng.standard_normal((samples, n))
    theta /= np.linalg.norm(theta, axis=1, keepdims=True)
    t, qt = _student(rng, 1, samples, df)
    t = t[:, 0]
    omega, x, qx = _fiber_samples(theta, rng, df)
    lv = np.asarray(f(omega, t[:, None] * theta + x), dtype=float) * np.asarray(phi(theta, t), dtype=float) / (qt * qx)
    # right pairing
    rng2 = np.random.default_rng(None if seed is None else seed + 1)
    om = rng2.standard_normal((samples, n))
    om /= np.linalg.norm(om, axis=1, keepdims=True)
    frame = _perp_frames(rng2, [om], samples, n)
    y, qu = _student(rng2, n - 1, samples, df)
    u = np.einsum("nij,nj->ni", frame, y)
    th = _uniform_perp(rng2, om)
    rv = np.asarray(f(om, u), dtype=float) * np.asarray(phi(th, np.sum(th * u, axis=1)), dtype=float) / qu
    lhs, rhs = float(lv.mean()), float(rv.mean())
    se = float(np.sqrt(lv.var(ddof=1) / samples + rv.var(ddof=1) / samples))
    return lhs, rhs, se
