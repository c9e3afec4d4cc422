"""Affine planes in R^n, lines, hyperplanes and the quasi-orthogonal inversion.

A k-plane is stored as an orthonormal basis of its direction subspace plus
the offset vector u orthogonal to that subspace, so ``|u|`` is the distance
from the origin.  Lines and hyperplanes carry their own lightweight types
with the antipodal identifications (omega, u) ~ (-omega, u) and
(theta, t) ~ (-theta, -t) built into equality and hashing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OriginPlane

ORIGIN_TOL = 1e-14
_ORTHO_TOL = 1e-10


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("zero vector has no direction")
    return v / nrm


def basis_vector(n: int, i: int) -> np.ndarray:
    """Coordinate vector e_i of R^n (1-based, as in the usual notation)."""
    e = np.zeros(n)
    e[i - 1] = 1.0
    return e


def complete_frame(vectors, n: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(vectors)``.

    Classical Gram-Schmidt against the coordinate axes, each candidate
    orthogonalized twice.  Axes are tried in order of their smallest
    overlap with the current span, which keeps the pivot well conditioned.
    """
    frame = [np.asarray(v, dtype=float) for v in vectors]
    out = []
    need = n - len(frame)
    if need < 0:
        raise ValueError("more vectors than the ambient dimension")
    while len(out) < need:
        current = frame + out
        if current:
            Q = np.array(current)
            overlap = np.sum(Q**2, axis=0)
        else:
            overlap = np.zeros(n)
        best = None
        for i in np.argsort(overlap, kind="stable"):
            cand = np.zeros(n)
            cand[i] = 1.0
            for _ in range(2):
                for q in current:
                    cand -= np.dot(q, cand) * q
            nrm = np.linalg.norm(cand)
            if nrm > 1e-6:
                best = cand / nrm
                break
        if best is None:  # pragma: no cover - impossible for independent input
            raise ValueError("input vectors are linearly dependent")
        out.append(best)
    return np.array(out).reshape(need, n)


def orthonormal_rows(vectors, n: int) -> np.ndarray:
    """Orthonormalize the rows of ``vectors`` (QR); returns a (k, n) array."""
    V = np.asarray(vectors, dtype=float).reshape(-1, n)
    if V.shape[0] == 0:
        return np.zeros((0, n))
    Q, R = np.linalg.qr(V.T)
    if np.min(np.abs(np.diag(R))) < 1e-12:
        raise ValueError("spanning vectors are linearly dependent")
    return Q.T.copy()


def _canonical_sign(v: np.ndarray, tol: float = 1e-12) -> float:
    """+1 if ``v`` is the lexicographically larger of +-v, else -1."""
    for x in v:
        if abs(x) > tol:
            return 1.0 if x > 0 else -1.0
    return 1.0


@dataclass(frozen=True, eq=False)
class AffinePlane:
    """k-plane tau(xi, u) = xi + u with xi given by orthonormal ``basis`` rows."""

    basis: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        offset = _frozen(self.offset).reshape(-1)
        n = offset.size
        basis = _frozen(self.basis).reshape(-1, n)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "basis", basis)
        if n < 1 or basis.shape[0] > n - 1:
            raise ValueError("plane dimension must satisfy 0 <= k <= n-1")
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(basis.shape[0]), atol=_ORTHO_TOL, rtol=0):
            raise ValueError("basis vectors are not orthonormal")
        if basis.shape[0] and np.max(np.abs(basis @ offset)) > _ORTHO_TOL * max(1.0, np.linalg.norm(offset)):
            raise ValueError("offset is not orthogonal to the plane")

    @classmethod
    def through(cls, spanning, point) -> "AffinePlane":
        """Plane spanned by ``spanning`` (any independent rows) through ``point``."""
        point = np.asarray(point, dtype=float)
        n = point.size
        Q = orthonormal_rows(spanning, n)
        offset = point - Q.T @ (Q @ point)
        return cls(Q, offset)

    @property
    def dim_ambient(self) -> int:
        return self.offset.size

    @property
    def dim_plane(self) -> int:
        return self.basis.shape[0]

    def distance(self) -> float:
        return float(np.linalg.norm(self.offset))

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def subspace_distance(self, other: "AffinePlane") -> float:
        return float(np.linalg.norm(self.projector() - other.projector(), 2))

    def same_as(self, other: "AffinePlane", tol: float = 1e-10) -> bool:
        return (
            self.dim_ambient == other.dim_ambient
            and self.dim_plane == other.dim_plane
            and self.subspace_distance(other) <= tol
            and np.linalg.norm(self.offset - other.offset) <= tol
        )

    def __eq__(self, other):
        if not isinstance(other, AffinePlane):
            return NotImplemented
        return self.same_as(other)

    def __hash__(self):
        return hash((self.dim_plane, tuple(np.round(self.offset, 9))))

    def as_line(self) -> "Line":
        if self.dim_plane != 1:
            raise ValueError("not a line")
        return Line(self.basis[0], self.offset)

    def as_hyperplane(self) -> "Hyperplane":
        n = self.dim_ambient
        if self.dim_plane != n - 1:
            raise ValueError("not a hyperplane")
        theta = complete_frame(self.basis, n)[0]
        return Hyperplane(theta, float(theta @ self.offset))

    def as_point(self) -> np.ndarray:
        if self.dim_plane != 0:
            raise ValueError("not a point")
        return self.offset.copy()


@dataclass(frozen=True, eq=False)
class Line:
    """Line {omega} + u with unit direction omega and offset u orthogonal to it."""

    omega: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        omega = unit(self.omega)
        u = np.asarray(self.offset, dtype=float).reshape(-1)
        if u.size != omega.size:
            raise ValueError("direction and offset dimensions differ")
        if abs(omega @ u) > _ORTHO_TOL * max(1.0, np.linalg.norm(u)):
            raise ValueError("offset must be orthogonal to the direction")
        u = u - (omega @ u) * omega
        object.__setattr__(self, "omega", _frozen(_canonical_sign(omega) * omega))
        object.__setattr__(self, "offset", _frozen(u))

    @classmethod
    def through(cls, omega, point) -> "Line":
        omega = unit(omega)
        point = np.asarray(point, dtype=float)
        return cls(omega, point - (omega @ point) * omega)

    @property
    def dim_ambient(self) -> int:
        return self.omega.size

    def distance(self) -> float:
        return float(np.linalg.norm(self.offset))

    def as_affine(self) -> AffinePlane:
        return AffinePlane(self.omega[None, :], self.offset)

    def __eq__(self, other):
        if not isinstance(other, Line):
            return NotImplemented
        return bool(
            np.allclose(self.omega, other.omega, atol=1e-12, rtol=0)
            and np.allclose(self.offset, other.offset, atol=1e-12, rtol=0)
        )

    def __hash__(self):
        return hash((tuple(np.round(self.omega, 10)), tuple(np.round(self.offset, 10))))


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """h(theta, t) = {x : x . theta = t}, stored with the canonical sign."""

    theta: np.ndarray
    t: float

    def __post_init__(self):
        theta = unit(self.theta)
        t = float(self.t)
        s = _canonical_sign(np.append(theta, t))
        object.__setattr__(self, "theta", _frozen(s * theta))
        object.__setattr__(self, "t", s * t)

    @property
    def dim_ambient(self) -> int:
        return self.theta.size

    def distance(self) -> float:
        return abs(self.t)

    def as_affine(self) -> AffinePlane:
        n = self.theta.size
        return AffinePlane(complete_frame([self.theta], n), self.t * self.theta)

    def __eq__(self, other):
        if not isinstance(other, Hyperplane):
            return NotImplemented
        return bool(np.allclose(self.theta, other.theta, atol=1e-12, rtol=0) and abs(self.t - other.t) <= 1e-12)

    def __hash__(self):
        return hash((tuple(np.round(self.theta, 10)), round(self.t, 10)))


@dataclass(frozen=True)
class LineCluster:
    """cl(omega, r): all lines with direction omega at distance r from {omega}."""

    omega: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("cluster radius must be positive")
        omega = unit(self.omega)
        object.__setattr__(self, "omega", _frozen(_canonical_sign(omega) * omega))

    def contains(self, line: Line, tol: float = 1e-10) -> bool:
        same_dir = abs(abs(line.omega @ self.omega) - 1.0) <= tol
        return bool(same_dir and abs(line.distance() - self.radius) <= tol)

    def line(self, v) -> Line:
        """Member line with offset ``radius * v`` (v is projected onto omega-perp)."""
        v = np.asarray(v, dtype=float)
        v = unit(v - (v @ self.omega) * self.omega)
        return Line(self.omega, self.radius * v)


def _as_affine(plane) -> AffinePlane:
    if isinstance(plane, AffinePlane):
        return plane
    if isinstance(plane, (Line, Hyperplane)):
        return plane.as_affine()
    # a bare vector is a point (0-plane)
    x = np.asarray(plane, dtype=float).reshape(-1)
    return AffinePlane(np.zeros((0, x.size)), x)


def nu_map(plane) -> AffinePlane:
    """Quasi-orthogonal inversion tau(xi, u) -> tau~({xi, u}-perp, -u/|u|^2).

    Maps a k-plane not through the origin to an (n-k-1)-plane at the
    reciprocal distance; it is an involution.  Accepts an ``AffinePlane``,
    ``Line``, ``Hyperplane`` or a point given as a vector.
    """
    tau = _as_affine(plane)
    u = tau.offset
    r = np.linalg.norm(u)
    if r < ORIGIN_TOL:
        raise OriginPlane("plane passes through the origin")
    n = tau.dim_ambient
    xi_tilde = complete_frame(list(tau.basis) + [u / r], n)
    u_tilde = -u / r**2
    # re-project to remove rounding drift of the completed frame
    if xi_tilde.shape[0]:
        u_tilde = u_tilde - xi_tilde.T @ (xi_tilde @ u_tilde)
    return AffinePlane(xi_tilde, u_tilde)


def nu_inverse_point(x) -> Hyperplane:
    """Hyperplane mapped by ``nu_map`` to the point x: h(x/|x|, -1/|x|)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    r = np.linalg.norm(x)
    if r < ORIGIN_TOL:
        raise OriginPlane("the origin has no preimage under nu")
    return Hyperplane(x / r, -1.0 / r)


def householder_frames(omegas: np.ndarray) -> np.ndarray:
    """Orthonormal frames of omega-perp for a batch of unit vectors.

    Returns an array of shape (m, n-1, n) whose rows span omega_i-perp.  The
    frame is the Householder reflection taking e_n to omega, restricted to
    its first n-1 columns.
    """
    W = np.atleast_2d(np.asarray(omegas, dtype=float))
    m, n = W.shape
    e = np.zeros(n)
    e[-1] = 1.0
    # reflect e_n -> omega (or -omega when omega is close to -e_n, which spans the same complement)
    sign = np.where(W[:, -1] >= 0, 1.0, -1.0)
    target = W * sign[:, None]
    v = e[None, :] - target
    vn = np.sum(v * v, axis=1)
    small = vn < 1e-30
    vn = np.where(small, 1.0, vn)
    H = np.eye(n)[None, :, :] - 2.0 * v[:, :, None] * v[:, None, :] / vn[:, None, None]
    H[small] = np.eye(n)
    # columns 0..n-2 of H are orthogonal to H e_n = target
    return np.transpose(H[:, :, : n - 1], (0, 2, 1))
