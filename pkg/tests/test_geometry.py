import numpy as np
import pytest
from hypothesis import given, strategies as st

from radonlh.errors import OriginPlane
from radonlh.geometry import (
    AffinePlane,
    Hyperplane,
    Line,
    LineCluster,
    basis_vector,
    complete_frame,
    householder_frames,
    nu_inverse_point,
    nu_map,
)


def random_plane(seed, n, k, dist):
    rng = np.random.default_rng(seed)
    span = rng.standard_normal((k, n))
    point = rng.standard_normal(n)
    plane = AffinePlane.through(span, point) if k else AffinePlane(np.zeros((0, n)), point)
    return AffinePlane(plane.basis, plane.offset / np.linalg.norm(plane.offset) * dist)


@given(st.integers(0, 10_000), st.integers(3, 6), st.data(), st.floats(0.1, 10.0))
def test_nu_is_an_involution_with_reciprocal_distance(seed, n, data, dist):
    k = data.draw(st.integers(0, n - 1))
    tau = random_plane(seed, n, k, dist)
    img = nu_map(tau)
    assert img.dim_plane == n - k - 1
    assert img.distance() == pytest.approx(1.0 / dist, rel=1e-12)
    assert nu_map(img) == tau


def test_nu_of_hyperplane_is_point():
    h = Hyperplane(basis_vector(3, 1), 2.0)
    x = nu_map(h).as_point()
    assert np.allclose(x, [-0.5, 0, 0])
    assert nu_inverse_point(x) == h


def test_nu_rejects_origin_planes():
    with pytest.raises(OriginPlane):
        nu_map(Line(basis_vector(3, 1), np.zeros(3)))
    with pytest.raises(OriginPlane):
        nu_inverse_point(np.zeros(4))


def test_hyperplane_sign_identification():
    th = np.array([0.0, -0.6, 0.8])
    assert Hyperplane(th, 1.5) == Hyperplane(-th, -1.5)
    assert Hyperplane(th, 1.5) != Hyperplane(th, -1.5)
    assert Hyperplane(th, 1.5).distance() == 1.5


def test_line_requires_orthogonal_offset():
    with pytest.raises(ValueError):
        Line(basis_vector(3, 1), [1.0, 1.0, 0.0])
    ln = Line.through([1.0, 0, 0], [3.0, 2.0, 0])
    assert np.allclose(ln.offset, [0, 2, 0])
    assert Line(-ln.omega, ln.offset) == ln


def test_hyperplane_affine_round_trip():
    h = Hyperplane([1.0, 2.0, -2.0, 0.5], -0.7)
    assert h.as_affine().as_hyperplane() == h


@given(st.integers(0, 10_000), st.integers(3, 6))
def test_householder_frames_span_the_complement(seed, n):
    W = np.random.default_rng(seed).standard_normal((5, n))
    W[0] = -basis_vector(n, n)  # the reflection's awkward case
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    F = householder_frames(W)
    assert F.shape == (5, n - 1, n)
    for w, f in zip(W, F):
        assert np.allclose(f @ f.T, np.eye(n - 1), atol=1e-12)
        assert np.allclose(f @ w, 0, atol=1e-12)


def test_complete_frame_is_orthonormal():
    v = np.array([[1.0, 1.0, 0.0, 0.0]]) / np.sqrt(2)
    F = complete_frame(v, 4)
    Q = np.vstack([v, F])
    assert np.allclose(Q @ Q.T, np.eye(4), atol=1e-13)


def test_line_cluster_membership():
    cl = LineCluster(basis_vector(3, 3), 2.0)
    ln = cl.line([1.0, 1.0, 5.0])
    assert cl.contains(ln)
    assert ln.distance() == pytest.approx(2.0)
    assert not cl.contains(Line(basis_vector(3, 3), [0.0, 1.0, 0.0]))
    with pytest.raises(ValueError):
        LineCluster(basis_vector(3, 1), 0.0)
