from math import pi, sqrt

import numpy as np
import pytest

from radonlh.dual_transform import dual_function
from radonlh.errors import ClassViolation, Divergent, OrderTooSmall, OriginPlane
from radonlh.fracint import ek_derivative
from radonlh.geometry import AffinePlane, Hyperplane, Line
from radonlh.spherical import richardson
from radonlh.kelvin_route import (
    KelvinInverter,
    SpaceFunction,
    WeightedClassParams,
    a_transform,
    build_phi,
    haar_rotations,
    hyperplane_weighted_norm,
    kelvin_invert,
    kelvin_invert_marchaud,
    phi_p,
    rj_forward,
    rj_meanvalue,
    space_lp_norm,
)
from radonlh.testlib import kelvin_pair

E3 = np.eye(3)


def gaussian_space(n):
    return SpaceFunction(n, lambda x: np.exp(-np.sum(np.asarray(x) ** 2, axis=-1)))


def gaussian_Phi(basis, offset):
    return sqrt(pi) * np.exp(-np.sum(offset**2, axis=1))


@pytest.fixture(scope="module")
def kelvin_dual():
    return dual_function(kelvin_pair, 32)


def test_a_transform_of_the_pair():
    g = a_transform(kelvin_pair, 3)
    x = np.random.default_rng(0).standard_normal((10, 3))
    assert np.allclose(g(x), np.exp(-np.sum(x**2, axis=1)), rtol=1e-13)
    assert np.all(a_transform(lambda th, t: np.zeros_like(t), 3)(x) == 0)
    with pytest.raises(OriginPlane):
        g(np.zeros((1, 3)))


def test_weighted_norm_identity():
    lhs = space_lp_norm(a_transform(kelvin_pair, 3), 2.0)
    rhs = hyperplane_weighted_norm(kelvin_pair, 3, 2.0)
    assert lhs == pytest.approx(rhs, rel=1e-3)
    assert lhs == pytest.approx((pi / 2) ** 1.5, rel=1e-6)  # int e^{-2|x|^2}


def test_rj_forward_examples():
    line = AffinePlane(E3[[2]], np.array([1.0, 0.0, 0.0]))
    assert rj_forward(gaussian_space(3), line) == pytest.approx(sqrt(pi) / np.e, rel=1e-12)
    e = np.eye(4)
    assert rj_forward(gaussian_space(4), AffinePlane(e[[0, 1]], np.zeros(4))) == pytest.approx(pi, rel=1e-12)
    assert rj_forward(SpaceFunction(3, lambda x: 0 * x[..., 0]), line) == 0.0
    with pytest.raises(Divergent):
        rj_forward(SpaceFunction(3, lambda x: 1 / (1 + np.linalg.norm(x, axis=-1))), line)


def test_build_phi_examples(kelvin_dual):
    for d in (0.5, 1.0, 2.0):
        plane = AffinePlane(E3[[2]], np.array([d, 0.0, 0.0]))
        assert build_phi(kelvin_dual, plane) == pytest.approx(sqrt(pi) * np.exp(-d * d), rel=1e-5)
    with pytest.raises(OriginPlane):
        build_phi(kelvin_dual, AffinePlane(E3[[2]], np.zeros(3)))
    assert build_phi(lambda om, u: np.zeros(len(om)), AffinePlane(E3[[2]], E3[0])) == 0.0


def test_build_phi_equals_rj_of_a_transform(kelvin_dual):
    rng = np.random.default_rng(4)
    g = a_transform(kelvin_pair, 3)
    for _ in range(20):
        om = rng.standard_normal(3)
        p = rng.standard_normal(3) * rng.uniform(0.3, 1.5)
        line = Line.through(om, p).as_affine()
        assert abs(build_phi(kelvin_dual, line) - rj_forward(g, line)) <= 1e-3


def test_meanvalue_examples():
    r = np.array([0.0, 0.5, 1.0])
    prof = rj_meanvalue(gaussian_Phi, np.zeros(3), r, resolution=8)
    assert np.allclose(prof.values, sqrt(pi) * np.exp(-r**2), rtol=1e-12)
    ones = rj_meanvalue(lambda b, o: np.ones(len(o)), np.array([1.0, 2.0, 0.0]), 0.3, method="haar", samples=100)
    assert ones.value == pytest.approx(1.0)
    assert ones.stderr[0] == 0.0


def test_meanvalue_quadrature_vs_haar():
    x = E3[0]
    det = rj_meanvalue(gaussian_Phi, x, 0.5, method="quadrature", resolution=16)
    mc = rj_meanvalue(gaussian_Phi, x, 0.5, method="haar", samples=100_000, seed=1)
    assert abs(det.value - mc.value) <= 3 * mc.stderr[0]
    again = rj_meanvalue(gaussian_Phi, x, 0.5, method="haar", samples=100_000, seed=1)
    assert again.values.tobytes() == mc.values.tobytes()


def test_haar_rotations_are_special_orthogonal():
    Q = haar_rotations(4, 50, seed=2)
    assert np.allclose(np.einsum("kij,kil->kjl", Q, Q), np.eye(4), atol=1e-12)
    assert np.allclose(np.linalg.det(Q), 1.0)


def test_class_gate():
    with pytest.raises(ClassViolation):
        phi_p(3, 3.0)
    with pytest.raises(ClassViolation):
        WeightedClassParams(4, "Lp", p=2.0)
    with pytest.raises(ClassViolation):
        WeightedClassParams(3, "Cmu", mu=1.0)
    WeightedClassParams(3, "Lp", p=2.5)
    phi_p(3, 2.5)
    assert np.isinf(phi_p(3, 2.5)(E3[0], 0.0))


def test_origin_sanity_limit():
    # pi^{-1/2} D^{1/2}_{-,2}[sqrt(pi) e^{-r^2}] -> 1 as r -> 0
    G = lambda r: sqrt(pi) * np.exp(-np.asarray(r) ** 2)
    rs = (0.4, 0.2, 0.1, 0.05)
    vals = [ek_derivative(G, 3, "minus", r, decay_rate=50) / sqrt(pi) for r in rs]
    assert richardson(vals, 2.0, [2, 4, 6]) == pytest.approx(1.0, abs=1e-3)


@pytest.fixture(scope="module")
def inverter(kelvin_dual):
    return KelvinInverter(kelvin_dual, 3, WeightedClassParams(3, "Cmu", mu=2.5), resolution=12, nodes=48)


def test_kelvin_examples(inverter):
    h = Hyperplane(E3[0], 1.0)
    assert kelvin_invert(None, h, inverter=inverter) == pytest.approx(np.exp(-1), rel=2e-2)
    assert kelvin_invert_marchaud(None, h, ell=1, inverter=inverter) == pytest.approx(np.exp(-1), rel=3e-2)
    # (theta, t) -> (-theta, -t) names the same hyperplane
    assert kelvin_invert(None, Hyperplane(-E3[0], -1.0), inverter=inverter) == kelvin_invert(None, h, inverter=inverter)
    with pytest.raises(OrderTooSmall):
        kelvin_invert_marchaud(None, h, ell=0, inverter=inverter)
    with pytest.raises(OriginPlane):
        kelvin_invert(None, Hyperplane(E3[0], 0.0), inverter=inverter)


def test_zero_dual_data_gives_zero():
    zero = lambda om, u: np.zeros(len(om))
    h = Hyperplane(E3[1], 0.8)
    assert kelvin_invert(zero, h, n=3, resolution=4, nodes=16) == 0.0
    assert kelvin_invert_marchaud(zero, h, n=3, resolution=4, nodes=16) == 0.0


def test_local_and_marchaud_agree_on_random_planes(kelvin_dual):
    inv = KelvinInverter(kelvin_dual, 3, resolution=8, nodes=40)
    rng = np.random.default_rng(11)
    for _ in range(10):
        th = rng.standard_normal(3)
        h = Hyperplane(th, rng.uniform(0.5, 2.0))
        a = kelvin_invert(None, h, inverter=inv)
        b = kelvin_invert_marchaud(None, h, inverter=inv)
        assert abs(a - b) <= 3e-2 * abs(b)
