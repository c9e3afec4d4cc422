from math import pi

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radonlh.dual_transform import (
    cluster_mean,
    dual_apply,
    dual_apply_sequence,
    dual_function,
    dual_invert_even,
    dual_invert_pointwise,
    dual_r1,
    dual_r1_function,
    duality_check,
    cluster_mean_formula,
)
from radonlh.errors import Divergent, NotEven
from radonlh.kelvin_route import phi_p
from radonlh.radon_line import QuasiRadialFunction
from radonlh.testlib import abs_t_theta2, gaussian_line, gaussian_t, kelvin_pair, theta2_t

E3 = np.eye(3)


def test_worked_example_values():
    assert dual_apply(abs_t_theta2, E3[0], E3[1]) == pytest.approx(0.5, abs=1e-4)
    assert dual_apply(abs_t_theta2, E3[0], E3[2]) == pytest.approx(1 / pi, abs=1e-4)


def test_constant_and_zero():
    assert dual_apply(lambda th, t: np.ones_like(t), E3[0], 2 * E3[1]) == pytest.approx(1.0)
    assert dual_apply(lambda th, t: np.zeros_like(t), E3[0], E3[1]) == 0.0


def test_offset_must_be_orthogonal():
    with pytest.raises(ValueError):
        dual_apply(gaussian_t, E3[0], E3[0])


def test_divergent_input_is_reported():
    with pytest.raises(Divergent):
        dual_apply(phi_p(3, 3.0, check=False), E3[0], E3[1], max_doublings=3)


@settings(max_examples=10)
@given(st.integers(0, 1000))
def test_symmetries(seed):
    rng = np.random.default_rng(seed)
    om = rng.standard_normal(3)
    om /= np.linalg.norm(om)
    u = rng.standard_normal(3)
    u -= (u @ om) * om
    phi = lambda th, t: np.exp(-t**2) * (1 + th[..., 1] ** 2)  # even, not radial
    a = dual_apply(phi, om, u, 32)
    assert dual_apply(phi, -om, u, 32) == pytest.approx(a, rel=1e-8)
    assert dual_apply(phi, om, -u, 32) == pytest.approx(a, rel=1e-8)


def test_kelvin_pair_dual_closed_form():
    f = dual_function(kelvin_pair, 32)
    for d in (0.5, 1.0, 2.0):
        u = np.array([[0.0, d, 0.0]])
        expect = np.exp(-1 / d**2) / (np.sqrt(pi) * d)
        assert f(E3[[0]], u)[0] == pytest.approx(expect, rel=1e-6)


def test_sequence_converges_for_smooth_data():
    seq = dual_apply_sequence(gaussian_t, E3[0], 1.5 * E3[1], 16, 3)
    assert np.ptp(seq) < 1e-12


def test_cluster_mean_closed_form():
    f = dual_function(abs_t_theta2, 64)
    r = np.array([0.5, 1.0, 1.7])
    cm = cluster_mean(f, E3[0], r, resolution=32)
    # the kink of |t theta_2| limits both quadratures to about 1e-4
    assert np.allclose(cm, 4 * r / pi**2, rtol=3e-4)
    assert np.allclose(cluster_mean_formula(abs_t_theta2, E3[0], r, 3, resolution=64), 4 * r / pi**2, rtol=3e-4)


@pytest.mark.parametrize("n", [4, 5])
def test_cluster_mean_constant_higher_dims(n):
    e = np.eye(n)
    f = dual_function(gaussian_t, 16, offset_scale=None)
    r = np.array([0.6, 1.4])
    assert np.allclose(cluster_mean_formula(gaussian_t, e[0], r, n), cluster_mean(f, e[0], r, resolution=8), rtol=1e-7)


@pytest.mark.parametrize("n", [3, 4])
def test_even_inversion(n):
    g = dual_invert_even(dual_function(gaussian_t, 12, offset_scale=None), n)
    t = np.linspace(0.2, 2.0, 7)
    th = np.tile(np.eye(n)[1], (len(t), 1))
    assert np.allclose(g(th, t), np.exp(-t**2), rtol=1e-6)


def test_even_inversion_rejects_odd_data():
    with pytest.raises(NotEven):
        dual_invert_even(dual_function(theta2_t, 8, offset_scale=None), 3)


def test_dual_r1_ignores_the_direction_component():
    x = np.array([3.0, 0.4, -0.2])
    assert dual_r1(gaussian_t, E3[0], x) == pytest.approx(dual_r1(gaussian_t, E3[0], x - 3.0 * E3[0]), abs=1e-15)


def test_pointwise_inversion():
    f = dual_r1_function(theta2_t, 32)
    th = np.array([0.48, 0.6, 0.64])
    assert dual_invert_pointwise(f, th, 0.9, n=3, L=4) == pytest.approx(0.6 * 0.9, abs=1e-12)
    g = dual_r1_function(gaussian_t, 32)
    assert dual_invert_pointwise(g, th, 0.4, n=3, L=20) == pytest.approx(np.exp(-0.16), abs=1e-8)


@pytest.mark.parametrize("n", [3, 4])
def test_duality_pairing(n):
    f = QuasiRadialFunction.from_callable(gaussian_line, n, L=2).line_function()
    lhs, rhs, se = duality_check(f, gaussian_t, n, samples=100_000, seed=3)
    assert abs(lhs - rhs) <= 3 * se
    assert duality_check(f, gaussian_t, n, samples=2_000, seed=5) == duality_check(f, gaussian_t, n, samples=2_000, seed=5)
