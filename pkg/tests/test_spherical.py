import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import eval_gegenbauer

from radonlh.errors import DegreeOverflow, OddComponent, UnsupportedDimension
from radonlh.spherical import (
    build_grid,
    funk_forward,
    funk_inverse_abel,
    funk_inverse_spectral,
    funk_multiplier,
    gegenbauer,
    harmonic_basis,
    harmonic_degrees,
    richardson,
    sphere_rule,
)


@given(st.integers(3, 6), st.integers(2, 6))
def test_sphere_rule_moments(n, L):
    x, w = sphere_rule(n, L)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert w @ x[:, 0] ** 2 == pytest.approx(1.0 / n, abs=1e-13)
    assert w @ (x[:, 0] ** 2 * x[:, -1] ** 2) == pytest.approx(1.0 / (n * (n + 2)), abs=1e-13)
    assert w @ x[:, 1] ** 4 == pytest.approx(3.0 / (n * (n + 2)), abs=1e-13)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_sphere_rule_is_antipodally_symmetric(n):
    x, w = sphere_rule(n, 5)
    key = lambda a: {tuple(np.round(r, 12)) for r in a}
    assert key(x) == key(-x)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_harmonics_are_orthonormal(n):
    L = 4
    g = build_grid(n, L + 1)
    Y = harmonic_basis(g.nodes, n, L)
    G = Y.T @ (g.weights[:, None] * Y)
    assert np.allclose(G, np.eye(Y.shape[1]), atol=1e-11)
    from math import comb

    dims = [comb(k + n - 1, n - 1) - (comb(k + n - 3, n - 1) if k >= 2 else 0) for k in range(L + 1)]
    assert np.array_equal(np.bincount(harmonic_degrees(n, L)), dims)


def test_gegenbauer_matches_scipy():
    x = np.linspace(-1, 1, 7)
    for lam in (0.5, 1.0, 1.5, 2.0):
        C = gegenbauer(6, lam, x)
        for k in range(7):
            assert np.allclose(C[k], eval_gegenbauer(k, lam, x), atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_funk_multipliers(n):
    lam = (n - 2) / 2
    for k in range(9):
        expect = eval_gegenbauer(k, lam, 0.0) / eval_gegenbauer(k, lam, 1.0)
        assert funk_multiplier(k, n) == pytest.approx(expect, abs=1e-15)
    assert funk_multiplier(3, n) == 0.0


def test_funk_forward_closed_form():
    # mean of x_3^2 over the great circle orthogonal to theta is (1 - theta_3^2)/2
    th = np.random.default_rng(1).standard_normal((20, 3))
    th /= np.linalg.norm(th, axis=1, keepdims=True)
    got = funk_forward(lambda x: x[:, 2] ** 2, th, resolution=8)
    assert np.allclose(got, (1 - th[:, 2] ** 2) / 2, atol=1e-14)
    assert funk_forward(lambda x: np.ones(len(x)), th[0]) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [3, 4])
def test_funk_spectral_round_trip(n):
    f = lambda x: np.exp(x[:, 0] - x[:, 1] ** 2) + np.exp(-x[:, 0] - x[:, 1] ** 2)  # even
    g = lambda x: funk_forward(f, x, resolution=24)
    grid = build_grid(n, 22)
    exp = funk_inverse_spectral(g, 20, grid=grid, overflow_tol=1e-2)
    pts = sphere_rule(n, 3)[0][:10]
    assert np.allclose(exp(pts), f(pts), atol=1e-6)


def test_funk_inverse_guards():
    grid = build_grid(3, 8)
    with pytest.raises(OddComponent):
        funk_inverse_spectral(lambda x: x[:, 0], 6, grid=grid)
    with pytest.raises(DegreeOverflow):
        funk_inverse_spectral(lambda x: eval_gegenbauer(8, 0.5, x[:, 2]), 4, grid=grid)


def test_build_grid_limits():
    with pytest.raises(UnsupportedDimension):
        build_grid(7, 8)
    with pytest.raises(ValueError):
        build_grid(3, 2)


def test_abel_inverse_agrees_with_spectral():
    f = lambda x: np.cosh(x[:, 0]) * np.exp(x[:, 2] ** 2)
    g = lambda x: funk_forward(f, np.atleast_2d(x), resolution=32)
    om = np.array([0.6, 0.0, 0.8])
    spectral = funk_inverse_spectral(g, 20, grid=build_grid(3, 24), overflow_tol=1e-2)(om[None, :])[0]
    assert funk_inverse_abel(g, om) == pytest.approx(spectral, abs=1e-3)
    assert spectral == pytest.approx(f(om[None, :])[0], abs=1e-6)


def test_richardson_removes_listed_orders():
    h = np.array([0.4, 0.2, 0.1, 0.05])
    vals = 3.0 + 2.0 * h**2 - 5.0 * h**4 + 0.5 * h**6
    assert richardson(vals, 2.0, [2, 4, 6]) == pytest.approx(3.0, abs=1e-13)
