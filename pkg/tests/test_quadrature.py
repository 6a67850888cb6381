import math

import numpy as np
import pytest

from fracritz.quadrature import PanelScheme, default_scheme, gauss_legendre, integrate, integrate_split


def test_low_orders():
    r1 = gauss_legendre(1)
    assert r1.nodes.tolist() == [0.0] and r1.weights.tolist() == pytest.approx([2.0])
    r2 = gauss_legendre(2)
    np.testing.assert_allclose(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(r2.weights, [1.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("p", [1, 2, 3, 5, 8, 16, 31, 64])
def test_rule_invariants(p):
    r = gauss_legendre(p)
    assert abs(r.weights.sum() - 2.0) <= 1e-14
    assert np.all(np.diff(r.nodes) > 0)
    assert np.all(r.weights > 0)
    np.testing.assert_array_equal(r.nodes, -r.nodes[::-1])
    # agrees with numpy's independent implementation
    x, w = np.polynomial.legendre.leggauss(p)
    np.testing.assert_allclose(r.nodes, x, atol=1e-14)
    np.testing.assert_allclose(r.weights, w, atol=1e-14)


@pytest.mark.parametrize("p", [1, 2, 5, 10, 20])
def test_polynomial_exactness(p):
    r = gauss_legendre(p)
    for d in range(2 * p):
        want = 0.0 if d % 2 else 2.0 / (d + 1)
        got = float(np.dot(r.weights, r.nodes ** d))
        assert abs(got - want) <= 1e-13 * max(1.0, abs(want))


def test_order_bounds():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_legendre(65)


def test_integrate_examples():
    assert integrate(lambda x: x ** 3, 0, 1, PanelScheme(1, 2)) == pytest.approx(0.25, abs=1e-15)
    got = integrate(lambda x: 1 / x ** 2, 1, math.e, PanelScheme(8, 16))
    assert abs(got - (1 - 1 / math.e)) <= 1e-12
    assert abs(integrate(lambda x: np.sin(np.pi * x), 0, 2, PanelScheme(4, 8))) <= 1e-13
    with pytest.raises(ValueError):
        integrate(np.sin, 1, 1, PanelScheme())


def test_integrate_split():
    assert integrate_split(lambda x: np.abs(x - 0.5), 0, 1, [0.5], PanelScheme(1, 2)) == pytest.approx(0.25, abs=1e-16)
    f = lambda x: np.exp(x) * np.cos(3 * x)
    s = PanelScheme(4, 12)
    assert integrate_split(f, 0, 1, [], s) == integrate(f, 0, 1, s)
    assert integrate_split(lambda x: np.ones_like(x), 0, 1, [0.3, 0.7], s) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        integrate_split(f, 0, 1, [0.7, 0.3], s)
    with pytest.raises(ValueError):
        integrate_split(f, 0, 1, [1.0], s)


@pytest.mark.parametrize("c", [0.2, 0.5, 1.7])
def test_additivity(c):
    f = lambda x: np.exp(-x) * np.sin(5 * x) + x ** 2
    s = PanelScheme(16, 16)
    whole = integrate(f, 0, 2, s)
    assert abs(whole - integrate(f, 0, c, s) - integrate(f, c, 2, s)) <= 1e-12 * (1 + abs(whole))


def test_panel_doubling_converges():
    # a nu1-type integrand for the Euler density
    f = lambda x: x ** -2 * (2 * x) * np.sin(np.pi * np.log(x)) ** 2 * np.cos(20 * np.log(x)) ** 4
    deltas = []
    panels = 2
    prev = integrate(f, 1, math.e, PanelScheme(panels, 16))
    while panels < 128:
        panels *= 2
        cur = integrate(f, 1, math.e, PanelScheme(panels, 16))
        deltas.append(abs(cur - prev))
        prev = cur
    big = [d for d in deltas if d > 1e-14]
    assert all(b < a for a, b in zip(big, big[1:]))
    assert deltas[-1] < 1e-12


def test_default_scheme():
    assert default_scheme(20, 1).panels == 80
    assert default_scheme(8, 1).panels == 64
    assert default_scheme(24, 3).order == 16
