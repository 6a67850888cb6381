import math

import numpy as np
import pytest

from fracritz import basis as sb
from fracritz.bifurcation import euler_exact
from fracritz.quadrature import PanelScheme, integrate

UNIT = sb.SineBasis(0.0, math.pi, 64)
EULER = sb.SineBasis(1.0, math.e, 64)


def test_mu():
    assert sb.mu(UNIT, 3) == pytest.approx(9.0, rel=1e-15)
    assert sb.mu(EULER, 1) == pytest.approx(math.pi ** 2 / (math.e - 1) ** 2, rel=1e-15)
    assert sb.mu(EULER, 1) == pytest.approx(3.3428, abs=1e-4)
    m = sb.mu(EULER, np.arange(1, 102))
    assert np.all(np.diff(m) > 0)


def test_eval_boundary_and_identities():
    k = np.arange(1, 51)[:, None]
    assert np.max(np.abs(sb.evaluate(EULER, k, np.array([[EULER.a, EULER.b]])))) < 1e-13
    rng = np.random.default_rng(0)
    x = rng.uniform(EULER.a, EULER.b, 20)
    for kk in (1, 4, 13):
        np.testing.assert_allclose(sb.evaluate(EULER, kk, x, 2), -sb.mu(EULER, kk) * sb.evaluate(EULER, kk, x),
                                   atol=1e-12)
    assert sb.evaluate(UNIT, 1, math.pi / 2) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)
    with pytest.raises(ValueError):
        sb.evaluate(UNIT, 1, 0.3, 3)


def test_sine_coeffs_examples():
    basis = sb.SineBasis(1.0, math.e, 32)
    c = sb.sine_coeffs(lambda x: sb.evaluate(basis, 3, x), basis)
    e3 = np.zeros(32)
    e3[2] = 1.0
    assert np.max(np.abs(c - e3)) <= 1e-12
    assert not np.any(sb.sine_coeffs(lambda x: np.zeros_like(x), basis))


def test_euler_coefficients_decay_like_k5():
    _, _, c = euler_exact(1, 256)
    k = np.arange(10, 201)
    band = np.abs(c[k - 1]) * k.astype(float) ** 5
    assert band.min() > 0
    assert band.max() / band.min() < 20


def test_m_norm_examples():
    e1 = np.zeros(8)
    e1[0] = 1.0
    assert sb.m_norm(e1, EULER, 0.0) == 1.0
    assert sb.m_norm(e1, UNIT, 0.5) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(ValueError):
        sb.m_norm(e1, UNIT, 2.5)


def test_m_norm_zero_matches_l2_quadrature():
    basis = sb.SineBasis(1.0, math.e, 512)
    f = lambda x: (x - 1) * (math.e - x) * np.exp(x)
    c = sb.sine_coeffs(f, basis)
    direct = math.sqrt(integrate(lambda x: f(x) ** 2, 1.0, math.e, PanelScheme(64, 16)))
    assert abs(sb.m_norm(c, basis, 0.0) - direct) <= 1e-8


def test_parseval_in_span():
    rng = np.random.default_rng(1)
    c = rng.standard_normal(20)
    basis = sb.SineBasis(1.0, math.e, 20)
    l2 = integrate(lambda x: sb.synth(c, basis, x) ** 2, 1.0, math.e, PanelScheme(64, 16))
    assert abs(sb.m_norm(c, basis, 0.0) ** 2 - l2) <= 1e-11 * max(1, l2)


def test_norm_scale_ordering():
    rng = np.random.default_rng(2)
    taus = [-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0]
    assert sb.mu(EULER, 1) > 1
    for _ in range(20):
        c = rng.standard_normal(30)
        norms = [sb.m_norm(c, EULER, t) for t in taus]
        assert all(b >= a for a, b in zip(norms, norms[1:]))
        for i, t1 in enumerate(taus):
            for t2 in taus[i:]:
                bound = sb.m_norm(c, EULER, t2) * sb.mu(EULER, 1) ** (t1 - t2)
                assert sb.m_norm(c, EULER, t1) <= bound * (1 + 1e-14)


def test_synth_examples():
    basis = sb.SineBasis(1.0, math.e, 16)
    x = np.linspace(1, math.e, 13)
    e2 = np.zeros(16)
    e2[1] = 1.0
    np.testing.assert_allclose(sb.synth(e2, basis, x), sb.evaluate(basis, 2, x), atol=1e-15)
    rng = np.random.default_rng(3)
    c = rng.standard_normal(16)
    again = sb.sine_coeffs(lambda s: sb.synth(c, basis, s), basis, PanelScheme(64, 16))
    assert np.max(np.abs(again - c)) <= 1e-11
    h = 1e-6
    for xi in (1.3, 2.0, 2.5):
        fd = (sb.synth(c, basis, xi + h) - sb.synth(c, basis, xi - h)) / (2 * h)
        assert abs(fd - sb.synth(c, basis, xi, 1)) <= 1e-5 * max(1, abs(fd))
    assert isinstance(sb.synth(c, basis, 1.5), float)


def test_pad():
    np.testing.assert_array_equal(sb.pad([1.0, 2.0], 4), [1.0, 2.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        sb.pad([1.0, 2.0], 1)
