import numpy as np
import pytest
import scipy.linalg

from fracritz.linalg import (NotPositiveDefinite, cholesky, generalized_eigh, jacobi_eigh,
                             solve_triangular, sym)


def random_sym(rng, n):
    m = rng.standard_normal((n, n))
    return m + m.T


def random_spd(rng, n):
    m = rng.standard_normal((n, n))
    return m @ m.T + n * np.eye(n)


def test_cholesky_examples():
    np.testing.assert_array_equal(cholesky(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(cholesky([[4.0, 2.0], [2.0, 5.0]]), [[2.0, 0.0], [1.0, 2.0]])
    with pytest.raises(NotPositiveDefinite):
        cholesky([[1.0, 2.0], [2.0, 1.0]])


def test_cholesky_reconstructs():
    rng = np.random.default_rng(1)
    for n in (1, 3, 10, 30):
        s = random_spd(rng, n)
        L = cholesky(s)
        assert np.allclose(L, np.tril(L))
        assert np.all(np.diag(L) > 0)
        assert np.max(np.abs(L @ L.T - s)) <= 1e-12 * np.max(np.abs(s))


def test_solve_triangular():
    np.testing.assert_array_equal(solve_triangular(np.eye(2), [1.0, 2.0]), [1.0, 2.0])
    L = np.array([[2.0, 0.0], [1.0, 2.0]])
    np.testing.assert_allclose(solve_triangular(L, [2.0, 3.0]), [1.0, 1.0])
    rng = np.random.default_rng(2)
    for n in (2, 7, 20):
        L = cholesky(random_spd(rng, n))
        b = rng.standard_normal(n)
        x = solve_triangular(L, b)
        assert np.max(np.abs(L @ x - b)) <= 1e-12 * (1 + np.max(np.abs(b)))
        y = solve_triangular(L, b, transposed=True)
        assert np.max(np.abs(L.T @ y - b)) <= 1e-12 * (1 + np.max(np.abs(b)))
    with pytest.raises(ValueError):
        solve_triangular(np.eye(2), [1.0, 2.0, 3.0])


def test_jacobi_examples():
    e = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(e.values, [1.0, 2.0, 3.0])
    e = jacobi_eigh([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(e.values, [-1.0, 1.0], atol=1e-15)
    v = e.vectors * np.sign(e.vectors[0])
    np.testing.assert_allclose(v, np.array([[1, 1], [-1, 1]]) / np.sqrt(2), atol=1e-15)


def test_jacobi_against_lapack():
    rng = np.random.default_rng(3)
    for n in (1, 2, 8, 16, 40, 64):
        s = random_sym(rng, n)
        e = jacobi_eigh(s)
        assert np.all(np.diff(e.values) >= 0)
        np.testing.assert_allclose(e.values, scipy.linalg.eigh(s, eigvals_only=True), atol=1e-11)
        assert np.max(np.abs(e.vectors @ np.diag(e.values) @ e.vectors.T - s)) <= 1e-11 * max(1, np.abs(s).max())


def test_jacobi_ties_keep_order():
    e = jacobi_eigh(np.eye(4) * 2.0)
    np.testing.assert_array_equal(e.vectors, np.eye(4))


def test_generalized_examples():
    np.testing.assert_allclose(generalized_eigh(np.diag([2.0, 3.0]), np.eye(2)).values, [2.0, 3.0])
    rng = np.random.default_rng(4)
    b = random_spd(rng, 5)
    np.testing.assert_allclose(generalized_eigh(b, b).values, np.ones(5), atol=1e-12)
    with pytest.raises(NotPositiveDefinite):
        generalized_eigh(np.eye(2), [[1.0, 2.0], [2.0, 1.0]])


@pytest.mark.parametrize("seed", range(100))
def test_generalized_invariants(seed):
    rng = np.random.default_rng(1000 + seed)
    n = 2 + seed % 11
    A, B = random_sym(rng, n), random_spd(rng, n)
    g = generalized_eigh(A, B)
    X = g.vectors
    assert np.all(np.diff(g.values) >= 0)
    scale = np.linalg.norm(A) + np.abs(g.values) * np.linalg.norm(B)
    res = np.linalg.norm(A @ X - (B @ X) * g.values, axis=0)
    assert np.all(res <= 1e-10 * scale)
    assert np.max(np.abs(X.T @ B @ X - np.eye(n))) <= 1e-10
    np.testing.assert_allclose(g.values, scipy.linalg.eigh(A, B, eigvals_only=True), rtol=1e-10, atol=1e-10)


def test_identity_pencil_matches_jacobi():
    rng = np.random.default_rng(5)
    s = random_sym(rng, 9)
    np.testing.assert_allclose(generalized_eigh(s, np.eye(9)).values, jacobi_eigh(s).values, atol=1e-11)


@pytest.mark.parametrize("sigma", [1.0, 10.0])
def test_shift_covariance(sigma):
    rng = np.random.default_rng(6)
    A, B = random_sym(rng, 7), random_spd(rng, 7)
    base = generalized_eigh(A, B).values
    shifted = generalized_eigh(A + sigma * B, B).values
    np.testing.assert_allclose(shifted, base + sigma, atol=1e-10)


def test_deterministic():
    rng = np.random.default_rng(7)
    A, B = random_sym(rng, 12), random_spd(rng, 12)
    g1, g2 = generalized_eigh(A, B), generalized_eigh(A, B)
    assert np.array_equal(g1.values, g2.values) and np.array_equal(g1.vectors, g2.vectors)


def test_sym_enforces_symmetry():
    m = sym([[1.0, 2.0], [4.0, 3.0]])
    assert m[0, 1] == m[1, 0] == 3.0
    with pytest.raises(ValueError):
        sym(np.ones((2, 3)))
