"""Dense symmetric linear algebra written out by hand.

Cholesky, triangular solves and a cyclic-by-row Jacobi eigensolver, combined
into the symmetric-definite generalized eigensolver used for every Ritz pencil.
Sizes here are small (n <= 64), so clarity wins over blocking.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-14
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 50


class NotPositiveDefinite(np.linalg.LinAlgError):
    pass


class JacobiNotConverged(RuntimeError):
    pass


def sym(m) -> np.ndarray:
    """Exactly symmetric copy (M + M^T)/2 of a square array."""
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class GeneralizedEig:
    values: np.ndarray
    vectors: np.ndarray  # columns


def cholesky(s) -> np.ndarray:
    """Lower-triangular L with L L^T = s.

    Raises NotPositiveDefinite when a pivot drops to 1e-14 ||s||_max or below,
    which for a Gram matrix means the trial vectors are (numerically) dependent.
    """
    s = np.asarray(s, dtype=float)
    n = s.shape[0]
    scale = np.max(np.abs(s)) if s.size else 0.0
    L = np.zeros_like(s)
    for j in range(n):
        d = s[j, j] - np.dot(L[j, :j], L[j, :j])
        if not d > PIVOT_TOL * scale:
            raise NotPositiveDefinite(f"pivot {j} is {d:.3e}; matrix is not positive definite")
        L[j, j] = np.sqrt(d)
        L[j + 1:, j] = (s[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def solve_triangular(L, rhs, transposed: bool = False) -> np.ndarray:
    """Solve L x = rhs (forward) or L^T x = rhs (backward) for lower-triangular L.

    ``rhs`` may be a vector or a matrix of right-hand-side columns.
    """
    L = np.asarray(L, dtype=float)
    x = np.array(rhs, dtype=float)
    n = L.shape[0]
    if x.shape[0] != n:
        raise ValueError(f"dimension mismatch: L is {n}x{n}, rhs has {x.shape[0]} rows")
    if not transposed:
        for i in range(n):
            x[i] = (x[i] - L[i, :i] @ x[:i]) / L[i, i]
    else:
        for i in range(n - 1, -1, -1):
            x[i] = (x[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigh(s) -> GeneralizedEig:
    """Eigenpairs of a symmetric matrix by cyclic-by-row Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm is <= 1e-13 ||s||_F.
    Values come back ascending; ties keep their sweep order.
    """
    a = sym(s)
    n = a.shape[0]
    v = np.eye(n)
    target = JACOBI_TOL * np.linalg.norm(a)
    for _ in range(JACOBI_MAX_SWEEPS + 1):
        if _off_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                sn = t * c
                # A <- J^T A J on rows/columns p, q
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - sn * aq
                a[:, q] = sn * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - sn * aq
                a[q, :] = sn * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - sn * vq
                v[:, q] = sn * vp + c * vq
    else:
        raise JacobiNotConverged(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={n})")
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return GeneralizedEig(values[order], v[:, order])


def generalized_eigh(A, B) -> GeneralizedEig:
    """Solve A x = lambda B x for symmetric A and symmetric positive definite B.

    Uses B = L L^T and the standard form C = L^-1 A L^-T; eigenvectors are
    returned B-orthonormal with ascending eigenvalues.
    """
    A = sym(A)
    B = sym(B)
    if A.shape != B.shape:
        raise ValueError(f"pencil shapes differ: {A.shape} vs {B.shape}")
    L = cholesky(B)
    Y = solve_triangular(L, A)            # L^-1 A
    C = solve_triangular(L, Y.T)          # L^-1 A L^-T
    eig = jacobi_eigh(C)
    X = solve_triangular(L, eig.vectors, transposed=True)
    return GeneralizedEig(eig.values, X)
