"""Ritz pencils for the three fractional Rayleigh quotients and eigenvector errors.

    tau = 0    dual harmonic    <u,u> / <Tu,u>       pencil (S0, T0)
    tau = 1/2  regular          a(u) / <u,u>         pencil (S1, S0)
    tau = 1    harmonic         <Au,Au> / a(u)       pencil (S2, S1)

In every case the reported values approximate the eigenvalues lambda of A from
above.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from . import basis as sb
from .assembly import GramSet
from .linalg import generalized_eigh


class TauScheme(enum.Enum):
    DUAL = 0.0
    REGULAR = 0.5
    HARMONIC = 1.0

    @property
    def tau(self) -> float:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "TauScheme":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown scheme {name!r}; use regular, harmonic or dual") from None


class MissingMatrix(ValueError):
    pass


@dataclass(frozen=True)
class RitzSolution:
    scheme: TauScheme
    n: int
    values: np.ndarray
    vectors: np.ndarray   # columns are coefficient vectors in the qhat basis
    normalization: str    # "pencil-B" or "H0"
    basis: sb.SineBasis

    def column(self, j: int = 0) -> np.ndarray:
        return self.vectors[:, j]


def pencil(grams: GramSet, scheme: TauScheme, n: int):
    """(A-form, B-form) leading n x n blocks for ``scheme``."""
    if scheme is TauScheme.REGULAR:
        A, B = grams.S1, grams.S0
    elif scheme is TauScheme.HARMONIC:
        A, B = grams.S2, grams.S1
    else:
        if grams.T0 is None:
            raise MissingMatrix("the dual scheme needs T0; assemble with with_T0=True")
        A, B = grams.S0, grams.T0
    return A[:n, :n], B[:n, :n]


def solve(grams: GramSet, scheme: TauScheme, n: int | None = None) -> RitzSolution:
    n = grams.n if n is None else n
    if not 1 <= n <= grams.n:
        raise ValueError(f"n must be in [1, {grams.n}], got {n}")
    A, B = pencil(grams, scheme, n)
    eig = generalized_eigh(A, B)
    return RitzSolution(scheme, n, eig.values, eig.vectors, "pencil-B", grams.basis)


def normalize_h0(sol: RitzSolution, S0: np.ndarray) -> RitzSolution:
    """Rescale every column so that c^T S0 c = 1 (unit norm in L^2(rho dx))."""
    n = sol.n
    S0 = np.asarray(S0)[:n, :n]
    norms2 = np.einsum("ij,ik,kj->j", sol.vectors, S0, sol.vectors)
    if np.any(norms2 <= 0):
        raise ArithmeticError("zero Ritz vector cannot be normalized")
    return replace(sol, vectors=sol.vectors / np.sqrt(norms2)[None, :], normalization="H0")


def align_sign(sol: RitzSolution, reference) -> RitzSolution:
    """Flip columns whose inner product with ``reference`` is negative.

    A zero inner product leaves the column unchanged.  A 2-d ``reference``
    supplies one reference column per Ritz vector.
    """
    ref = np.asarray(reference, dtype=float)
    if not np.any(ref):
        raise ValueError("reference vector is zero")
    m = min(len(ref), sol.n)
    if ref.ndim == 2:
        dots = np.einsum("ij,ij->j", ref[:m, :sol.n], sol.vectors[:m, :])
    else:
        dots = ref[:m] @ sol.vectors[:m, :]
    signs = np.where(dots < 0, -1.0, 1.0)
    return replace(sol, vectors=sol.vectors * signs[None, :])


def error_norms(sol: RitzSolution, exact, taus, j: int = 0, S0_ext: np.ndarray | None = None) -> dict:
    """M-norm errors ||u_j - u_j^(n)||_tau for each tau.

    ``exact`` holds the reference coefficients (length K_ref >= n).  If
    ``S0_ext`` (the rho-mass matrix on K_ref modes) is given and tau 0 is
    requested, the true L^2(rho dx) error is added under the key ``"h0"``.
    """
    exact = np.asarray(exact, dtype=float)
    diff = sb.pad(sol.column(j), len(exact)) - exact
    out = {float(t): sb.m_norm(diff, sol.basis, float(t)) for t in taus}
    if S0_ext is not None and any(float(t) == 0.0 for t in taus):
        K = S0_ext.shape[0]
        d = diff[:K]
        out["h0"] = float(np.sqrt(max(d @ S0_ext @ d, 0.0)))
    return out


def tail_ratio(exact, basis: sb.SineBasis, tau: float, n: int) -> float:
    """sum_{k>n} mu_k^(4 tau - 1) c_k^2 / sum_{k>n} mu_k^(2 tau) c_k^2."""
    c = np.asarray(exact, dtype=float)
    if not n < len(c):
        raise ValueError(f"n={n} leaves no tail in a length-{len(c)} vector")
    k = np.arange(n + 1, len(c) + 1)
    logmu = np.log(sb.mu(basis, k))
    c2 = c[n:] ** 2
    num = np.sum(np.exp((4 * tau - 1) * logmu) * c2)
    den = np.sum(np.exp(2 * tau * logmu) * c2)
    if den == 0:
        raise ZeroDivisionError("tail of the reference vector vanishes; increase K_ref")
    return float(num / den)


@dataclass(frozen=True)
class ErrorBoundReport:
    ell: int
    n: int
    tau: float
    lhs: float
    rhs: float
    proj_lo: float      # ||(I - P_n) Q_ell|| in the tau - 1/2 norm
    proj_hi: float      # ||(I - P_n) Q_ell|| in the tau norm
    kappa: float
    delta: float
    vector_bound_hi: float
    vector_bound_lo: float
    projection: str = "M-surrogate"

    @property
    def holds(self) -> bool:
        return 0.0 <= self.lhs <= self.rhs


def _truncation_ratio(c: np.ndarray, basis: sb.SineBasis, tau: float, n: int) -> float:
    weights = sb.mu_power(basis, len(c), tau)
    full = np.sum(weights * c * c)
    tail = np.sum(weights[n:] * c[n:] ** 2)
    return float(np.sqrt(tail / full))


def error_bound_check(sol: RitzSolution, exact_vectors, lambdas_exact, ell: int = 1,
                    kappa: float = 0.5) -> ErrorBoundReport:
    """Evaluate both sides of the Ritz eigenvalue error bound for the ell-th value.

    The projection norms ||(I - P_n) Q_ell|| are replaced by the sine
    truncation ratio tail/full of the exact eigenvectors in the M-norms,
    maximized over the first ``ell`` eigenvectors.

    ``exact_vectors`` is a sequence of reference coefficient vectors (at least
    ``ell`` of them); ``lambdas_exact`` the ascending exact eigenvalues (at
    least ``ell + 1`` so the gap delta is defined).
    """
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    lam = np.asarray(lambdas_exact, dtype=float)
    if len(lam) < ell + 1 or len(exact_vectors) < ell:
        raise ValueError("need ell exact vectors and ell + 1 exact eigenvalues")
    j = ell - 1
    gaps = np.abs(np.delete(lam, j) - lam[j])
    delta = float(gaps.min())
    if not delta > 0:
        raise ValueError("degenerate spectral gap")
    tau = sol.scheme.tau
    lo = max(_truncation_ratio(np.asarray(v), sol.basis, tau - 0.5, sol.n) for v in exact_vectors[:ell])
    hi = max(_truncation_ratio(np.asarray(v), sol.basis, tau, sol.n) for v in exact_vectors[:ell])
    Lam = float(sol.values[j])
    lhs = Lam - lam[j]
    rhs = Lam * (lo ** 2 + 2.0 * lam[j] * np.sum(1.0 / lam[:ell]) * hi ** 2)
    vb_hi = 4 * lam[j] * (1 + lam[j] / (kappa * delta)) ** 2 * lo ** 2 + lhs
    vb_lo = 2 * (1 + lam[j] / (kappa * delta)) * lo
    return ErrorBoundReport(ell, sol.n, tau, float(lhs), float(rhs), lo, hi, kappa, delta,
                           float(np.sqrt(max(vb_hi, 0.0))), float(vb_lo))
