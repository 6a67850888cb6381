"""Orthonormal Fourier-sine basis on [a, b] and the fractional M-norms.

    qhat_k(x) = sqrt(2/(b-a)) sin(k pi (x-a)/(b-a)),   mu_k = k^2 pi^2/(b-a)^2

so -qhat_k'' = mu_k qhat_k with Dirichlet conditions.  Coefficient vectors are
plain 1-d arrays indexed from mode 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import PanelScheme


@dataclass(frozen=True)
class SineBasis:
    a: float
    b: float
    K: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"need b > a, got [{self.a}, {self.b}]")
        if self.K < 1:
            raise ValueError("K must be positive")

    @property
    def length(self) -> float:
        return self.b - self.a

    def modes(self, n: int | None = None) -> np.ndarray:
        return np.arange(1, (self.K if n is None else n) + 1)


def mu(basis: SineBasis, k) -> np.ndarray | float:
    """Eigenvalue k^2 pi^2 / (b-a)^2 of M = -d^2/dx^2."""
    return (np.asarray(k, dtype=float) * math.pi / basis.length) ** 2 if np.ndim(k) else \
        (k * math.pi / basis.length) ** 2


def evaluate(basis: SineBasis, k, x, derivative: int = 0):
    """qhat_k or its first/second derivative at x (broadcasting k against x)."""
    w = np.asarray(k, dtype=float) * math.pi / basis.length
    arg = w * (np.asarray(x, dtype=float) - basis.a)
    s = math.sqrt(2.0 / basis.length)
    if derivative == 0:
        return s * np.sin(arg)
    if derivative == 1:
        return s * w * np.cos(arg)
    if derivative == 2:
        return -s * w * w * np.sin(arg)
    raise ValueError("derivative order must be 0, 1 or 2")


def table(basis: SineBasis, x: np.ndarray, n: int | None = None, derivative: int = 0) -> np.ndarray:
    """Matrix of basis values, rows = modes 1..n, columns = points x."""
    k = basis.modes(n)[:, None]
    return evaluate(basis, k, np.asarray(x, dtype=float)[None, :], derivative)


def coeff_scheme(K: int, order: int = 16) -> PanelScheme:
    """A panel scheme resolving modes up to K with ~16 nodes per half period."""
    return PanelScheme(max(64, (K + 1) // 2 * 2), order)


def sine_coeffs(f: Callable[[np.ndarray], np.ndarray], basis: SineBasis,
                scheme: PanelScheme | None = None) -> np.ndarray:
    """chat_k = int_a^b f qhat_k dx for k = 1..K."""
    scheme = scheme or coeff_scheme(basis.K)
    x, w = scheme.nodes_weights(basis.a, basis.b)
    fw = np.asarray(f(x), dtype=float) * w
    out = np.empty(basis.K)
    chunk = 256
    for lo in range(0, basis.K, chunk):
        k = np.arange(lo + 1, min(lo + chunk, basis.K) + 1)[:, None]
        out[lo:lo + len(k)] = evaluate(basis, k, x[None, :]) @ fw
    return out


def mu_power(basis: SineBasis, K: int, tau: float) -> np.ndarray:
    """mu_k^(2 tau), k = 1..K, via exp(2 tau log mu_k)."""
    return np.exp(2.0 * tau * np.log(mu(basis, np.arange(1, K + 1))))


def m_norm(c, basis: SineBasis, tau: float) -> float:
    """sqrt(sum_k mu_k^(2 tau) chat_k^2), the D(M^tau) norm of the coefficient vector."""
    if not -0.5 <= tau <= 2.0:
        raise ValueError(f"tau must lie in [-1/2, 2], got {tau}")
    c = np.asarray(c, dtype=float)
    return float(np.sqrt(np.sum(mu_power(basis, len(c), tau) * c * c)))


def synth(c, basis: SineBasis, x, derivative: int = 0):
    """sum_k chat_k qhat_k^(d)(x)."""
    c = np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float)
    vals = evaluate(basis, np.arange(1, len(c) + 1)[:, None], np.atleast_1d(x)[None, :], derivative)
    out = c @ vals
    return float(out[0]) if x.ndim == 0 else out


def pad(c, K: int) -> np.ndarray:
    """Zero-pad (or reject truncation of) a coefficient vector to length K."""
    c = np.asarray(c, dtype=float)
    if len(c) > K:
        raise ValueError(f"cannot pad a length-{len(c)} vector to {K}")
    out = np.zeros(K)
    out[:len(c)] = c
    return out
