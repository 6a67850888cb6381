"""Composite Gauss-Legendre quadrature.

Integrands are called once with the full array of quadrature nodes, so they
must accept numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

MAX_ORDER = 64
NEWTON_TOL = 1e-15
NEWTON_MAXITER = 100


class QuadratureError(RuntimeError):
    pass


def _legendre(p: int, x: np.ndarray):
    """P_p(x) and P_p'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    if p == 0:
        return p0, np.zeros_like(x)
    for k in range(1, p):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    dp = p * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@dataclass(frozen=True)
class QuadRule:
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


@lru_cache(maxsize=None)
def gauss_legendre(p: int) -> QuadRule:
    """Gauss-Legendre rule of order ``p`` on [-1, 1].

    Roots of P_p are polished by Newton's method from the Chebyshev-angle
    guesses cos(pi (i - 1/4) / (p + 1/2)).
    """
    if not 1 <= p <= MAX_ORDER:
        raise ValueError(f"quadrature order must be in [1, {MAX_ORDER}], got {p}")
    i = np.arange(1, p + 1)
    x = np.cos(np.pi * (i - 0.25) / (p + 0.5))
    for _ in range(NEWTON_MAXITER):
        val, der = _legendre(p, x)
        dx = val / der
        x = x - dx
        if np.max(np.abs(dx)) <= NEWTON_TOL:
            break
    else:
        raise QuadratureError(f"Newton iteration for Legendre roots (p={p}) did not converge")
    _, der = _legendre(p, x)
    w = 2.0 / ((1.0 - x * x) * der * der)
    # ascending, with exact symmetry about 0
    x = x[::-1]
    w = w[::-1]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    if p % 2:
        x[p // 2] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadRule(p, x, w)


@dataclass(frozen=True)
class PanelScheme:
    panels: int = 64
    order: int = 16

    def __post_init__(self):
        if self.panels < 1:
            raise ValueError("panels must be >= 1")
        gauss_legendre(self.order)  # validates order

    @property
    def rule(self) -> QuadRule:
        return gauss_legendre(self.order)

    def doubled(self) -> "PanelScheme":
        return PanelScheme(2 * self.panels, self.order)

    def nodes_weights(self, a: float, b: float):
        """Nodes and weights of the composite rule on equal panels of [a, b]."""
        return _composite(float(a), float(b), self.panels, self.order)


@lru_cache(maxsize=64)
def _composite(a: float, b: float, panels: int, order: int):
    rule = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    edges[-1] = b
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * rule.nodes[None, :]).ravel()
    w = (half[:, None] * rule.weights[None, :]).ravel()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def default_scheme(n_max: int, t: int = 1, order: int = 16) -> PanelScheme:
    """p=16 with max(64, 2 n_max (t+1)) panels."""
    return PanelScheme(max(64, 2 * n_max * (t + 1)), order)


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              scheme: PanelScheme) -> float:
    if not b > a:
        raise ValueError(f"need b > a, got [{a}, {b}]")
    x, w = scheme.nodes_weights(a, b)
    return float(np.dot(w, f(x)))


def integrate_split(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                    breakpoints: Sequence[float], scheme: PanelScheme) -> float:
    """Sum of ``integrate`` over the subintervals cut by ``breakpoints``."""
    pts = [float(a), *map(float, breakpoints), float(b)]
    if any(not lo < hi for lo, hi in zip(pts, pts[1:])):
        raise ValueError("breakpoints must be sorted and strictly inside (a, b)")
    return sum(integrate(f, lo, hi, scheme) for lo, hi in zip(pts, pts[1:]))
