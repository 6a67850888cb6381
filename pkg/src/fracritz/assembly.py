"""Gram matrices of the three Ritz pencils over the sine basis.

With A = -(1/rho) d^2/dx^2 selfadjoint in L^2(rho dx):

    S0[i,j] = int rho qi qj              <qi, qj>
    S1[i,j] = int qi' qj' = mu_i d_ij    <A qi, qj>
    S2[i,j] = int qi'' qj'' / rho        <A qi, A qj>
    T0[i,j] = int int rho(x) qj(x) G(x,s) rho(s) qi(s) ds dx    <T qi, qj>, T = A^-1
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import basis as sb
from .expr import DensitySpec
from .linalg import sym
from .quadrature import PanelScheme


@dataclass(frozen=True)
class GreenKernel:
    a: float
    b: float

    def __call__(self, x, s):
        x = np.asarray(x, dtype=float)
        s = np.asarray(s, dtype=float)
        return (np.minimum(x, s) - self.a) * (self.b - np.maximum(x, s)) / (self.b - self.a)


def green(kernel: GreenKernel, x, s):
    """G(x, s) = (min(x,s) - a)(b - max(x,s))/(b - a)."""
    return kernel(x, s)


@dataclass(frozen=True)
class GramSet:
    n: int
    S0: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    T0: Optional[np.ndarray]
    density: DensitySpec
    basis: sb.SineBasis
    scheme: PanelScheme


def green_apply(f_vals, kernel: GreenKernel, scheme: PanelScheme, f) -> np.ndarray:
    """w(x) = int_a^b G(x,s) g(s) ds at every node x of ``scheme``.

    ``f(s)`` returns an (m, len(s)) array of m integrands g; ``f_vals`` is
    f at the scheme's own nodes.  The s-integral is cut at s = x, where G has
    a derivative kink: whole panels left/right of x are summed cumulatively,
    and the two partial panels [left edge, x] and [x, right edge] get their
    own mapped Gauss rule.
    """
    a, b = kernel.a, kernel.b
    rule = scheme.rule
    p, P = rule.order, scheme.panels
    x, w = scheme.nodes_weights(a, b)
    edges = np.linspace(a, b, P + 1)
    edges[-1] = b
    m = f_vals.shape[0]

    # whole-panel integrals of (s-a) g and (b-s) g
    left_w = (f_vals * (x - a) * w).reshape(m, P, p).sum(axis=2)
    right_w = (f_vals * (b - x) * w).reshape(m, P, p).sum(axis=2)
    cum_left = np.concatenate([np.zeros((m, 1)), np.cumsum(left_w, axis=1)], axis=1)[:, :-1]
    cum_right = np.concatenate([np.cumsum(right_w[:, ::-1], axis=1)[:, ::-1][:, 1:],
                                np.zeros((m, 1))], axis=1)

    panel = np.repeat(np.arange(P), p)
    lo = edges[panel]
    hi = edges[panel + 1]
    xi = 0.5 * (rule.nodes + 1.0)
    # partial panel [lo, x]
    hl = (x - lo)[:, None]
    sl = lo[:, None] + hl * xi[None, :]
    wl = 0.5 * hl * rule.weights[None, :]
    # partial panel [x, hi]
    hr = (hi - x)[:, None]
    sr = x[:, None] + hr * xi[None, :]
    wr = 0.5 * hr * rule.weights[None, :]

    gl = f(sl.ravel()).reshape(m, len(x), p)
    gr = f(sr.ravel()).reshape(m, len(x), p)
    int_left = cum_left[:, panel] + np.einsum("mjr,jr->mj", gl * (sl - a)[None], wl)
    int_right = cum_right[:, panel] + np.einsum("mjr,jr->mj", gr * (b - sr)[None], wr)
    return ((b - x) * int_left + (x - a) * int_right) / (b - a)


def t0_matrix(density: DensitySpec, basis: sb.SineBasis, n: int, scheme: PanelScheme) -> np.ndarray:
    """Unsymmetrized <T qhat_i, qhat_j>_0 by double quadrature."""
    kernel = GreenKernel(basis.a, basis.b)
    x, w = scheme.nodes_weights(basis.a, basis.b)
    rho = density(x)

    def f(s):
        return sb.table(basis, s, n) * density(s)[None, :]

    f_vals = sb.table(basis, x, n) * rho[None, :]
    W = green_apply(f_vals, kernel, scheme, f)   # W[i] = T(rho q_i)... before rho weighting
    # T0[i, j] = int rho q_j (x) W_i(x) dx
    return W @ (f_vals * w).T


def assemble(density: DensitySpec, basis: sb.SineBasis, n: int, scheme: PanelScheme,
             with_T0: bool = False) -> GramSet:
    if n > basis.K:
        raise ValueError(f"n={n} exceeds the basis size K={basis.K}")
    x, w = scheme.nodes_weights(basis.a, basis.b)
    rho = density(x)
    Q = sb.table(basis, x, n)
    mus = sb.mu(basis, basis.modes(n))
    S0 = sym((Q * (rho * w)) @ Q.T)
    S1 = np.diag(mus)
    S2 = sym(np.outer(mus, mus) * ((Q * (w / rho)) @ Q.T))
    T0 = sym(t0_matrix(density, basis, n, scheme)) if with_T0 else None
    return GramSet(n, S0, S1, S2, T0, density, basis, scheme)
