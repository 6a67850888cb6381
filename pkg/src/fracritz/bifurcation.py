"""Bifurcation coefficients of the rotating-string family

    -u'' = lambda rho u (1 + eps (u')^(2t))^(1/(2t)),   u(a) = u(b) = 0,

expanded as u_eps = v0 + eps v1 + ..., lambda_eps = nu0 + eps nu1 + eps^2 nu2/2 + ...
from a Ritz approximation (nu0, v0) of the linearized problem.

All inner products <f, g> are rho-weighted: int rho f g dx.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import basis as sb
from .expr import DensitySpec
from .quadrature import PanelScheme
from .ritz import RitzSolution

EULER_A = 1.0
EULER_B = math.e
QUAD_WARN_REL = 1e-8


class DegenerateGap(ValueError):
    pass


@dataclass(frozen=True)
class BifurcationSpec:
    t: int = 1
    mode: int = 1
    order: int = 1

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("nonlinearity exponent t must be >= 1")
        if self.mode < 1:
            raise ValueError("mode index starts at 1")
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")


@dataclass(frozen=True)
class BifurcationResult:
    spec: BifurcationSpec
    nu0: float
    nu1: float
    v0_coeffs: np.ndarray
    v1_coeffs: np.ndarray
    orth_check: float
    nu2: Optional[float] = None
    quad_diag: dict = field(default_factory=dict)


def _grid(density: DensitySpec, basis: sb.SineBasis, scheme: PanelScheme):
    x, w = scheme.nodes_weights(basis.a, basis.b)
    return x, w * density(x)


def _check_h0(c, density, basis, scheme, tol=1e-10):
    x, rw = _grid(density, basis, scheme)
    norm2 = float(np.dot(rw, sb.synth(c, basis, x) ** 2))
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"mode vector is not H0-normalized (<v0, v0> = {norm2!r})")


def nu1_from_coeffs(c, nu0: float, density: DensitySpec, basis: sb.SineBasis, t: int,
                    scheme: PanelScheme) -> float:
    """-(nu0 / 2t) int rho v0^2 (v0')^(2t) dx for v0 = synth(c)."""
    x, rw = _grid(density, basis, scheme)
    u = sb.synth(c, basis, x)
    du = sb.synth(c, basis, x, 1)
    return float(-(nu0 / (2 * t)) * np.dot(rw, u * u * du ** (2 * t)))


def nu1(sol: RitzSolution, density: DensitySpec, spec: BifurcationSpec,
        scheme: PanelScheme) -> float:
    """First bifurcation coefficient from the ``spec.mode`` Ritz pair."""
    j = spec.mode - 1
    c = sol.column(j)
    _check_h0(c, density, sol.basis, scheme)
    return nu1_from_coeffs(c, float(sol.values[j]), density, sol.basis, spec.t, scheme)


def v1_coeffs(sol: RitzSolution, density: DensitySpec, spec: BifurcationSpec,
              scheme: PanelScheme) -> np.ndarray:
    """Sine coefficients of the first eigenfunction correction v1^(n).

    Spectral expansion over the other Ritz vectors:
        v1 = (Lam_m / 2t) sum_{j != m} <u_m (u_m')^(2t), u_j> / (Lam_j - Lam_m) u_j
    which has no component along u_m.
    """
    m = spec.mode - 1
    if sol.n < 2:
        raise ValueError("need at least two Ritz vectors")
    lam = sol.values
    gaps = np.delete(lam, m) - lam[m]
    if np.min(np.abs(gaps)) <= 1e-8 * abs(lam[m]):
        raise DegenerateGap(f"Ritz value {m + 1} is not simple (min gap {np.min(np.abs(gaps)):.3e})")
    x, rw = _grid(density, sol.basis, scheme)
    U = sb.table(sol.basis, x, sol.n).T @ sol.vectors          # points x Ritz vectors
    dum = sb.table(sol.basis, x, sol.n, 1).T @ sol.vectors[:, m]
    g = U[:, m] * dum ** (2 * spec.t)
    proj = (g * rw) @ U                                          # <g, u_j>
    coef = np.zeros(sol.n)
    others = np.arange(sol.n) != m
    coef[others] = proj[others] / (lam[others] - lam[m])
    coef *= lam[m] / (2 * spec.t)
    return sol.vectors @ coef


def nu2_from_coeffs(c0, c1, nu0: float, nu1_value: float, density: DensitySpec,
                    basis: sb.SineBasis, t: int, scheme: PanelScheme) -> float:
    """Second coefficient from the solvability condition of the eps^2 equation."""
    x, rw = _grid(density, basis, scheme)
    v0 = sb.synth(c0, basis, x)
    d0 = sb.synth(c0, basis, x, 1)
    v1 = sb.synth(c1, basis, x)
    d1 = sb.synth(c1, basis, x, 1)

    def ip(f, g):
        return float(np.dot(rw, f * g))

    p2t = d0 ** (2 * t)
    return (-2 * nu1_value * ip(v1, v0)
            - (nu1_value / t) * ip(v0 * p2t, v0)
            - (nu0 / t) * ip(v1 * p2t, v0)
            - 2 * nu0 * ip(v0 * d1 * d0 ** (2 * t - 1), v0)
            - (nu0 * (1 - 2 * t) / (4 * t * t)) * ip(v0 * d0 ** (4 * t), v0))


def nu2(sol: RitzSolution, v1, nu1_value: float, density: DensitySpec,
        spec: BifurcationSpec, scheme: PanelScheme) -> float:
    j = spec.mode - 1
    return nu2_from_coeffs(sol.column(j), v1, float(sol.values[j]), nu1_value,
                           density, sol.basis, spec.t, scheme)


def bifurcate(sol: RitzSolution, density: DensitySpec, spec: BifurcationSpec,
              scheme: PanelScheme) -> BifurcationResult:
    """nu1 (and nu2 for order 2) with panel-doubling deltas recorded in ``quad_diag``."""
    j = spec.mode - 1
    c0 = sol.column(j)
    value = nu1(sol, density, spec, scheme)
    fine = scheme.doubled()
    diag = {"nu1_doubling_delta": abs(nu1(sol, density, spec, fine) - value)}
    v1 = v1_coeffs(sol, density, spec, scheme)
    x, rw = _grid(density, sol.basis, scheme)
    orth = float(np.dot(rw, sb.synth(v1, sol.basis, x) * sb.synth(c0, sol.basis, x)))
    value2 = None
    if spec.order == 2:
        value2 = nu2(sol, v1, value, density, spec, scheme)
        diag["nu2_doubling_delta"] = abs(nu2(sol, v1, value, density, spec, fine) - value2)
    diag["converged"] = diag["nu1_doubling_delta"] <= QUAD_WARN_REL * abs(value)
    return BifurcationResult(spec, float(sol.values[j]), value, c0.copy(), v1, orth, value2, diag)


def eval_series(result: BifurcationResult, basis: sb.SineBasis, eps: float, x):
    """(lambda_eps, u_eps(x)) from the truncated series.

    The eps^2 v2 / 2 displacement term is not included: v2 is never computed.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    lam = result.nu0 + eps * result.nu1
    if result.spec.order == 2 and result.nu2 is not None:
        lam += 0.5 * eps * eps * result.nu2
    u = sb.synth(result.v0_coeffs, basis, x) + eps * sb.synth(result.v1_coeffs, basis, x)
    return lam, u


# --------------------------------------------------------------------------
# Euler density rho = 1/x^2 on [1, e]: closed-form reference data
# --------------------------------------------------------------------------

def euler_lambda(k: int) -> float:
    return k * k * math.pi ** 2 + 0.25


def euler_eigenfunction(k: int, derivative: int = 0) -> Callable[[np.ndarray], np.ndarray]:
    """u_k(x) = sqrt(2x) sin(k pi ln x), normalized in L^2(x^-2 dx)."""
    w = k * math.pi

    def u(x):
        x = np.asarray(x, dtype=float)
        s, c = np.sin(w * np.log(x)), np.cos(w * np.log(x))
        if derivative == 0:
            return np.sqrt(2 * x) * s
        if derivative == 1:
            return (s / 2 + w * c) * np.sqrt(2 / x)
        if derivative == 2:
            return -(0.25 + w * w) * s * np.sqrt(2 / x) / x
        raise ValueError("derivative order must be 0, 1 or 2")

    return u


def euler_exact(k: int, K_ref: int = 1024):
    """(lambda_k, u_k, sine coefficients of u_k up to K_ref)."""
    if k < 1:
        raise ValueError("mode index starts at 1")
    u = euler_eigenfunction(k)
    coeffs = sb.sine_coeffs(u, sb.SineBasis(EULER_A, EULER_B, K_ref))
    return euler_lambda(k), u, coeffs


def euler_nu1_exact(t: int) -> float:
    """Closed-form nu1 for the first Euler mode, t in {1, 2, 3}."""
    pi, e = math.pi, math.e
    lam = pi ** 2 + 0.25
    if t == 1:
        return -4 * (e - 1) * pi ** 4 * lam * (7 + 4 * pi ** 2) / (e * (1 + 20 * pi ** 2 + 64 * pi ** 4))
    if t == 2:
        return (-(e ** 2 - 1) * pi ** 6 * lam * (437 + 824 * pi ** 2 + 144 * pi ** 4)
                / (64 * e ** 2 * (1 + 14 * pi ** 2 + 49 * pi ** 4 + 36 * pi ** 6)))
    if t == 3:
        return (-16 * (e ** 3 - 1) * pi ** 8 * lam * (1709 + 5540 * pi ** 2 + 3856 * pi ** 4 + 320 * pi ** 6)
                / (9 * e ** 3 * (729 + 9720 * pi ** 2 + 39312 * pi ** 4 + 52480 * pi ** 6 + 16384 * pi ** 8)))
    raise ValueError("closed forms exist only for t in {1, 2, 3}")
