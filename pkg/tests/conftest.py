import math
from functools import lru_cache

import numpy as np

from fracritz import assembly, ritz
from fracritz import basis as sb
from fracritz.bifurcation import euler_exact
from fracritz.expr import preset
from fracritz.quadrature import PanelScheme, default_scheme


@lru_cache(maxsize=None)
def euler_grams(n, t=1, with_T0=False):
    density = preset("euler")
    quad = default_scheme(n, t)
    basis = sb.SineBasis(density.a, density.b, 1024)
    return density, quad, assembly.assemble(density, basis, n, quad, with_T0=with_T0)


@lru_cache(maxsize=None)
def euler_solution(n, t=1, scheme=ritz.TauScheme.REGULAR):
    density, quad, grams = euler_grams(n, t, scheme is ritz.TauScheme.DUAL)
    sol = ritz.normalize_h0(ritz.solve(grams, scheme, n), grams.S0)
    return density, quad, grams, ritz.align_sign(sol, np.eye(n)[0])


@lru_cache(maxsize=None)
def unit_solution(n, scheme=ritz.TauScheme.REGULAR):
    density = preset("unit")
    quad = PanelScheme(64, 16)
    basis = sb.SineBasis(0.0, math.pi, 64)
    grams = assembly.assemble(density, basis, n, quad, with_T0=scheme is ritz.TauScheme.DUAL)
    sol = ritz.normalize_h0(ritz.solve(grams, scheme, n), grams.S0)
    return density, quad, grams, ritz.align_sign(sol, np.eye(n)[0])


@lru_cache(maxsize=None)
def euler_reference(k, K_ref=1024):
    return euler_exact(k, K_ref)
