"""Spectral Rayleigh-Ritz eigenpairs of -u'' = lambda rho u in fractional norms,
with bifurcation coefficients for the rotating-string family."""

from .expr import DensitySpec, parse, preset, resolve_density, validate_density
from .quadrature import PanelScheme, default_scheme, gauss_legendre, integrate, integrate_split
from .basis import SineBasis, m_norm, sine_coeffs, synth
from .assembly import GramSet, assemble
from .ritz import RitzSolution, TauScheme, align_sign, error_norms, normalize_h0, solve
from .bifurcation import BifurcationResult, BifurcationSpec, bifurcate, euler_exact, euler_nu1_exact
from .sweep import ConvergenceReport, SweepConfig, fit_loglog, run_sweep

__version__ = "0.1.0"
