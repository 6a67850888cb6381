"""Convergence sweeps over the Ritz dimension n and log-log slope fits."""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from . import assembly, basis as sb, bifurcation as bf, ritz
from .expr import resolve_density
from .quadrature import PanelScheme, default_scheme

log = logging.getLogger(__name__)

AXES = "x = log10(n), y = log10(|error|)"
REFERENCES = ("exact-euler", "high-n")


class SweepError(RuntimeError):
    pass


@dataclass
class SweepConfig:
    rho: str = "euler"
    a: Optional[float] = None
    b: Optional[float] = None
    scheme: str = "regular"
    n_min: int = 8
    n_max: int = 20
    n_step: int = 1
    taus: list = field(default_factory=lambda: [0.0, 0.5, 0.75, 1.0])
    ts: list = field(default_factory=lambda: [1, 2, 3])
    reference: str = "exact-euler"
    high_n: int = 32
    fit_lo: int = 8
    fit_hi: int = 20
    quad_points: int = 16
    quad_panels: Optional[int] = None
    k_ref: Optional[int] = None
    emit: list = field(default_factory=lambda: ["csv", "json"])
    out_dir: str = "."

    def __post_init__(self):
        self.taus = [float(t) for t in self.taus]
        self.ts = [int(t) for t in self.ts]
        if self.n_min < 1 or self.n_max < self.n_min or self.n_step < 1:
            raise ValueError("empty n range")
        if not (self.n_min <= self.fit_lo <= self.fit_hi <= self.n_max):
            raise ValueError("fit range must lie inside the n range")
        if any(not 0.0 <= t < 1.375 for t in self.taus):
            raise ValueError("taus must lie in [0, 1.375)")
        if self.reference not in REFERENCES:
            raise ValueError(f"reference must be one of {REFERENCES}")
        if self.reference == "exact-euler" and self.rho != "euler":
            raise ValueError("exact-euler reference requires the euler preset")
        if self.reference == "high-n" and self.high_n <= self.n_max:
            raise ValueError("high_n must exceed n_max")
        ritz.TauScheme.parse(self.scheme)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @property
    def ns(self) -> list:
        return list(range(self.n_min, self.n_max + 1, self.n_step))

    def largest_n(self) -> int:
        return self.high_n if self.reference == "high-n" else self.n_max

    def quad_scheme(self) -> PanelScheme:
        if self.quad_panels is not None:
            return PanelScheme(self.quad_panels, self.quad_points)
        return default_scheme(self.largest_n(), max(self.ts, default=1), self.quad_points)


@dataclass
class FitResult:
    slope: float
    intercept: float
    residual: float
    points: int
    excluded: int = 0


@dataclass
class ConvergenceReport:
    config: dict
    columns: list
    rows: list
    fits: dict
    targets: dict
    axes: str = AXES
    diagnostics: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema_version"] = "1"
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ConvergenceReport":
        d = dict(d)
        d.pop("schema_version", None)
        d["fits"] = {k: FitResult(**v) for k, v in d["fits"].items()}
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ConvergenceReport":
        return cls.from_dict(json.loads(text))


def fit_loglog(points: Sequence) -> FitResult:
    """Least squares line through (log10 n, log10 error); nonpositive errors are dropped."""
    pts = [(float(n), float(e)) for n, e in points]
    good = [(n, e) for n, e in pts if e > 0 and np.isfinite(e)]
    if len(good) < 3:
        raise ValueError(f"need at least 3 positive errors to fit, got {len(good)}")
    x = np.log10([n for n, _ in good])
    y = np.log10([e for _, e in good])
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * x + intercept)
    return FitResult(float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2))),
                     len(good), len(pts) - len(good))


def tau_column(tau: float) -> str:
    return f"err_tau_{tau:g}"


def theory_targets(scheme: ritz.TauScheme, taus, ts) -> dict:
    """Predicted log-log slopes for the error columns (for reporting only)."""
    out = {}
    if scheme is ritz.TauScheme.REGULAR:
        out["err_lambda"] = {"slope": -7.22504, "source": "published fit; theory O(n^-7)"}
        for tau in taus:
            slope = -4.5 if tau == 0 else 2 * tau - 4.5
            out[tau_column(tau)] = {"slope": slope, "source": "theory O(n^(2 tau - 9/2))"}
        published = {1: -7.29132, 2: -6.97158, 3: -6.26615}
        for t in ts:
            if t in published:
                out[f"err_nu1_t{t}"] = {"slope": published[t], "source": "published fit"}
    elif scheme is ritz.TauScheme.HARMONIC:
        out["err_lambda"] = {"slope": -5.0, "source": "theory, projection estimate n^(4 tau - 9) at tau = 1"}
    else:
        out["err_lambda"] = {"slope": -9.0, "source": "theory, projection estimate n^(4 tau - 9) at tau = 0"}
    return out


@dataclass
class _Reference:
    lam: float
    coeffs: np.ndarray
    nu1: dict


def _reference(cfg: SweepConfig, density, grams, scheme: PanelScheme) -> _Reference:
    k_ref = cfg.k_ref or max(512, 8 * cfg.largest_n())
    if cfg.reference == "exact-euler":
        lam, u, coeffs = bf.euler_exact(1, k_ref)
        nu1 = {}
        for t in cfg.ts:
            if t in (1, 2, 3):
                nu1[t] = bf.euler_nu1_exact(t)
            else:
                x, w = scheme.nodes_weights(density.a, density.b)
                du = bf.euler_eigenfunction(1, 1)(x)
                nu1[t] = float(-(lam / (2 * t)) * np.dot(w * density(x), u(x) ** 2 * du ** (2 * t)))
        return _Reference(lam, coeffs, nu1)
    sol = ritz.solve(grams, ritz.TauScheme.REGULAR, cfg.high_n)
    sol = ritz.normalize_h0(sol, grams.S0)
    sol = ritz.align_sign(sol, np.eye(sol.n)[0])
    nu1 = {t: bf.nu1(sol, density, bf.BifurcationSpec(t), scheme) for t in cfg.ts}
    return _Reference(float(sol.values[0]), sol.column(0).copy(), nu1)


def run_sweep(cfg: SweepConfig) -> ConvergenceReport:
    density = resolve_density(cfg.rho, cfg.a, cfg.b)
    scheme = cfg.quad_scheme()
    tau_scheme = ritz.TauScheme.parse(cfg.scheme)
    n_big = cfg.largest_n()
    k_ref = cfg.k_ref or max(512, 8 * n_big)
    basis = sb.SineBasis(density.a, density.b, max(k_ref, n_big))
    grams = assembly.assemble(density, basis, n_big, scheme,
                              with_T0=tau_scheme is ritz.TauScheme.DUAL)
    ref = _reference(cfg, density, grams, scheme)

    columns = ["n", "lambda1", "err_lambda", *[tau_column(t) for t in cfg.taus]]
    for t in cfg.ts:
        columns += [f"nu1_t{t}", f"err_nu1_t{t}"]
    rows, diagnostics = [], []
    for n in cfg.ns:
        try:
            sol = ritz.solve(grams, tau_scheme, n)
            sol = ritz.align_sign(ritz.normalize_h0(sol, grams.S0), ref.coeffs)
            errs = ritz.error_norms(sol, ref.coeffs, cfg.taus)
            lam1 = float(sol.values[0])
            row = [n, lam1, abs(lam1 - ref.lam), *[errs[t] for t in cfg.taus]]
            for t in cfg.ts:
                v = bf.nu1(sol, density, bf.BifurcationSpec(t), scheme)
                row += [v, abs(v - ref.nu1[t])]
            rows.append(row)
        except Exception as exc:  # a failing row is recorded, not fatal
            log.warning("row n=%d failed: %s", n, exc)
            diagnostics.append({"n": n, "error": f"{type(exc).__name__}: {exc}"})
    if not rows:
        raise SweepError(f"no successful rows: {diagnostics}")

    fits = {}
    fit_rows = [r for r in rows if cfg.fit_lo <= r[0] <= cfg.fit_hi]
    for j, name in enumerate(columns):
        if not name.startswith("err_"):
            continue
        try:
            fits[name] = fit_loglog([(r[0], r[j]) for r in fit_rows])
        except ValueError as exc:
            diagnostics.append({"fit": name, "error": str(exc)})
    cfg_dict = asdict(cfg)
    return ConvergenceReport(cfg_dict, columns, rows, fits,
                             theory_targets(tau_scheme, cfg.taus, cfg.ts),
                             diagnostics=diagnostics)
