"""Command line interface: solve, bifurcate, sweep, verify."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from . import assembly, basis as sb, bifurcation as bf, ritz
from .expr import ExprError, resolve_density
from .output import emit, fmt
from .quadrature import PanelScheme, default_scheme
from .sweep import SweepConfig, run_sweep
from .verify import summary, verify

log = logging.getLogger("fracritz")


def _load_config(path) -> dict:
    if path is None:
        return {}
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _merged(args, keys, config: dict) -> dict:
    """Config file values overridden by flags that were actually given."""
    out = {k: config[k] for k in keys if k in config}
    for k in keys:
        v = getattr(args, k, None)
        if v is not None:
            out[k] = v
    return out


def _float_list(text: str) -> list:
    return [float(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list:
    return [int(t) for t in text.split(",") if t.strip()]


def _num(v):
    """JSON-ready float with 17 significant digits."""
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_num(x) for x in v]
    return float(fmt(v))


def _write(obj, out):
    text = json.dumps(obj, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _problem(opts: dict, t: int = 1):
    density = resolve_density(opts.get("rho", "euler"), opts.get("a"), opts.get("b"))
    n = int(opts.get("n", 20))
    panels = opts.get("quad_panels")
    points = int(opts.get("quad_points") or 16)
    scheme = PanelScheme(int(panels), points) if panels else default_scheme(n, t, points)
    tau_scheme = ritz.TauScheme.parse(opts.get("scheme", "regular"))
    basis = sb.SineBasis(density.a, density.b, max(n, 64))
    grams = assembly.assemble(density, basis, n, scheme, with_T0=tau_scheme is ritz.TauScheme.DUAL)
    sol = ritz.solve(grams, tau_scheme, n)
    sol = ritz.normalize_h0(sol, grams.S0)
    sol = ritz.align_sign(sol, np.eye(n)[0])
    return density, scheme, grams, sol


PROBLEM_KEYS = ["rho", "a", "b", "n", "scheme", "quad_points", "quad_panels"]


def cmd_solve(args) -> int:
    opts = _merged(args, PROBLEM_KEYS, _load_config(args.config))
    density, scheme, grams, sol = _problem(opts)
    _write({
        "rho": density.source, "a": density.a, "b": density.b, "n": sol.n,
        "scheme": sol.scheme.name.lower(), "tau": sol.scheme.tau,
        "normalization": sol.normalization,
        "quadrature": {"panels": scheme.panels, "points": scheme.order},
        "values": _num(sol.values),
        "vectors": _num(sol.vectors.T),
    }, args.out)
    return 0


def cmd_bifurcate(args) -> int:
    opts = _merged(args, PROBLEM_KEYS + ["t", "order"], _load_config(args.config))
    t = int(opts.get("t", 1))
    spec = bf.BifurcationSpec(t=t, order=int(opts.get("order", 1)))
    density, scheme, grams, sol = _problem(opts, t)
    res = bf.bifurcate(sol, density, spec, scheme)
    _write({
        "rho": density.source, "a": density.a, "b": density.b, "n": sol.n,
        "scheme": sol.scheme.name.lower(), "t": t, "order": spec.order,
        "nu0": _num(res.nu0), "nu1": _num(res.nu1),
        "nu2": None if res.nu2 is None else _num(res.nu2),
        "v0_coeffs": _num(res.v0_coeffs), "v1_coeffs": _num(res.v1_coeffs),
        "orth_check": _num(res.orth_check),
        "quad_diag": {k: (bool(v) if isinstance(v, (bool, np.bool_)) else _num(v))
                      for k, v in res.quad_diag.items()},
    }, args.out)
    return 0


SWEEP_KEYS = [f.name for f in fields(SweepConfig)]


def cmd_sweep(args) -> int:
    opts = _merged(args, SWEEP_KEYS, _load_config(args.config))
    cfg = SweepConfig.from_dict(opts)
    report = run_sweep(cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in cfg.emit:
        target = out_dir / {"csv": "sweep.csv", "json": "sweep.json", "plotdata": "plotdata"}[name]
        for p in emit(report, name, target):
            log.info("wrote %s", p)
    for name, fit in report.fits.items():
        print(f"{name}: slope {fit.slope:.6f} intercept {fit.intercept:.6f} (points {fit.points})")
    return 0


def cmd_verify(args) -> int:
    results = verify()
    for r in results:
        print(r.line())
    report = summary(results)
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, default=float) + "\n", encoding="utf-8")
    print("ALL PASS" if report["passed"] else "SOME CRITERIA FAILED")
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracritz", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def problem_flags(sp):
        sp.add_argument("--config", help="JSON file with options (flags win)")
        sp.add_argument("--rho", help="density expression or preset (euler, unit)")
        sp.add_argument("--a", type=float)
        sp.add_argument("--b", type=float)
        sp.add_argument("--n", type=int)
        sp.add_argument("--scheme", choices=["regular", "harmonic", "dual"])
        sp.add_argument("--quad-points", dest="quad_points", type=int)
        sp.add_argument("--quad-panels", dest="quad_panels", type=int)
        sp.add_argument("--out", help="output path (default stdout)")

    sp = sub.add_parser("solve", help="Ritz values and vectors")
    problem_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bifurcate", help="bifurcation coefficients nu1, nu2")
    problem_flags(sp)
    sp.add_argument("--t", type=int)
    sp.add_argument("--order", type=int, choices=[1, 2])
    sp.set_defaults(func=cmd_bifurcate)

    sp = sub.add_parser("sweep", help="convergence sweep over n")
    sp.add_argument("--config")
    sp.add_argument("--rho")
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--scheme", choices=["regular", "harmonic", "dual"])
    sp.add_argument("--n-min", dest="n_min", type=int)
    sp.add_argument("--n-max", dest="n_max", type=int)
    sp.add_argument("--n-step", dest="n_step", type=int)
    sp.add_argument("--taus", type=_float_list)
    sp.add_argument("--ts", type=_int_list)
    sp.add_argument("--fit-lo", dest="fit_lo", type=int)
    sp.add_argument("--fit-hi", dest="fit_hi", type=int)
    sp.add_argument("--reference", choices=["exact-euler", "high-n"])
    sp.add_argument("--high-n", dest="high_n", type=int)
    sp.add_argument("--k-ref", dest="k_ref", type=int)
    sp.add_argument("--quad-points", dest="quad_points", type=int)
    sp.add_argument("--quad-panels", dest="quad_panels", type=int)
    sp.add_argument("--emit", type=lambda s: [x.strip() for x in s.split(",") if x.strip()])
    sp.add_argument("--out-dir", dest="out_dir")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the acceptance criteria")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ExprError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
