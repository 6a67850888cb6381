"""Writing convergence reports as CSV, JSON and two-column plot data."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .sweep import AXES, ConvergenceReport

FORMATS = ("csv", "json", "plotdata")


def fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def to_csv(report: ConvergenceReport) -> str:
    lines = [",".join(report.columns)]
    for row in report.rows:
        lines.append(",".join(fmt(int(v)) if name == "n" else fmt(v)
                              for name, v in zip(report.columns, row)))
    return "\n".join(lines) + "\n"


def to_json(report: ConvergenceReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def plotdata(report: ConvergenceReport) -> dict:
    """{quantity: text} with one '<log10 n> <log10 error>' line per positive error."""
    out = {}
    for name in report.columns:
        if not name.startswith("err_"):
            continue
        lines = [f"# {AXES}"]
        for n, e in zip(report.column("n"), report.column(name)):
            if e > 0:
                lines.append(f"{fmt(math.log10(n))} {fmt(math.log10(e))}")
        out[name] = "\n".join(lines) + "\n"
    return out


def emit(report: ConvergenceReport, fmt_name: str, path) -> list:
    """Write ``report`` in one format.  For plotdata ``path`` is a directory."""
    path = Path(path)
    if fmt_name == "csv":
        path.write_text(to_csv(report), encoding="utf-8", newline="\n")
        return [path]
    if fmt_name == "json":
        path.write_text(to_json(report), encoding="utf-8", newline="\n")
        return [path]
    if fmt_name == "plotdata":
        path.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in plotdata(report).items():
            p = path / f"{name}.dat"
            p.write_text(text, encoding="utf-8", newline="\n")
            written.append(p)
        return written
    raise ValueError(f"unknown format {fmt_name!r}; choose from {FORMATS}")


def read_plotdata(path):
    pts = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            x, y = map(float, line.split())
            pts.append((10 ** x, 10 ** y))
    return pts
