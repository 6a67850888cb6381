import json
import math

import numpy as np
import pytest

from fracritz.output import emit, fmt, plotdata, read_plotdata, to_csv, to_json
from fracritz.sweep import ConvergenceReport, SweepConfig, fit_loglog, run_sweep, tau_column


@pytest.fixture(scope="module")
def report():
    return run_sweep(SweepConfig())


def test_fit_examples():
    f = fit_loglog([(10, 1e-7), (100, 1e-14), (1000, 1e-21)])
    assert f.slope == pytest.approx(-7.0, abs=1e-12)
    assert f.intercept == pytest.approx(0.0, abs=1e-11)
    assert f.residual <= 1e-12
    f = fit_loglog([(1, 2.0), (2, 0.0), (3, 1.0), (4, 0.5)])
    assert f.excluded == 1 and f.points == 3
    with pytest.raises(ValueError):
        fit_loglog([(1, 1.0), (2, 0.0), (3, -1.0)])


def test_fit_recovers_power_law():
    rng = np.random.default_rng(0)
    ns = np.arange(5, 40)
    errs = 3.0 * ns ** -4.5 * np.exp(rng.normal(0, 1e-3, ns.size))
    assert fit_loglog(zip(ns, errs)).slope == pytest.approx(-4.5, abs=0.01)


def test_tau_column():
    assert tau_column(0.5) == "err_tau_0.5"
    assert tau_column(1.0) == "err_tau_1"


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(n_min=10, n_max=5)
    with pytest.raises(ValueError):
        SweepConfig(fit_lo=4)
    with pytest.raises(ValueError):
        SweepConfig(rho="1", a=0, b=1)
    with pytest.raises(ValueError):
        SweepConfig(reference="high-n", high_n=20)
    with pytest.raises(ValueError):
        SweepConfig(taus=[1.5])
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"nmax": 3})


def test_report_shape(report):
    assert report.column("n").tolist() == list(range(8, 21))
    assert report.columns[:3] == ["n", "lambda1", "err_lambda"]
    assert "err_nu1_t3" in report.fits
    assert not report.diagnostics
    assert report.column("err_lambda")[-1] == pytest.approx(2.795e-8, rel=2e-3)


def test_csv(report, tmp_path):
    text = to_csv(report)
    lines = text.split("\n")
    assert lines[0].startswith("n,lambda1,err_lambda,err_tau_0,")
    assert text.endswith("\n") and "\r" not in text
    assert all(not ln.endswith(",") for ln in lines)
    assert len(lines[1].split(",")) == len(report.columns)
    assert float(lines[-2].split(",")[1]) == report.rows[-1][1]
    path = tmp_path / "s.csv"
    emit(report, "csv", path)
    assert path.read_bytes() == text.encode()


def test_json_round_trip(report, tmp_path):
    text = to_json(report)
    assert json.loads(text)["schema_version"] == "1"
    again = ConvergenceReport.from_json(text)
    assert again.rows == report.rows and again.fits == report.fits
    assert to_json(again) == text


def test_plotdata(report, tmp_path):
    files = emit(report, "plotdata", tmp_path / "pd")
    assert len(files) == sum(c.startswith("err_") for c in report.columns)
    pts = read_plotdata(tmp_path / "pd" / "err_lambda.dat")
    assert pts[0][0] == pytest.approx(8.0, rel=1e-14)
    assert fit_loglog(pts).slope == pytest.approx(report.fits["err_lambda"].slope, abs=1e-10)
    assert plotdata(report)["err_lambda"].startswith("# ")
    with pytest.raises(ValueError):
        emit(report, "xml", tmp_path / "x")


def test_fmt():
    assert fmt(3) == "3"
    assert float(fmt(0.1)) == 0.1
    assert float(fmt(math.pi)) == math.pi


def test_deterministic(report):
    assert to_csv(run_sweep(SweepConfig())) == to_csv(report)


def test_slope_stable_under_fit_window():
    wide = run_sweep(SweepConfig(ts=[1]))
    narrow = run_sweep(SweepConfig(ts=[1], fit_lo=10))
    for name in ("err_lambda", "err_nu1_t1", "err_tau_0.5"):
        assert abs(wide.fits[name].slope - narrow.fits[name].slope) <= 0.5


def test_high_n_reference_agrees():
    exact = run_sweep(SweepConfig(ts=[1, 2]))
    approx = run_sweep(SweepConfig(ts=[1, 2], reference="high-n", high_n=32))
    for name in ("err_lambda", "err_nu1_t1", "err_nu1_t2"):
        a, b = exact.column(name), approx.column(name)
        assert np.max(np.abs(a - b) / a) <= 0.05


def test_custom_density_high_n():
    cfg = SweepConfig(rho="1+x", a=0.0, b=1.0, reference="high-n", n_min=4, n_max=10, fit_lo=4,
                      fit_hi=10, high_n=24, ts=[1], taus=[0.5])
    rep = run_sweep(cfg)
    assert np.all(np.diff(rep.column("lambda1")) <= 1e-12)
    assert rep.fits["err_lambda"].slope < -3
