"""Acceptance criteria, one test each, with a pass/fail line printed per criterion."""
import pytest

from fracritz import verify as vf

RUNTIME_LIMIT = {fn.__name__: 60.0 for fn in vf.CRITERIA}
RUNTIME_LIMIT.update({"c01_eigenvalue": 5.0, "c02_table": 15.0})


@pytest.mark.parametrize("fn", vf.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(fn):
    result = vf.run_criterion(fn)
    print(result.line())
    if result.detail:
        print("   ", result.detail)
    assert result.passed, result.line()
    assert result.seconds < RUNTIME_LIMIT[fn.__name__]


def test_harness_reports_corrupted_tolerance():
    result = vf.run_criterion(vf.c01_eigenvalue, {"eig_window": (1e-12, 2e-12)})
    print(result.line())
    assert not result.passed
    assert "measured=" in result.line() and "expected=" in result.line()


def test_harness_reports_exceptions_as_failures():
    def broken(ctx):
        raise RuntimeError("boom")
    result = vf.run_criterion(broken)
    assert not result.passed and "boom" in result.detail
