# tests/test_verify.py
import io

import pytest

from src.cli import CommandConfig, cmd_verify
from src.errors import BadParams
from src.liealg import KINEMATICAL_NAMES, catalog
from src.verify import GOLDEN, GOLDEN_SIGNS, check_names, run_suite, select_checks


def swapped(name):
    # so32 的位置放上 iso31
    return catalog("iso31") if name == "so32" else catalog(name)


def test_registry_names():
    names = check_names()
    assert len(names) == len(set(names))
    for key in KINEMATICAL_NAMES:
        assert f"golden:{key}" in names
        assert f"invariance:{key}" in names
    assert "mlp:carroll" in names and "dependency" in names
    assert set(GOLDEN) == set(KINEMATICAL_NAMES) - {"static"}


def test_select_checks():
    assert len(select_checks(["golden"])) == len(KINEMATICAL_NAMES)
    assert [c.name for c in select_checks(["jacobi", "golden:iso4"])] == ["golden:iso4", "jacobi"]
    assert len(select_checks(None)) == len(check_names())
    with pytest.raises(BadParams):
        select_checks(["nonsense"])


def test_cheap_checks_pass():
    report = run_suite(["dependency", "jacobi", "golden:galilei"], workers=2)
    assert report.passed
    assert report.first_failure is None
    doc = report.to_json()
    assert doc["total"] == 3 and doc["failed"] == 0


def test_swapped_algebra_is_caught():
    report = run_suite(["golden:so32", "invariance:so32"], resolve=swapped)
    assert not report.passed
    first = report.first_failure
    assert first.name == "invariance:so32"
    assert "NonInvariantCoefficient" in first.detail
    assert report.results[0].passed


def test_cmd_verify_reports_first_failure(capsys):
    cfg = CommandConfig("verify", only="invariance:so32", workers=1)
    buf = io.StringIO()
    assert cmd_verify(cfg, buf, resolve=swapped) == 1
    assert "first failure: invariance:so32" in buf.getvalue()
    assert "verify: invariance:so32 failed" in capsys.readouterr().err


def test_golden_signs_are_exact(monkeypatch):
    report = run_suite(["golden:so32", "golden:iso4"], workers=1)
    assert report.passed
    assert "recorded signs (1, -1)" in report.results[1].detail

    monkeypatch.setitem(GOLDEN_SIGNS, "so32", (1, -1))
    monkeypatch.delitem(GOLDEN_SIGNS, "iso4")
    report = run_suite(["golden:so32", "golden:iso4"], workers=1)
    assert [r.passed for r in report.results] == [False, False]
    assert "coefficient of T^1" in report.results[0].detail
    assert "coefficient of T^1" in report.results[1].detail
