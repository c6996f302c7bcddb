"""Tests for the verification reports."""

import json
import math

import pytest

from g2_transition.report import IdentityCheck, IdentityReport, combine


@pytest.mark.parametrize(
    ("residual", "tol", "expected"),
    [
        (0.0, 1e-10, True),
        (1e-11, 1e-10, True),
        (1e-10, 1e-10, False),
        (1.0, 1e-10, False),
        (math.nan, 1e-10, False),
        (math.inf, 1e-10, False),
    ],
)
def test_check_passes_below_tolerance(residual: float, tol: float, expected: bool) -> None:
    """Does a check pass only for a finite residual strictly below the tolerance?"""
    assert IdentityCheck("moufang", "(a(bx))a = (ab)(xa)", residual, tol).passed is expected


def test_check_forms() -> None:
    """Do the JSON and text forms carry the outcome?"""
    check = IdentityCheck("flexible", "(ab)a = a(ba)", 2.5e-16, 1e-10)
    assert check.to_dict() == {
        "name": "flexible",
        "formula": "(ab)a = a(ba)",
        "reference": "",
        "residual": 2.5e-16,
        "tol": 1e-10,
        "pass": True,
    }
    assert check.format_line().startswith("PASS  flexible")
    assert IdentityCheck("flexible", "(ab)a = a(ba)", 1.0, 1e-10).format_line().startswith("FAIL")


def test_check_reference() -> None:
    """Do the JSON and text forms carry the named result the check verifies?"""
    check = IdentityCheck("moufang", "(a(bx))a = (ab)(xa)", 1e-16, 1e-10, reference="Moufang identity")
    assert check.to_dict()["reference"] == "Moufang identity"
    assert check.format_line().endswith("(a(bx))a = (ab)(xa)  [Moufang identity]")
    combined = combine("all", [IdentityReport("algebra", (check,), 10, 5)])
    assert combined.check("algebra.moufang").reference == "Moufang identity"


def test_report() -> None:
    """Does a report pass only when every check passes?"""
    good = IdentityCheck("a", "x = x", 0.0, 1e-10)
    bad = IdentityCheck("b", "x = y", 0.5, 1e-10)
    report = IdentityReport("algebra", (good, bad), 100, 7)
    assert not report.passed
    assert report.max_residual == 0.5
    assert report.check("b") is bad
    with pytest.raises(KeyError):
        report.check("c")
    assert IdentityReport("algebra", (good,), 100, 7).passed
    assert IdentityReport("empty").max_residual == 0.0


def test_report_json() -> None:
    """Does the JSON form list suite, checks and seed?"""
    report = IdentityReport("g2", (IdentityCheck("orthogonal", "M^T M = I", 1e-16, 1e-9),), 10, 3)
    payload = json.loads(report.to_json())
    assert payload["suite"] == "g2"
    assert payload["seed"] == 3
    assert payload["checks"][0]["pass"] is True


def test_report_lines() -> None:
    """Is there a header line and then one line per check?"""
    checks = tuple(IdentityCheck(name, "x = x", 0.0, 1e-9) for name in ("a", "b", "c"))
    lines = IdentityReport("charts", checks, 50, 42).format_lines()
    assert len(lines) == 4
    assert lines[0] == "suite 'charts': 3 checks, 50 samples, seed 42"


def test_combine() -> None:
    """Does combining prefix each check with its suite?"""
    first = IdentityReport("algebra", (IdentityCheck("moufang", "m", 0.0, 1e-10),), 10, 5)
    second = IdentityReport("g2", (IdentityCheck("inverse", "i", 2.0, 1e-9),), 20, 5)
    combined = combine("all", [first, second])
    assert [check.name for check in combined.checks] == ["algebra.moufang", "g2.inverse"]
    assert combined.sample_count == 30
    assert combined.seed == 5
    assert not combined.passed
