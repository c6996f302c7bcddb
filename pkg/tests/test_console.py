"""Tests for the g2_transition command line interface."""

import json
import logging
import time
from pathlib import Path

import click
import numpy as np
import pytest
from click.testing import CliRunner

from g2_transition import console, g2_group
from g2_transition.exceptions import PoleSingularityError


def test_console():  # noqa: ANN201
    """Does it invoke the base command group?"""
    runner = CliRunner()
    result = runner.invoke(console.cli)
    assert result.exit_code == 0
    assert "Show this message and exit." in result.output


def test_subcommand():  # noqa: ANN201
    """Does it invoke a subcommand?"""
    command_was_invoked_message = "subcommand_name invoked"

    @click.command("subcommand_name")
    def subcommand_name() -> None:
        print(command_was_invoked_message)  # noqa: T201 Allow print for this test

    console.cli.add_command(subcommand_name)

    runner = CliRunner()
    result = runner.invoke(
        console.cli,
        args=["subcommand_name"],
    )
    assert result.exit_code == 0
    assert result.stdout.strip() == command_was_invoked_message


@pytest.mark.parametrize(
    ("quiet", "verbose", "expected_log_level", "assert_message"),
    [
        (False, False, logging.INFO, "Default logging level should be 'logging.INFO'"),
        (True, False, logging.ERROR, "Quiet logging level should be 'logging.ERROR'"),
        (False, True, logging.DEBUG, "Verbose logging level should be 'logging.DEBUG'"),
        (True, True, logging.ERROR, "--quiet should override --verbose"),
    ],
)
def test_verbosity_truth_table(quiet, verbose, expected_log_level, assert_message):  # noqa: ANN001 ANN201
    """Validate all combinations of --quiet and --verbose."""
    log_level = console.get_logging_level(quiet, verbose)
    assert log_level == expected_log_level, assert_message


@pytest.mark.parametrize("suite", ["algebra", "g2", "charts", "transition"])
def test_verify_passes(suite: str, caplog: pytest.LogCaptureFixture) -> None:
    """Does each suite pass and exit with 0?"""
    caplog.set_level(logging.INFO)
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["verify", suite, "--samples", "50", "--seed", "1"])
    assert result.exit_code == 0, result.output
    assert "identities passed" in caplog.text


def test_verify_json_report(tmp_path: Path) -> None:
    """Does --format json write the report with a pass flag per check?"""
    report_path = tmp_path / "report.json"
    runner = CliRunner()
    result = runner.invoke(
        console.cli,
        args=["verify", "algebra", "--samples", "100", "--format", "json", "--out", str(report_path)],
    )
    assert result.exit_code == 0, result.output
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["suite"] == "algebra"
    assert report["seed"] == 42
    assert all(check["pass"] for check in report["checks"])
    assert {"name", "formula", "reference", "residual", "tol", "pass"} == set(report["checks"][0])
    assert all(check["reference"] for check in report["checks"])


def test_verify_all(tmp_path: Path) -> None:
    """Does the all suite prefix every check with its suite and name the result it verifies?"""
    report_path = tmp_path / "report.json"
    runner = CliRunner()
    result = runner.invoke(
        console.cli,
        args=["verify", "all", "--samples", "20", "--format", "json", "--out", str(report_path)],
    )
    assert result.exit_code == 0, result.output
    checks = json.loads(report_path.read_text(encoding="utf-8"))["checks"]
    assert {check["name"].split(".")[0] for check in checks} == {"algebra", "g2", "charts", "transition"}
    assert all(check["reference"] for check in checks)


def test_verify_failure_exit_code(caplog: pytest.LogCaptureFixture) -> None:
    """Does an impossible tolerance make the suite fail with exit code 1?"""
    caplog.set_level(logging.INFO)
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["verify", "algebra", "--samples", "20", "--tol", "1e-30"])
    assert result.exit_code == 1
    assert "FAIL" in caplog.text
    failed = [record for record in caplog.records if getattr(record, "passed", True) is False]
    assert failed


def test_verify_algebra_at_scale() -> None:
    """Does the algebra suite pass on 100000 samples within five seconds?"""
    runner = CliRunner()
    start = time.perf_counter()
    result = runner.invoke(console.cli, args=["verify", "algebra", "--samples", "100000", "--seed", "42"])
    elapsed = time.perf_counter() - start
    assert result.exit_code == 0, result.output
    assert elapsed < 5.0


def test_verify_reports_domain_error(monkeypatch: pytest.MonkeyPatch, caplog: pytest.LogCaptureFixture) -> None:
    """Does a suite that raises a domain error exit with 1 and log the residual instead of a traceback?"""

    def raise_pole_error(*_: object) -> None:
        message = "Point is at the pole of U1"
        raise PoleSingularityError(message, residual=2.5e-7)

    monkeypatch.setattr(g2_group, "verify_g2_group", raise_pole_error)
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["verify", "g2", "--samples", "10"])
    assert result.exit_code == 1
    assert isinstance(result.exception, SystemExit)
    assert "Point is at the pole of U1" in caplog.text
    assert "residual 2.500e-07" in caplog.text


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "algebra", "--samples", "0"],
        ["verify", "algebra", "--tol", "-1"],
        ["verify", "algebra", "--seed", "-3"],
        ["verify", "octonions"],
        ["sample", "0"],
        ["theta", "1", "0", "0"],
        ["theta", "2", "0", "0", "0", "0", "0"],
        ["degree", "--fd-step", "0"],
    ],
)
def test_usage_errors(args: list[str]) -> None:
    """Does it reject bad arguments with exit code 2?"""
    runner = CliRunner()
    result = runner.invoke(console.cli, args=args)
    assert result.exit_code == 2, result.output


def test_theta_json(tmp_path: Path) -> None:
    """Does it write theta(1, 0, 0) as rows of [re, im] pairs?"""
    output_path = tmp_path / "theta.json"
    runner = CliRunner()
    result = runner.invoke(
        console.cli,
        args=["theta", "1", "0", "0", "0", "0", "0", "--format", "json", "--out", str(output_path)],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(output_path.read_text(encoding="utf-8"))
    rows = np.array(payload["theta"]["rows"])
    assert np.array_equal(rows[..., 0], [[1, 0, 0], [0, 0, 1], [0, -1, 0]])
    assert np.array_equal(rows[..., 1], np.zeros((3, 3)))
    assert payload["z"] == {"u": [1.0, 0.0], "v": [0.0, 0.0], "w": [0.0, 0.0]}


def test_theta_negative_coordinates() -> None:
    """Does it read negative coordinates as numbers rather than options?"""
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["theta", "0", "0", "-1", "0", "0", "0"])
    assert result.exit_code == 0, result.output
    assert result.stdout.startswith("theta(z) =")


def test_theta_cross_check(tmp_path: Path) -> None:
    """Does --cross-check report the distance to the chart computation?"""
    output_path = tmp_path / "theta.json"
    runner = CliRunner()
    result = runner.invoke(
        console.cli,
        args=[
            "theta",
            *("0.6", "0", "0", "0.8", "0", "0"),
            "--cross-check",
            *("--format", "json"),
            *("--out", str(output_path)),
        ],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(output_path.read_text(encoding="utf-8"))
    assert payload["max_difference"] < 1e-9
    assert "charts" in payload


def test_theta_normalizes_nearly_unit_input(caplog: pytest.LogCaptureFixture) -> None:
    """Does it accept a point slightly off S5 and warn?"""
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["theta", "1.0001", "0", "0", "0", "0", "0"])
    assert result.exit_code == 0, result.output
    assert "Normalizing" in caplog.text


def test_sample_is_reproducible(tmp_path: Path) -> None:
    """Does the same seed write the same CSV twice?"""
    paths = [tmp_path / "first.csv", tmp_path / "second.csv"]
    runner = CliRunner()
    for path in paths:
        result = runner.invoke(
            console.cli,
            args=["sample", "10", "--seed", "7", "--format", "csv", "--out", str(path)],
        )
        assert result.exit_code == 0, result.output
    first, second = (path.read_text(encoding="utf-8") for path in paths)
    assert first == second
    lines = first.splitlines()
    assert len(lines) == 11
    assert lines[0].startswith("u_re,u_im,v_re,v_im,w_re,w_im,t11_re,t11_im")
    assert len(lines[1].split(",")) == 24


def test_sample_json() -> None:
    """Does it echo JSON samples to stdout?"""
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["-q", "sample", "3", "--format", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["seed"] == 42
    assert len(payload["samples"]) == 3


def test_degree() -> None:
    """Does it report degree 2 at the default value?"""
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["degree"])
    assert result.exit_code == 0, result.output
    assert "signs = (+,+)" in result.stdout
    assert "degree = 2" in result.stdout


@pytest.mark.parametrize(
    "args",
    [
        ["--fd-step", "1e-3"],
        ["--value", "0.99995", "0", "0.01", "0", "0", "0"],
    ],
)
def test_degree_options(args: list[str], tmp_path: Path) -> None:
    """Does the degree stay 2 for another step or a nearby value?"""
    output_path = tmp_path / "degree.json"
    runner = CliRunner()
    result = runner.invoke(console.cli, args=["degree", *args, "--format", "json", "--out", str(output_path)])
    assert result.exit_code == 0, result.output
    payload = json.loads(output_path.read_text(encoding="utf-8"))
    assert payload["degree"] == 2
    assert [preimage["sign"] for preimage in payload["preimages"]] == [1, 1]


def test_unwritable_output(tmp_path: Path) -> None:
    """Does it fail cleanly when the output file cannot be written?"""
    runner = CliRunner()
    result = runner.invoke(
        console.cli,
        args=["theta", "1", "0", "0", "0", "0", "0", "--out", str(tmp_path / "missing" / "theta.txt")],
    )
    assert result.exit_code == 1
    assert "Could not open file" in result.output
