"""Tests for the click logging handler and formatter."""

import logging

import click
import pytest

from g2_transition import tracelog


def make_record(message: str, level: int, **extra: object) -> logging.LogRecord:
    """Build a log record as a logger would."""
    record = logging.LogRecord("g2_transition.test", level, __file__, 1, message, None, None)
    for name, value in extra.items():
        setattr(record, name, value)
    return record


@pytest.mark.parametrize(
    ("passed", "color"),
    [
        (True, "green"),
        (False, "red"),
    ],
)
def test_outcome_colors(passed: bool, color: str) -> None:
    """Does it color verification results by outcome?"""
    formatter = tracelog.ColorFormatter(logging.INFO)
    level = logging.INFO if passed else logging.ERROR
    formatted = formatter.format(make_record("PASS  moufang", level, passed=passed))
    assert click.style("PASS  moufang", fg=color) in formatted


def test_plain_messages() -> None:
    """Does it leave other records in the default message color?"""
    formatter = tracelog.ColorFormatter("INFO")
    formatted = formatter.format(make_record("Sampling", logging.INFO))
    assert click.style("Sampling", fg="bright_white") in formatted


def test_unknown_level() -> None:
    """Does it reject an unknown level name?"""
    with pytest.raises(ValueError, match="Unknown level"):
        tracelog.ColorFormatter("LOUD")


def test_log_outcome(caplog: pytest.LogCaptureFixture) -> None:
    """Does it log passing results at INFO and failing results at ERROR?"""
    logger = logging.getLogger("g2_transition.test")
    with caplog.at_level(logging.INFO):
        tracelog.log_outcome(logger, "PASS flexible", passed=True)
        tracelog.log_outcome(logger, "FAIL moufang", passed=False)
    assert [record.levelno for record in caplog.records] == [logging.INFO, logging.ERROR]
    assert [record.passed for record in caplog.records] == [True, False]


def test_build_click_handler() -> None:
    """Does the handler carry the requested level and a color formatter?"""
    handler = tracelog.build_click_handler(logging.DEBUG)
    assert handler.level == logging.DEBUG
    assert isinstance(handler.formatter, tracelog.ColorFormatter)
