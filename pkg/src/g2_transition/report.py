"""Residual reports produced by the verification suites."""

import json
import math
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class IdentityCheck:
    """The largest residual of one identity over a batch of samples."""

    name: str
    formula: str
    residual: float
    tol: float
    reference: str = ""

    @property
    def passed(self: "IdentityCheck") -> bool:
        """Return True when the residual is finite and below the tolerance."""
        return math.isfinite(self.residual) and self.residual < self.tol

    def to_dict(self: "IdentityCheck") -> dict[str, Any]:
        """Return the JSON form of the check."""
        return {
            "name": self.name,
            "formula": self.formula,
            "reference": self.reference,
            "residual": self.residual,
            "tol": self.tol,
            "pass": self.passed,
        }

    def format_line(self: "IdentityCheck") -> str:
        """Return a one-line text summary."""
        status = "PASS" if self.passed else "FAIL"
        line = f"{status}  {self.name:<34} residual={self.residual:.3e}  tol={self.tol:.1e}  {self.formula}"
        return f"{line}  [{self.reference}]" if self.reference else line


@dataclass(frozen=True)
class IdentityReport:
    """A named list of identity checks with the seed and sample count that produced it."""

    suite: str
    checks: tuple[IdentityCheck, ...] = field(default_factory=tuple)
    sample_count: int = 0
    seed: int = 0

    @property
    def passed(self: "IdentityReport") -> bool:
        """Return True when every check passed."""
        return all(check.passed for check in self.checks)

    @property
    def max_residual(self: "IdentityReport") -> float:
        """Return the largest residual in the report."""
        return max((check.residual for check in self.checks), default=0.0)

    def check(self: "IdentityReport", name: str) -> IdentityCheck:
        """Return the check with the specified name."""
        for candidate in self.checks:
            if candidate.name == name:
                return candidate
        message = f"No check named '{name}' in suite '{self.suite}'"
        raise KeyError(message)

    def to_dict(self: "IdentityReport") -> dict[str, Any]:
        """Return the JSON form of the report."""
        return {
            "suite": self.suite,
            "checks": [check.to_dict() for check in self.checks],
            "seed": self.seed,
        }

    def to_json(self: "IdentityReport") -> str:
        """Serialize the report as JSON text."""
        return json.dumps(self.to_dict(), indent=2)

    def format_lines(self: "IdentityReport") -> list[str]:
        """Return the text form of the report, one line per check."""
        header = f"suite '{self.suite}': {len(self.checks)} checks, {self.sample_count} samples, seed {self.seed}"
        return [header, *(check.format_line() for check in self.checks)]


def combine(suite: str, reports: list[IdentityReport]) -> IdentityReport:
    """Merge several reports into one, prefixing each check with its original suite."""
    checks = tuple(
        IdentityCheck(f"{report.suite}.{check.name}", check.formula, check.residual, check.tol, check.reference)
        for report in reports
        for check in report.checks
    )
    sample_count = sum(report.sample_count for report in reports)
    seed = reports[0].seed if reports else 0
    return IdentityReport(suite, checks, sample_count, seed)
