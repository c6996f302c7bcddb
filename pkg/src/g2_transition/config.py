"""Run settings shared by the command line entry points."""

from dataclasses import dataclass, replace
from enum import StrEnum
from pathlib import Path

from .exceptions import PreconditionError

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 1000
DEFAULT_TOL_ALGEBRA = 1e-10
DEFAULT_TOL_BUNDLE = 1e-9
DEFAULT_FD_STEP = 1e-5


class OutputFormat(StrEnum):
    """Supported serializations for reports and samples."""

    Json = "json"
    Csv = "csv"
    Text = "text"


class Suite(StrEnum):
    """Verification suites that can be run from the command line."""

    Algebra = "algebra"
    G2 = "g2"
    Charts = "charts"
    Transition = "transition"
    All = "all"


@dataclass(frozen=True)
class RunConfig:
    """Seed, sample count, tolerances and output settings for one command."""

    seed: int = DEFAULT_SEED
    n_samples: int = DEFAULT_SAMPLES
    tol_algebra: float = DEFAULT_TOL_ALGEBRA
    tol_bundle: float = DEFAULT_TOL_BUNDLE
    fd_step: float = DEFAULT_FD_STEP
    output_path: Path | None = None
    format: OutputFormat = OutputFormat.Text

    def __post_init__(self: "RunConfig") -> None:
        """Reject settings that no command can run with."""
        if self.n_samples < 1:
            message = f"Sample count must be at least 1, got {self.n_samples}"
            raise PreconditionError(message)
        for name in ("tol_algebra", "tol_bundle", "fd_step"):
            value = getattr(self, name)
            if not value > 0:
                message = f"{name} must be positive, got {value}"
                raise PreconditionError(message)
        if self.seed < 0:
            message = f"Seed must be a non-negative integer, got {self.seed}"
            raise PreconditionError(message)

    def with_tol(self: "RunConfig", tol: float | None) -> "RunConfig":
        """Return a copy with both tolerances replaced by tol, or self when tol is None."""
        if tol is None:
            return self
        return replace(self, tol_algebra=tol, tol_bundle=tol)
