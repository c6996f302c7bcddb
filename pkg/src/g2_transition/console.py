"""Command line interface for g2_transition."""

import functools
import json
import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click
import numpy as np

from . import bundle_charts, cayley_dickson, g2_group, sampling, tracelog, transition
from .config import (
    DEFAULT_FD_STEP,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    OutputFormat,
    RunConfig,
    Suite,
)
from .exceptions import BundleError, PreconditionError, SingularJacobianError
from .report import IdentityReport, combine

logger = logging.getLogger(__name__)

_EXIT_VERIFICATION_FAILURE = 1

UNIT_TOL = 1e-9
AUTO_NORMALIZE_TOL = 1e-3


@click.group(invoke_without_command=True)
@click.help_option()
@click.option("-q", "--quiet", is_flag=True, default=False, help="Show only error messages.")
@click.option("-v", "--verbose", is_flag=True, default=False, help="Enable verbose messages.")
@click.version_option()
@click.pass_context
def cli(ctx: click.Context, quiet: bool, verbose: bool) -> None:
    """Octonions, G2 and the transition function of the SU(3)-bundle G2 -> S6."""
    log_level = get_logging_level(quiet, verbose)
    tracelog.initialize(log_level)

    if ctx.invoked_subcommand:
        pass
    else:
        cli(["--help"])


def run_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """Add the seed, sample, tolerance, step and output options and pass them as a RunConfig."""

    @click.option("--seed", type=click.IntRange(min=0), default=DEFAULT_SEED, show_default=True, help="Random seed.")
    @click.option(
        "--samples",
        type=int,
        default=DEFAULT_SAMPLES,
        show_default=True,
        help="Number of random samples.",
    )
    @click.option("--tol", type=float, default=None, help="Override every pass threshold.")
    @click.option(
        "--fd-step",
        type=float,
        default=DEFAULT_FD_STEP,
        show_default=True,
        help="Central difference step for Jacobians.",
    )
    @click.option(
        "--out",
        "output_path",
        type=click.Path(dir_okay=False, writable=True, path_type=Path),
        default=None,
        help="Write the result to a file instead of stdout.",
    )
    @click.option(
        "--format",
        "output_format",
        type=click.Choice([member.value for member in OutputFormat]),
        default=OutputFormat.Text.value,
        show_default=True,
        help="Output format.",
    )
    @functools.wraps(command)
    def wrapper(
        seed: int,
        samples: int,
        tol: float | None,
        fd_step: float,
        output_path: Path | None,
        output_format: str,
        **kwargs: Any,  # noqa: ANN401
    ) -> Any:  # noqa: ANN401
        try:
            config = RunConfig(
                seed=seed,
                n_samples=samples,
                fd_step=fd_step,
                output_path=output_path,
                format=OutputFormat(output_format),
            ).with_tol(tol)
        except PreconditionError as error:
            raise click.UsageError(str(error)) from error
        return command(config=config, **kwargs)

    return wrapper


@cli.command()
@click.argument("suite", type=click.Choice([member.value for member in Suite]))
@run_options
@click.help_option()
def verify(suite: str, config: RunConfig) -> None:
    """Run a verification suite and exit with 1 when any identity fails."""
    try:
        report = run_suite(Suite(suite), config)
    except BundleError as error:
        residual = "n/a" if error.residual is None else f"{error.residual:.3e}"
        logger.error(f"Suite '{suite}' stopped: {error} (residual {residual})")
        raise SystemExit(_EXIT_VERIFICATION_FAILURE) from error

    if config.format == OutputFormat.Json:
        emit(report.to_json(), config.output_path)
    else:
        lines = report.format_lines()
        logger.info(lines[0])
        for check, line in zip(report.checks, lines[1:], strict=True):
            tracelog.log_outcome(logger, line, passed=check.passed)
        if config.output_path:
            emit("\n".join(lines), config.output_path)

    if not report.passed:
        failed = [check.name for check in report.checks if not check.passed]
        logger.error(f"{len(failed)} identities failed: {', '.join(failed)}")
        raise SystemExit(_EXIT_VERIFICATION_FAILURE)
    logger.info(f"All {len(report.checks)} identities passed")


def run_suite(suite: Suite, config: RunConfig) -> IdentityReport:
    """Run the named suite, or all suites, with the settings from config."""
    runners: dict[Suite, Callable[[], IdentityReport]] = {
        Suite.Algebra: lambda: cayley_dickson.verify_algebra_identities(
            config.n_samples,
            config.seed,
            config.tol_algebra,
        ),
        Suite.G2: lambda: g2_group.verify_g2_group(config.n_samples, config.seed, config.tol_bundle),
        Suite.Charts: lambda: bundle_charts.verify_bundle_charts(config.n_samples, config.seed, config.tol_bundle),
        Suite.Transition: lambda: transition.verify_transition(
            config.n_samples,
            config.seed,
            config.tol_bundle,
            config.fd_step,
        ),
    }
    if suite == Suite.All:
        return combine(Suite.All.value, [runner() for runner in runners.values()])
    return runners[suite]()


@cli.command(context_settings={"ignore_unknown_options": True})
@click.argument("coordinates", nargs=6, type=float, metavar="U_RE U_IM V_RE V_IM W_RE W_IM")
@click.option("--cross-check", is_flag=True, default=False, help="Also compute the transition from the two charts.")
@run_options
@click.help_option()
def theta(coordinates: tuple[float, ...], cross_check: bool, config: RunConfig) -> None:
    """Evaluate the transition function at a point of S5."""
    z = parse_equator_point(coordinates)
    closed_form = transition.theta_closed_form(z)
    payload: dict[str, Any] = {"z": z.to_json(), "theta": closed_form.to_json()}
    lines = ["theta(z) =", *format_matrix(closed_form.entries)]

    difference = 0.0
    if cross_check:
        from_charts = transition.theta_from_charts(z)
        difference = closed_form.max_difference(from_charts)
        payload["charts"] = from_charts.to_json()
        payload["max_difference"] = difference
        lines += ["t12(embed(z))^t =", *format_matrix(from_charts.entries), f"max difference = {difference:.3e}"]

    if config.format == OutputFormat.Json:
        emit(json.dumps(payload, indent=2), config.output_path)
    else:
        emit("\n".join(lines), config.output_path)

    if cross_check and difference >= config.tol_bundle:
        logger.error(f"Closed form and charts differ by {difference:.3e}, above {config.tol_bundle:.1e}")
        raise SystemExit(_EXIT_VERIFICATION_FAILURE)


def parse_equator_point(coordinates: tuple[float, ...]) -> transition.EquatorPoint:
    """Build a point of S5, normalizing inputs that are slightly off the sphere."""
    z = transition.EquatorPoint.from_reals(coordinates)
    deviation = abs(z.norm**2 - 1.0)
    if deviation < UNIT_TOL:
        return z.normalized()
    if deviation < AUTO_NORMALIZE_TOL:
        logger.warning(f"Normalizing a point off S5 by {deviation:.3e}")
        return z.normalized()
    message = f"Point is not on S5: |z|^2 - 1 = {deviation:.3e}"
    raise click.BadParameter(message, param_hint="U_RE U_IM V_RE V_IM W_RE W_IM")


@cli.command()
@click.argument("count", type=click.IntRange(min=1))
@run_options
@click.help_option()
def sample(count: int, config: RunConfig) -> None:
    """Write COUNT seeded samples of the transition function."""
    samples = sampling.sample_transition(count, config.seed)
    emit(sampling.render(samples, config.format), config.output_path, newline=False)
    logger.info(f"Wrote {count} samples")


@cli.command(context_settings={"ignore_unknown_options": True})
@click.option(
    "--value",
    nargs=6,
    type=float,
    default=None,
    metavar="U_RE U_IM V_RE V_IM W_RE W_IM",
    help="Regular value to count preimages of.  [default: 1 0 0 0 0 0]",
)
@run_options
@click.help_option()
def degree(value: tuple[float, ...] | None, config: RunConfig) -> None:
    """Count the signed preimages of the first column of theta."""
    point = parse_equator_point(value) if value else None
    try:
        report = transition.degree_report(point, config.fd_step)
    except SingularJacobianError as error:
        logger.error(f"{error} (residual {error.residual:.3e}); try another --value or --fd-step")
        raise SystemExit(_EXIT_VERIFICATION_FAILURE) from error

    if config.format == OutputFormat.Json:
        emit(json.dumps(report.to_dict(), indent=2), config.output_path)
    else:
        emit("\n".join(report.format_lines()), config.output_path)


def format_matrix(entries: np.ndarray) -> list[str]:
    """Return one aligned line per matrix row."""
    return ["  ".join(f"{entry.real:+.12f}{entry.imag:+.12f}j" for entry in row) for row in entries]


def emit(text: str, output_path: Path | None, *, newline: bool = True) -> None:
    """Write text to the output file, or echo it to stdout."""
    if output_path is None:
        click.echo(text, nl=newline)
        return
    try:
        output_path.write_text(text + ("\n" if newline else ""), encoding="utf-8")
    except OSError as error:
        raise click.FileError(str(output_path), hint=str(error)) from error
    logger.debug(f"Wrote '{output_path}'")


def get_logging_level(quiet: bool, verbose: bool) -> int:
    """Get the logging level for the specified quiet and verbose options."""
    log_level = logging.INFO
    if verbose:
        log_level = logging.DEBUG
    if quiet:
        log_level = logging.ERROR
    return log_level
