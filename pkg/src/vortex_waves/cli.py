"""``vortex-waves`` command-line runner.

Exit status: 0 success, 1 invalid input, 2 solver abort, 3 failed verification.
"""

from __future__ import annotations

import sys
import warnings

import click

from .errors import NumericError, SolverAbort, VortexWaveError
from .scenario import SWEEP_AXES, ScenarioError, load_scenario, run, sweep

EXIT_OK, EXIT_INVALID, EXIT_ABORT, EXIT_VERIFY = 0, 1, 2, 3
SUITE_NAMES = ("all", "dno", "greens", "conservation", "range", "figures", "kdv",
               "perturbation", "scaling")


def _report_invalid(exc: Exception) -> int:
    lines = exc.violations if isinstance(exc, ScenarioError) else [str(exc)]
    for line in lines:
        click.echo(f"invalid: {line}", err=True)
    return EXIT_INVALID


def _load(path):
    try:
        return load_scenario(path)
    except OSError as exc:
        raise ScenarioError([f"cannot read scenario file: {exc}"]) from None


@click.group()
@click.option("--seedless", is_flag=True,
              help="Reserved; the solvers use no randomness.")
def cli(seedless):
    """Point vortex under long surface waves: runs, sweeps and self-checks."""


@cli.command("run")
@click.argument("scenario_file", type=click.Path(dir_okay=False))
@click.option("--out-dir", default=".", show_default=True, type=click.Path(file_okay=False),
              help="Directory for the CSV and plots.")
def run_cmd(scenario_file, out_dir):
    """Execute one scenario file."""
    try:
        sc = _load(scenario_file)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            result = run(sc, out_dir)
    except (SolverAbort, NumericError) as exc:
        click.echo(f"abort: {exc}", err=True)
        return EXIT_ABORT
    except (VortexWaveError, OSError) as exc:
        return _report_invalid(exc)
    click.echo(f"wrote {result.csv_path} ({len(result.times)} rows)")
    for p in result.plot_paths:
        click.echo(f"wrote {p}")
    return EXIT_OK


@cli.command("verify")
@click.argument("suite", default="all", type=click.Choice(SUITE_NAMES))
def verify_cmd(suite):
    """Run a verification suite and print one line per criterion."""
    from .verification import format_report, run_suite

    try:
        results = run_suite(suite)
    except (SolverAbort, NumericError) as exc:
        click.echo(f"abort: {exc}", err=True)
        return EXIT_ABORT
    click.echo(format_report(results))
    failed = [r for r in results if not r.passed]
    click.echo(f"{len(results) - len(failed)}/{len(results)} passed", err=True)
    return EXIT_VERIFY if failed else EXIT_OK


def _parse_values(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers, got {text!r}")


@cli.command("sweep")
@click.argument("scenario_file", type=click.Path(dir_okay=False))
@click.option("--axis", required=True, help=f"One of: {', '.join(sorted(SWEEP_AXES))}.")
@click.option("--values", "values_text", required=True, help="Comma-separated values.")
@click.option("--out-dir", default=".", show_default=True, type=click.Path(file_okay=False))
@click.option("--workers", default=1, show_default=True, type=click.IntRange(min=1))
def sweep_cmd(scenario_file, axis, values_text, out_dir, workers):
    """Run a scenario once per value of AXIS and write summary.csv."""
    values = _parse_values(values_text)
    try:
        base = _load(scenario_file)
        outcomes = sweep(base, axis, values, out_dir, workers=workers)
    except (VortexWaveError, OSError) as exc:
        return _report_invalid(exc)
    status = EXIT_OK
    for value, res, err in outcomes:
        if err is None:
            click.echo(f"{axis}={value:g}: wrote {res.csv_path}")
        else:
            click.echo(f"abort: {axis}={value:g}: {err}", err=True)
            status = EXIT_ABORT
    return status


def main(argv=None) -> int:
    """Entry point; usage errors count as invalid input (exit 1)."""
    try:
        code = cli.main(args=argv, prog_name="vortex-waves", standalone_mode=False)
    except click.exceptions.Exit as exc:
        code = exc.exit_code
    except click.ClickException as exc:
        exc.show()
        code = EXIT_INVALID
    except click.Abort:
        click.echo("aborted", err=True)
        code = EXIT_INVALID
    return int(code or 0)


if __name__ == "__main__":
    sys.exit(main())
