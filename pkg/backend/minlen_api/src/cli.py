# src/cli.py
"""Command-line front end: ``minlen solve|oracle|sweep|validate``.

Exit codes: 0 ok, 1 validation failure, 2 configuration error, 3 solver failure.
Results go to standard output (or --out), diagnostics to standard error.
"""

import functools
import logging
import sys

import click

from src import __version__
from src.config import Config
from src.errors import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_VALIDATION_FAILED, MinLenError
from src.extensions import configure_logging
from src.models.records import RunConfig, SweepSpec
from src.services import export
from src.services.solver_service import minlen_solver
from src.services.validation import FAULTS

logger = logging.getLogger(__name__)

# flag name -> RunConfig field
CONFIG_FLAGS = (
    "potential", "u0", "a", "alpha", "A", "beta", "m", "hbar", "grid", "n_states",
    "grid_scale", "step_rule", "root_tol", "quad_tol", "fit_degree",
)


# --------------------
# Shared options
# --------------------
def problem_options(command):
    options = [
        click.option("--potential", type=click.Choice(["delta", "double-delta", "coulomb"]), default=None),
        click.option("--u0", type=float, default=None, help="Coupling U0 of the delta wells."),
        click.option("--a", "a", type=float, default=None, help="Half-separation of the double delta."),
        click.option("--alpha", type=float, default=None, help="Coulomb coupling."),
        click.option("--A", "A", type=float, default=None, help="Self-adjoint extension parameter (inf allowed)."),
        click.option("--beta", type=float, default=None, help="Deformation parameter, >= 0."),
        click.option("--m", type=float, default=None),
        click.option("--hbar", type=float, default=None),
        click.option("--grid", type=int, default=None, help="Nystrom grid order N."),
        click.option("--n-states", "n_states", type=int, default=None),
        click.option("--grid-scale", "grid_scale", type=float, default=None, help="Use a tangent oracle grid."),
        click.option("--step-rule", "step_rule", type=click.Choice(["spectral", "midpoint"]), default=None),
        click.option("--root-tol", "root_tol", type=float, default=None),
        click.option("--quad-tol", "quad_tol", type=float, default=None),
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="Flat JSON file with RunConfig keys; flags override it."),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json"),
        click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), default=None),
        click.option("--no-timestamp", "no_timestamp", is_flag=True, help="Omit wall time for byte-stable output."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def handle_errors(command):
    """Map MinLenError to its exit code with a one-line diagnostic on stderr."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except MinLenError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(e.exit_code)

    return wrapper


def build_config(kwargs) -> RunConfig:
    overrides = {name: kwargs.get(name) for name in CONFIG_FLAGS}
    path = kwargs.get("config_path")
    if path:
        return RunConfig.from_file(path, overrides)
    return RunConfig.build(overrides)


def emit(payload, fmt: str, out: str = None):
    data = export.render(payload, fmt)
    if out:
        with open(out, "wb") as handle:
            handle.write(data)
    else:
        click.echo(data, nl=False)


# --------------------
# Commands
# --------------------
@click.group()
@click.version_option(__version__, prog_name="minlen")
@click.option("--log-level", default=None, help="Logging level (default from MINLEN_LOG_LEVEL).")
@click.option("--log-json/--log-text", default=None, help="JSON or plain log records on stderr.")
def cli(log_level, log_json):
    """Bound states in deformed space with minimal length."""
    configure_logging(
        log_level or Config.LOG_LEVEL,
        Config.LOG_JSON if log_json is None else log_json,
    )


@cli.command()
@problem_options
@handle_errors
def solve(**kwargs):
    """Analytic bound states of the configured potential."""
    config = build_config(kwargs)
    record = minlen_solver.solve(config, timestamp=not kwargs["no_timestamp"])
    emit(record, kwargs["fmt"], kwargs["out"])


@cli.command()
@problem_options
@handle_errors
def oracle(**kwargs):
    """Nystrom spectrum with per-state deviations from the analytic levels (beta > 0)."""
    config = build_config(kwargs)
    record = minlen_solver.oracle(config, timestamp=not kwargs["no_timestamp"])
    emit(record, kwargs["fmt"], kwargs["out"])


@cli.command()
@problem_options
@click.option("--sweep", "sweeps", multiple=True, required=True,
              help="PARAM:START:STOP:COUNT[:log], PARAM one of beta, u0, a, alpha, A.")
@click.option("--fit", is_flag=True, help="Fit the ground-state energy in powers of sqrt(beta).")
@click.option("--fit-degree", "fit_degree", type=int, default=None)
@click.option("--oracle", "use_oracle", is_flag=True, help="Cross-check every point with the oracle.")
@click.option("--progress/--no-progress", default=None, help="Progress bar on stderr (default: when a tty).")
@handle_errors
def sweep(sweeps, fit, use_oracle, progress, **kwargs):
    """One record per point of a single-parameter range."""
    if len(sweeps) != 1:
        click.echo("error: sweep exactly one parameter per run", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    spec = SweepSpec.parse(sweeps[0])
    config = build_config(kwargs)
    if progress is None:
        progress = sys.stderr.isatty()
    result = minlen_solver.sweep(
        config,
        spec,
        fit=fit,
        use_oracle=use_oracle,
        timestamp=not kwargs["no_timestamp"],
        progress=progress,
    )
    emit(result, kwargs["fmt"], kwargs["out"])
    if result.fit is not None:
        coefficients = ", ".join(f"{c:.10g}" for c in result.fit["coefficients"])
        click.echo(f"fit coefficients (sqrt(beta) powers 0..2): {coefficients}", err=True)


@cli.command()
@click.option("--quick", is_flag=True, help="Reduced grids and parameter sets.")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON instead of check lines.")
@click.option("--fault", type=click.Choice(FAULTS), default=None, hidden=True)
@handle_errors
def validate(quick, as_json, fault):
    """Run the self-check suite; exit 1 on any failed check."""
    report = minlen_solver.validate(quick=quick, fault=fault)
    if as_json:
        click.echo(export.to_json(report), nl=False)
    else:
        for line in report.lines():
            click.echo(line)
    sys.exit(EXIT_OK if report.passed else EXIT_VALIDATION_FAILED)


def main():
    cli(prog_name="minlen")


if __name__ == "__main__":
    main()
