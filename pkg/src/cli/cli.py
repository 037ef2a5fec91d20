"""
Command Line Interface for the VRJP Potential Lab

Every experiment is a subcommand. A run reads its configuration (defaults,
then --config, then flags), writes CSV artifacts and prints a one-line
PASS/FAIL summary where an oracle exists.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from src.config.experiment_config import PROCESSES, ConfigLoader
from src.errors import ConfigError
from src.experiments.runner import ExperimentRunner, RunOutcome, save_outcome
from src.i18n import LOCALE_ENV, get_i18n

console = Console()

DEFAULT_LOCALE = os.getenv(LOCALE_ENV, "en-US")

EXIT_INVALID = 2
EXIT_FAIL = 3

PREVIEW_ROWS = 20


def setup_logging(verbose: bool) -> None:
    """Route library logging through rich."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=verbose)],
        force=True,
    )


@click.group()
@click.version_option(version="0.1.0")
@click.option(
    "--locale", "--lang",
    type=click.Choice(["en-US", "pt-BR"], case_sensitive=False),
    default=DEFAULT_LOCALE,
    help="Interface language",
)
@click.option("--verbose", "-v", is_flag=True, help="Log progress at DEBUG level")
@click.pass_context
def cli(ctx, locale: str, verbose: bool):
    """VRJP potential lab - reproducible experiments on reinforced walks and their random potential"""
    ctx.ensure_object(dict)
    ctx.obj["i18n"] = get_i18n(locale)
    ctx.obj["verbose"] = verbose
    setup_logging(verbose)


def common_options(func):
    """Attach --config, --seed, --out and --workers."""
    options = [
        click.option("--config", "-c", "config_path", type=click.Path(dir_okay=False, path_type=Path),
                     help="YAML experiment configuration"),
        click.option("--seed", "-s", type=click.IntRange(min=0), help="Master seed"),
        click.option("--out", "-o", type=click.Path(dir_okay=False), help="Path of the main CSV artifact"),
        click.option("--workers", "-w", type=click.IntRange(min=1), help="Worker processes"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def display_outcome(command: str, outcome: RunOutcome, written: List[Path], i18n) -> None:
    """
    Show a preview of the main table and the verdict.

    Args:
        command: Subcommand name
        outcome: Result of the run
        written: CSV files produced
        i18n: I18n instance for translations
    """
    console.print(Panel.fit(
        f"[bold cyan]{i18n.t('cli.title')}[/bold cyan]\n"
        f"{i18n.t('cli.subtitle')}",
        border_style="cyan",
    ))
    frame = outcome.table
    table = Table(title=i18n.t("results.table_title", command=command), show_header=True, header_style="bold magenta")
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for _, row in frame.head(PREVIEW_ROWS).iterrows():
        table.add_row(*(f"{value:.6g}" if isinstance(value, float) else str(value) for value in row))
    console.print(table)
    if len(frame) > PREVIEW_ROWS:
        console.print(f"[dim]{i18n.t('results.truncated', shown=PREVIEW_ROWS, total=len(frame))}[/dim]")

    style = {"PASS": "green", "FAIL": "red"}.get(outcome.verdict, "cyan")
    files = "\n".join(f"  {path}" for path in written)
    console.print(
        Panel(
            f"{i18n.t('results.written')}\n{files}",
            title=f"[bold]{i18n.t('results.summary_title')}[/bold]",
            border_style=style,
        )
    )
    click.echo(i18n.t("results.verdict", verdict=outcome.verdict, command=command, summary=outcome.summary))


def execute(ctx: click.Context, command: str, options: Dict[str, Any],
            estimator: Optional[Dict[str, Any]] = None) -> None:
    """
    Build the configuration, run the experiment and report.

    Exit status: 0 on PASS or when no oracle applies, 2 on invalid input,
    3 on a statistical FAIL.
    """
    i18n = ctx.obj["i18n"]
    overrides: Dict[str, Any] = {
        "seed": options.get("seed"),
        "out": options.get("out"),
        "workers": options.get("workers"),
    }
    if estimator:
        overrides["estimator"] = estimator

    try:
        config = ConfigLoader(options.get("config_path")).build(command, overrides)
    except ConfigError as exc:
        console.print(f"[red]{i18n.t('errors.invalid_config', error=exc)}[/red]")
        click.echo(ctx.get_usage())
        ctx.exit(EXIT_INVALID)

    try:
        outcome = ExperimentRunner(config).run()
    except ValueError as exc:
        console.print(f"[red]{i18n.t('errors.invalid_input', error=exc)}[/red]")
        ctx.exit(EXIT_INVALID)

    written = save_outcome(outcome, config.output_path())
    display_outcome(command, outcome, written, i18n)
    if outcome.passed is False:
        ctx.exit(EXIT_FAIL)


@cli.command("sample-potential")
@common_options
@click.pass_context
def sample_potential(ctx, **options):
    """Draw exact samples of the random potential."""
    execute(ctx, "sample-potential", options)


@cli.command("ward-check")
@common_options
@click.pass_context
def ward_check(ctx, **options):
    """Laplace and Ward identities: closed form against Monte Carlo."""
    execute(ctx, "ward-check", options)


@cli.command("green-check")
@common_options
@click.option("--max-len", type=click.IntRange(min=0), help="Longest path in the expansion")
@click.pass_context
def green_check(ctx, max_len: Optional[int], **options):
    """Direct inverse against the random-walk expansion."""
    execute(ctx, "green-check", options, {"max_len": max_len} if max_len is not None else None)


@cli.command("simulate")
@click.argument("process", type=click.Choice(PROCESSES))
@common_options
@click.option("--jumps", type=click.IntRange(min=1), help="Jumps per trajectory")
@click.pass_context
def simulate(ctx, process: str, jumps: Optional[int], **options):
    """Simulate VRJP, ERRW or the quenched jump process."""
    estimator: Dict[str, Any] = {"process": process}
    if jumps is not None:
        estimator["jumps"] = jumps
    execute(ctx, "simulate", options, estimator)


@cli.command("mixture-test")
@common_options
@click.pass_context
def mixture_test(ctx, **options):
    """VRJP skeletons against the quenched walk in a random environment."""
    execute(ctx, "mixture-test", options)


@cli.command("errw-equivalence")
@common_options
@click.pass_context
def errw_equivalence(ctx, **options):
    """ERRW against the VRJP with Gamma-distributed weights."""
    execute(ctx, "errw-equivalence", options)


@cli.command("fractional-decay")
@common_options
@click.pass_context
def fractional_decay(ctx, **options):
    """Fractional moments of G(0, x) and their exponential decay fit."""
    execute(ctx, "fractional-decay", options)


@cli.command("thresholds")
@common_options
@click.option("--d", "dimensions", type=click.IntRange(min=1), multiple=True, help="Lattice dimension (repeatable)")
@click.pass_context
def thresholds(ctx, dimensions, **options):
    """Recurrence thresholds with the literature comparators."""
    execute(ctx, "thresholds", options, {"d_values": list(dimensions)} if dimensions else None)


@cli.command("localization")
@common_options
@click.pass_context
def localization(ctx, **options):
    """Spectral diagnostics of sampled Schrodinger matrices."""
    execute(ctx, "localization", options)


@cli.command("tau-check")
@common_options
@click.pass_context
def tau_check(ctx, **options):
    """Edge regularity exponent of the single-site law."""
    execute(ctx, "tau-check", options)


@cli.command("variance-check")
@common_options
@click.pass_context
def variance_check(ctx, **options):
    """Variance of the potential at the center of wired boxes."""
    execute(ctx, "variance-check", options)


@cli.command("eta-decay")
@common_options
@click.pass_context
def eta_decay(ctx, **options):
    """Effective boundary field at the center of growing boxes."""
    execute(ctx, "eta-decay", options)


if __name__ == "__main__":
    cli()
