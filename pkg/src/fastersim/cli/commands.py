"""CLI commands for fastersim.

- ``run``: one simulation, written as CSV/YAML files to ``--out``.
- ``compare``: FASTER and baseline over a seed range.
- ``sweep``: ``compare`` repeated for several network sizes.
- ``config show`` / ``config docs`` and ``version``.

Design:
- Typer app and ExitCode enum at module level; options are declared once as
  ``Annotated`` aliases and shared between commands.
- Configuration resolves CLI > ``FASTERSIM_*`` env > ``--config`` file >
  defaults (see :mod:`fastersim.utils.config`).
- Configuration, validation and I/O errors print a red message and exit with
  ``ExitCode.ERROR``; they never surface as tracebacks.
"""

import os
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Dict, List, NoReturn, Optional

import typer
from pydantic import ValidationError
from rich.table import Table

from fastersim.cli.console import ConsoleManager, create_default_progress
from fastersim.cli.renderer import render_comparison, render_config, render_summary
from fastersim.core.experiment import (
    DEFAULT_SWEEP_NODES,
    compare_modes,
    run_experiment,
    sweep as run_sweep,
)
from fastersim.models.config import SimConfig
from fastersim.models.core import SimMode
from fastersim.utils.config import ConfigError, _make_env_var_name, resolve_config
from fastersim.utils.debug import debug, setup_logger
from fastersim.utils.settings import RuntimeSettings

app = typer.Typer(
    name="fastersim",
    help="Shapley-value relay payments for wireless ad hoc networks: simulate, "
    "compare against flat pay, and emit plot-ready CSV.",
    no_args_is_help=True,
)


class ExitCode(int, Enum):
    """Exit codes for CLI commands."""

    SUCCESS = 0
    ERROR = 1


CONFIG_PATH = Annotated[
    Optional[Path],
    typer.Option(
        "--config",
        "-c",
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
        help="Config file: flat 'key = value' lines or a .toml table.",
    ),
]

OUT_DIR = Annotated[
    Path,
    typer.Option("--out", "-o", file_okay=False, help="Output directory."),
]

MODE = Annotated[
    Optional[SimMode],
    typer.Option("--mode", case_sensitive=False, help="Payment mode."),
]

SEED = Annotated[Optional[int], typer.Option("--seed", help="Random seed.")]

NODES = Annotated[
    Optional[int], typer.Option("--nodes", min=2, help="Number of nodes.")
]

TICKS = Annotated[
    Optional[int], typer.Option("--ticks", min=0, help="Number of ticks to simulate.")
]

PACKET_LOG = Annotated[
    bool, typer.Option("--packet-log", help="Also write packets.csv.")
]

SEEDS = Annotated[
    str,
    typer.Option(
        "--seeds", help="Seeds as an inclusive range 'a..b' or a list '1,4,9'."
    ),
]

WORKERS = Annotated[
    Optional[int],
    typer.Option(
        "--workers",
        min=1,
        help="Worker processes (default: FASTERSIM_WORKERS or 1).",
    ),
]


def parse_seeds(value: str) -> List[int]:
    """Parse ``a..b`` (inclusive) or a comma-separated list of seeds."""
    try:
        if ".." in value:
            start, _, stop = value.partition("..")
            first, last = int(start), int(stop)
            if last < first:
                raise ValueError
            return list(range(first, last + 1))
        seeds = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"Invalid seed range: {value!r}")
    if not seeds:
        raise typer.BadParameter("At least one seed is required")
    return seeds


def parse_node_counts(value: str) -> List[int]:
    try:
        counts = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"Invalid node counts: {value!r}")
    if not counts or min(counts) < 2:
        raise typer.BadParameter("Node counts must be integers >= 2")
    return counts


def _resolve(config_path: Optional[Path], overrides: Dict[str, Any]) -> SimConfig:
    try:
        config = resolve_config(config_path, overrides)
    except (ConfigError, OSError) as exc:
        _fail(str(exc))
    debug(f"Resolved configuration: {config.model_dump_json()}")
    return config


def _fail(message: str) -> NoReturn:
    with ConsoleManager(stderr=True) as err:
        err.print(f"[red]Error:[/red] {message}")
    raise typer.Exit(ExitCode.ERROR)


def _workers(cli_value: Optional[int]) -> int:
    if cli_value is not None:
        return cli_value
    try:
        return RuntimeSettings().workers
    except ValidationError as exc:
        _fail(f"FASTERSIM_WORKERS: {exc.errors()[0]['msg']}")


@app.callback()
def _global_options(
    no_rich: bool = typer.Option(
        False,
        "--no-rich",
        help=(
            "Disable Rich coloured output and progress bars. "
            "Can also be set via FASTERSIM_NO_RICH env-var."
        ),
    ),
) -> None:
    """Add global ``--no-rich`` option and configure logging."""
    if no_rich:
        os.environ["FASTERSIM_NO_RICH"] = "1"
    try:
        setup_logger()
    except ValidationError as exc:
        _fail(f"Invalid FASTERSIM_* setting: {exc.errors()[0]['msg']}")


@app.command()
def run(
    config_path: CONFIG_PATH = None,
    out: OUT_DIR = Path("out"),
    mode: MODE = None,
    seed: SEED = None,
    nodes: NODES = None,
    ticks: TICKS = None,
    packet_log: PACKET_LOG = False,
) -> None:
    """Run one simulation and write its CSV outputs."""
    config = _resolve(
        config_path,
        {
            "mode": mode,
            "seed": seed,
            "n_nodes": nodes,
            "ticks": ticks,
            "packet_log": True if packet_log else None,
        },
    )
    try:
        artifacts = run_experiment(config, out)
    except OSError as exc:
        _fail(str(exc))
    with ConsoleManager() as console:
        render_summary(artifacts.summary, console)
        console.print(f"Wrote {len(artifacts.files)} files to {artifacts.out_dir}")


@app.command()
def compare(
    config_path: CONFIG_PATH = None,
    out: OUT_DIR = Path("out"),
    seeds: SEEDS = "1..20",
    nodes: NODES = None,
    ticks: TICKS = None,
    workers: WORKERS = None,
) -> None:
    """Run FASTER and baseline for every seed and report who wins."""
    seed_list = parse_seeds(seeds)
    config = _resolve(config_path, {"n_nodes": nodes, "ticks": ticks})
    n_workers = _workers(workers)
    with ConsoleManager() as console:
        progress = create_default_progress(console)
        with progress:
            task = progress.add_task(
                f"Simulating {config.n_nodes} nodes", total=2 * len(seed_list)
            )
            try:
                report = compare_modes(
                    config,
                    seed_list,
                    out,
                    workers=n_workers,
                    on_run=lambda mode, seed: progress.advance(task),
                )
            except OSError as exc:
                _fail(str(exc))
        render_comparison(report, console)


@app.command()
def sweep(
    config_path: CONFIG_PATH = None,
    out: OUT_DIR = Path("out"),
    node_counts: Annotated[
        str,
        typer.Option("--node-counts", help="Comma-separated network sizes."),
    ] = ",".join(str(n) for n in DEFAULT_SWEEP_NODES),
    seeds: SEEDS = "1..20",
    ticks: TICKS = None,
    workers: WORKERS = None,
) -> None:
    """Run ``compare`` for several network sizes."""
    counts = parse_node_counts(node_counts)
    seed_list = parse_seeds(seeds)
    config = _resolve(config_path, {"ticks": ticks})
    n_workers = _workers(workers)
    with ConsoleManager() as console:
        progress = create_default_progress(console)
        with progress:
            task = progress.add_task(
                "Sweeping network sizes", total=2 * len(seed_list) * len(counts)
            )
            try:
                reports = run_sweep(
                    config,
                    counts,
                    seed_list,
                    out,
                    workers=n_workers,
                    on_run=lambda mode, seed: progress.advance(task),
                )
            except (OSError, ValidationError) as exc:
                _fail(str(exc))
        for report in reports.values():
            render_comparison(report, console)


config_app = typer.Typer(help="Configuration commands.")
app.add_typer(config_app, name="config")


@config_app.command("show")
def config_show(config_path: CONFIG_PATH = None) -> None:
    """Show the resolved simulation configuration."""
    config = _resolve(config_path, {})
    with ConsoleManager() as console:
        render_config(config, console)


@config_app.command("docs")
def config_docs() -> None:
    """Render a table of configuration keys, environment variables and defaults."""
    defaults = SimConfig()
    table = Table(title="Configuration Settings")
    table.add_column("Setting", style="cyan")
    table.add_column("Environment Variable", style="magenta")
    table.add_column("Default")
    for key in SimConfig.model_fields:
        default = getattr(defaults, key)
        table.add_row(
            key, _make_env_var_name(key), str(getattr(default, "value", default))
        )
    with ConsoleManager() as console:
        console.print(table)


@app.command()
def version() -> None:
    """Show the version of fastersim."""
    from fastersim.__about__ import __version__

    with ConsoleManager() as console:
        console.print(f"fastersim version: [bold]{__version__}[/bold]")


def main() -> None:
    """Main entry point for the CLI."""
    app()
