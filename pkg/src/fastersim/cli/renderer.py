"""Rich rendering of run summaries, comparisons and configurations."""

from typing import Any, Dict, Optional

from rich.console import Console
from rich.table import Table

from fastersim.models.config import SimConfig
from fastersim.models.results import ComparisonReport, DropReason, RunSummary

MODE_STYLES = {"faster": "green bold", "baseline": "yellow bold"}


def render_summary(summary: RunSummary, console: Optional[Console] = None) -> None:
    """Render one run's headline statistics and drop counters."""
    console = console or Console()

    table = Table(title=f"Run {summary.mode.value} seed={summary.seed}")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("richness stddev (final)", f"{summary.richness_stddev_final:.2f}")
    table.add_row("mean lifetime (ticks)", f"{summary.mean_lifetime:.2f}")
    table.add_row("delivery rate", f"{summary.delivery_rate:.3f}")
    for reason in DropReason:
        table.add_row(f"drops: {reason.value}", str(summary.drops.get(reason, 0)))
    console.print(table, style=MODE_STYLES.get(summary.mode.value))


def render_comparison(
    report: ComparisonReport, console: Optional[Console] = None
) -> None:
    """Render per-seed FASTER/baseline rows and the win fractions."""
    console = console or Console()

    table = Table(title=f"FASTER vs baseline ({report.n_nodes} nodes)")
    table.add_column("Seed", justify="right")
    table.add_column("Stddev FASTER", justify="right", style="green")
    table.add_column("Stddev baseline", justify="right", style="yellow")
    table.add_column("Lifetime FASTER", justify="right", style="green")
    table.add_column("Lifetime baseline", justify="right", style="yellow")
    for row in report.rows:
        table.add_row(
            str(row.seed),
            f"{row.richness_stddev_final_faster:.2f}",
            f"{row.richness_stddev_final_baseline:.2f}",
            f"{row.mean_lifetime_faster:.2f}",
            f"{row.mean_lifetime_baseline:.2f}",
        )
    console.print(table)
    console.print(
        f"Richness wins: {report.richness_win_fraction:.0%} | "
        f"Lifetime wins: {report.lifetime_win_fraction:.0%}"
    )


def _display(value: Any) -> str:
    return str(getattr(value, "value", value))


def render_config(config: SimConfig, console: Optional[Console] = None) -> None:
    """Render every resolved SimConfig key and value."""
    console = console or Console()

    table = Table(title="Resolved configuration")
    table.add_column("Key", style="cyan")
    table.add_column("Value")
    values: Dict[str, Any] = config.model_dump()
    for key, value in values.items():
        table.add_row(key, _display(value))
    console.print(table)
