"""Experiment orchestration: single runs, FASTER-versus-baseline batches, sweeps.

Every run writes its own directory of plot-ready CSV files; nothing in a run
directory depends on wall-clock time, so output bytes are a pure function of
the SimConfig.
"""

import logging
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from fastersim.core.ledger import write_ledger_snapshot
from fastersim.core.simulator import simulate
from fastersim.core.topology import dump_topology
from fastersim.models.config import SimConfig
from fastersim.models.core import SimMode
from fastersim.models.results import (
    ComparisonReport,
    ComparisonRow,
    RunSummary,
    SimResult,
)
from fastersim.utils.csv_io import (
    write_comparison,
    write_packet_log,
    write_plotdata,
    write_summary,
    write_timeseries,
)
from fastersim.utils.run_store import save_run_metadata

logger = logging.getLogger(__name__)

TIMESERIES_FILE = "timeseries.csv"
SUMMARY_FILE = "summary.csv"
PLOT_RICHNESS_FILE = "plotdata_richness.csv"
PLOT_BATTERY_FILE = "plotdata_battery.csv"
TOPOLOGY_FILE = "topology.csv"
LEDGER_FILE = "ledger.csv"
PACKETS_FILE = "packets.csv"
COMPARISON_FILE = "comparison.csv"
DEFAULT_SWEEP_NODES = (10, 15, 20)

ProgressCallback = Callable[[SimMode, int], None]


@dataclass
class RunArtifacts:
    """Files written by one run plus its in-memory result."""

    out_dir: Path
    result: SimResult
    summary: RunSummary
    files: List[Path] = field(default_factory=list)


def summarize(result: SimResult) -> RunSummary:
    """Headline statistics of one run.

    Survivors count as living ``ticks + 1`` ticks; the delivery rate of a run
    that sent nothing is 0.
    """
    config = result.config
    final = result.final_rows()
    richness = np.array([row.richness for row in final], dtype=float)
    lifetimes = np.array(
        [
            config.ticks + 1 if tick is None else tick
            for tick in result.death_tick.values()
        ],
        dtype=float,
    )
    delivery_rate = (
        result.packets_delivered / result.packets_sent if result.packets_sent else 0.0
    )
    return RunSummary(
        mode=config.mode,
        seed=config.seed,
        richness_stddev_final=float(np.std(richness, ddof=0)),
        mean_lifetime=float(lifetimes.mean()) if lifetimes.size else 0.0,
        delivery_rate=delivery_rate,
        drops=dict(result.drops),
    )


def run_experiment(config: SimConfig, out_dir: Path) -> RunArtifacts:
    """Simulate *config* and write its CSV, YAML and plot-data files.

    I/O failures propagate unchanged.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    state = simulate(config)
    result = state.to_result()
    summary = summarize(result)

    files = [
        out_dir / TIMESERIES_FILE,
        out_dir / SUMMARY_FILE,
        out_dir / PLOT_RICHNESS_FILE,
        out_dir / PLOT_BATTERY_FILE,
        out_dir / TOPOLOGY_FILE,
        out_dir / LEDGER_FILE,
    ]
    write_timeseries(result.time_series, files[0])
    write_summary([summary], files[1])
    write_plotdata(result.time_series, files[2], "richness")
    write_plotdata(result.time_series, files[3], "battery")
    dump_topology(state.topology, files[4])
    write_ledger_snapshot(state.ledger, files[5])
    if config.packet_log:
        files.append(out_dir / PACKETS_FILE)
        write_packet_log(result.packet_log, files[-1])
    files.append(save_run_metadata(config, out_dir))

    logger.info("Wrote %s files to %s", len(files), out_dir)
    return RunArtifacts(out_dir=out_dir, result=result, summary=summary, files=files)


def run_dir_name(mode: SimMode, seed: int) -> str:
    return f"{mode.value}-seed{seed}"


def _run_one(job: Tuple[SimConfig, Path]) -> RunSummary:
    config, out_dir = job
    return run_experiment(config, out_dir).summary


def compare_modes(
    config: SimConfig,
    seeds: Sequence[int],
    out_dir: Path,
    workers: int = 1,
    on_run: Optional[ProgressCallback] = None,
) -> ComparisonReport:
    """Run FASTER and baseline for every seed and compare them.

    Each (mode, seed) run writes into ``<out_dir>/<mode>-seed<seed>/``; the
    per-seed comparison goes to ``<out_dir>/comparison.csv``.

    Args:
        config: Base configuration; its ``mode`` and ``seed`` are overridden.
        seeds: At least one seed.
        out_dir: Output directory.
        workers: Processes to run simulations in; 1 runs them in-process.
        on_run: Called after each finished run with its mode and seed.
    """
    if not seeds:
        raise ValueError("compare_modes needs at least one seed")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        (
            config.model_copy(update={"mode": mode, "seed": seed}),
            out_dir / run_dir_name(mode, seed),
        )
        for seed in seeds
        for mode in (SimMode.FASTER, SimMode.BASELINE)
    ]

    summaries: Dict[Tuple[SimMode, int], RunSummary] = {}

    def collect(summary: RunSummary) -> None:
        summaries[(summary.mode, summary.seed)] = summary
        if on_run is not None:
            on_run(summary.mode, summary.seed)

    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            for summary in pool.imap(_run_one, jobs):
                collect(summary)
    else:
        for job in jobs:
            collect(_run_one(job))

    report = ComparisonReport(
        n_nodes=config.n_nodes,
        rows=[
            ComparisonRow(
                seed=seed,
                richness_stddev_final_faster=summaries[
                    (SimMode.FASTER, seed)
                ].richness_stddev_final,
                richness_stddev_final_baseline=summaries[
                    (SimMode.BASELINE, seed)
                ].richness_stddev_final,
                mean_lifetime_faster=summaries[(SimMode.FASTER, seed)].mean_lifetime,
                mean_lifetime_baseline=summaries[
                    (SimMode.BASELINE, seed)
                ].mean_lifetime,
            )
            for seed in seeds
        ],
    )
    write_comparison(report, out_dir / COMPARISON_FILE)
    logger.info(
        "n=%s over %s seeds: FASTER fairer in %.0f%%, longer-lived in %.0f%%",
        config.n_nodes,
        len(seeds),
        100 * report.richness_win_fraction,
        100 * report.lifetime_win_fraction,
    )
    return report


def sweep(
    config: SimConfig,
    node_counts: Sequence[int],
    seeds: Sequence[int],
    out_dir: Path,
    workers: int = 1,
    on_run: Optional[ProgressCallback] = None,
) -> Dict[int, ComparisonReport]:
    """Run :func:`compare_modes` once per network size under ``<out_dir>/n<count>/``."""
    return {
        n_nodes: compare_modes(
            SimConfig.model_validate({**config.model_dump(), "n_nodes": n_nodes}),
            seeds,
            Path(out_dir) / f"n{n_nodes}",
            workers=workers,
            on_run=on_run,
        )
        for n_nodes in node_counts
    }
