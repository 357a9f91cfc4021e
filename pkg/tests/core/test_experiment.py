"""Tests for run directories, summaries and FASTER/baseline comparisons."""

from pathlib import Path
from typing import List, Tuple

import pandas as pd
import pytest

from fastersim.core.experiment import (
    COMPARISON_FILE,
    PACKETS_FILE,
    PLOT_BATTERY_FILE,
    PLOT_RICHNESS_FILE,
    SUMMARY_FILE,
    TIMESERIES_FILE,
    compare_modes,
    run_dir_name,
    run_experiment,
    summarize,
    sweep,
)
from fastersim.core.simulator import run
from fastersim.models.config import SimConfig
from fastersim.models.core import SimMode
from fastersim.models.results import DropReason
from fastersim.utils.csv_io import read_summary, read_timeseries
from fastersim.utils.run_store import RUN_META_FILE, load_run_config


def test_zero_ticks_writes_initial_rows_only(tmp_path: Path) -> None:
    config = SimConfig(n_nodes=10, ticks=0)
    artifacts = run_experiment(config, tmp_path)
    frame = pd.read_csv(tmp_path / TIMESERIES_FILE)
    assert len(frame) == 10
    assert set(frame["tick"]) == {0}
    assert artifacts.summary.mean_lifetime == 1.0
    assert artifacts.summary.delivery_rate == 0.0
    assert artifacts.summary.richness_stddev_final == 0.0


def test_run_directory_contents(tmp_path: Path) -> None:
    config = SimConfig(n_nodes=8, ticks=10, packet_log=True)
    artifacts = run_experiment(config, tmp_path)
    names = {path.name for path in artifacts.files}
    assert {TIMESERIES_FILE, SUMMARY_FILE, PACKETS_FILE, RUN_META_FILE} <= names
    assert all(path.exists() for path in artifacts.files)
    assert load_run_config(tmp_path / RUN_META_FILE) == config
    packets = pd.read_csv(tmp_path / PACKETS_FILE)
    assert len(packets) == artifacts.result.packets_sent


def test_packet_log_is_opt_in(tmp_path: Path) -> None:
    run_experiment(SimConfig(n_nodes=5, ticks=5), tmp_path)
    assert not (tmp_path / PACKETS_FILE).exists()


def test_outputs_are_byte_identical_across_runs(tmp_path: Path) -> None:
    config = SimConfig(n_nodes=10, ticks=30, p_send=0.3, seed=4, packet_log=True)
    first = run_experiment(config, tmp_path / "a")
    run_experiment(config, tmp_path / "b")
    for path in first.files:
        assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()


def test_plotdata_has_one_row_per_tick(tmp_path: Path) -> None:
    run_experiment(SimConfig(), tmp_path)
    for name in (PLOT_RICHNESS_FILE, PLOT_BATTERY_FILE):
        frame = pd.read_csv(tmp_path / name, index_col="tick")
        assert frame.shape == (201, 20)
        assert list(frame.index) == list(range(201))


def test_richness_plot_sums_to_issuance(tmp_path: Path) -> None:
    config = SimConfig(n_nodes=12, ticks=50, p_send=0.4, seed=8)
    run_experiment(config, tmp_path)
    frame = pd.read_csv(tmp_path / PLOT_RICHNESS_FILE, index_col="tick")
    assert (frame.sum(axis=1) == 12 * config.initial_richness).all()


def test_timeseries_reads_back(tmp_path: Path) -> None:
    artifacts = run_experiment(SimConfig(n_nodes=6, ticks=15, seed=2), tmp_path)
    assert read_timeseries(tmp_path / TIMESERIES_FILE) == artifacts.result.time_series


def test_summary_matches_result(tmp_path: Path) -> None:
    artifacts = run_experiment(SimConfig(n_nodes=10, ticks=60, p_send=0.3), tmp_path)
    (stored,) = read_summary(tmp_path / SUMMARY_FILE)
    assert stored == artifacts.summary
    result = artifacts.result
    assert sum(stored.drops.values()) == result.packets_dropped
    assert stored.delivery_rate == pytest.approx(
        result.packets_delivered / result.packets_sent
    )


def test_summarize_counts_survivors_as_outliving_the_run() -> None:
    result = run(SimConfig(n_nodes=4, ticks=3, p_send=0.0))
    summary = summarize(result)
    assert summary.mean_lifetime == 4.0
    assert summary.drops == dict.fromkeys(DropReason, 0)


def test_compare_modes(tmp_path: Path) -> None:
    calls: List[Tuple[SimMode, int]] = []
    config = SimConfig(n_nodes=8, ticks=20)
    report = compare_modes(
        config, [1, 2], tmp_path, on_run=lambda mode, seed: calls.append((mode, seed))
    )
    assert [row.seed for row in report.rows] == [1, 2]
    assert report.n_nodes == 8
    assert 0.0 <= report.richness_win_fraction <= 1.0
    assert 0.0 <= report.lifetime_win_fraction <= 1.0
    assert sorted(calls) == sorted(
        (mode, seed) for mode in SimMode for seed in (1, 2)
    )
    for mode in SimMode:
        for seed in (1, 2):
            run_dir = tmp_path / run_dir_name(mode, seed)
            assert (run_dir / SUMMARY_FILE).exists()
            assert load_run_config(run_dir / RUN_META_FILE).mode is mode
    assert len(pd.read_csv(tmp_path / COMPARISON_FILE)) == 2


def test_compare_modes_shares_topology_between_modes(tmp_path: Path) -> None:
    compare_modes(SimConfig(n_nodes=6, ticks=5), [3], tmp_path)
    faster = (tmp_path / "faster-seed3" / "topology.csv").read_bytes()
    baseline = (tmp_path / "baseline-seed3" / "topology.csv").read_bytes()
    assert faster == baseline


def test_compare_modes_requires_seeds(tmp_path: Path) -> None:
    with pytest.raises(ValueError):
        compare_modes(SimConfig(), [], tmp_path)


def test_sweep_writes_one_directory_per_size(tmp_path: Path) -> None:
    reports = sweep(SimConfig(ticks=5), [4, 5], [1], tmp_path)
    assert sorted(reports) == [4, 5]
    assert reports[5].n_nodes == 5
    for n_nodes in (4, 5):
        assert (tmp_path / f"n{n_nodes}" / COMPARISON_FILE).exists()


@pytest.mark.slow
def test_parallel_compare_matches_serial(tmp_path: Path) -> None:
    config = SimConfig(n_nodes=10, ticks=40)
    serial = compare_modes(config, [1, 2, 3], tmp_path / "serial")
    parallel = compare_modes(config, [1, 2, 3], tmp_path / "parallel", workers=2)
    assert serial == parallel


@pytest.mark.slow
def test_seed_1_faster_is_fairer_and_lasts_longer() -> None:
    config = SimConfig(seed=1)
    faster = summarize(run(config))
    baseline = summarize(run(config.model_copy(update={"mode": SimMode.BASELINE})))
    assert faster.richness_stddev_final < baseline.richness_stddev_final
    assert faster.mean_lifetime > baseline.mean_lifetime


@pytest.mark.slow
def test_default_batch_favours_faster(tmp_path: Path) -> None:
    report = compare_modes(SimConfig(), list(range(1, 21)), tmp_path)
    assert len(report.rows) == 20
    assert report.richness_win_fraction >= 0.8
    assert report.lifetime_win_fraction >= 0.8
    for row in report.rows:
        assert 0 < row.mean_lifetime_faster <= SimConfig().ticks + 1
        assert 0 < row.mean_lifetime_baseline <= SimConfig().ticks + 1
