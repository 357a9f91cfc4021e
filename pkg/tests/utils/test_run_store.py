"""Tests for run.meta.yaml persistence."""

from pathlib import Path

import yaml

from fastersim.__about__ import __version__
from fastersim.models.config import SimConfig
from fastersim.models.core import SimMode
from fastersim.utils.run_store import (
    RUN_META_FILE,
    load_run_config,
    load_run_metadata,
    save_run_metadata,
)


def test_metadata_round_trip(tmp_path: Path) -> None:
    config = SimConfig(mode=SimMode.BASELINE, seed=11, n_nodes=7)
    path = save_run_metadata(config, tmp_path)
    assert path == tmp_path / RUN_META_FILE
    meta = load_run_metadata(path)
    assert meta.version == __version__
    assert (meta.mode, meta.seed) == ("baseline", 11)
    assert load_run_config(path) == config


def test_enums_are_plain_strings(tmp_path: Path) -> None:
    path = save_run_metadata(SimConfig(), tmp_path)
    text = path.read_text(encoding="utf-8")
    assert "!!python" not in text
    data = yaml.safe_load(text)
    assert data["config"]["mode"] == "faster"
    assert data["config"]["routing_policy"] == "min_energy"
    assert list(data) == ["version", "mode", "seed", "config"]
