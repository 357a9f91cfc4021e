"""Run metadata stored next to each run's CSV outputs.

``run.meta.yaml`` records the package version, the mode and seed, and the
fully resolved configuration so a run can be reproduced from its output
directory alone. No timestamps or host details are written, keeping the file
byte-identical across repeated runs.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict

import yaml
from pydantic import BaseModel

from fastersim.__about__ import __version__
from fastersim.models.config import SimConfig

RUN_META_FILE = "run.meta.yaml"


def path_representer(dumper: yaml.SafeDumper, data: Path) -> yaml.ScalarNode:
    """Custom YAML representer for Path objects."""
    return dumper.represent_scalar("tag:yaml.org,2002:str", str(data))


def enum_representer(dumper: yaml.SafeDumper, data: Enum) -> yaml.ScalarNode:
    """Custom YAML representer for Enum objects."""
    return dumper.represent_scalar("tag:yaml.org,2002:str", str(data.value))


yaml.SafeDumper.add_multi_representer(Path, path_representer)
yaml.SafeDumper.add_multi_representer(Enum, enum_representer)


class RunMetadata(BaseModel):
    """What produced a run directory."""

    version: str
    mode: str
    seed: int
    config: Dict[str, Any]

    @classmethod
    def for_config(cls, config: SimConfig) -> "RunMetadata":
        return cls(
            version=__version__,
            mode=config.mode.value,
            seed=config.seed,
            config=config.model_dump(),
        )


def save_run_metadata(config: SimConfig, out_dir: Path) -> Path:
    """Write ``run.meta.yaml`` into *out_dir* and return its path."""
    path = Path(out_dir) / RUN_META_FILE
    meta = RunMetadata.for_config(config)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        yaml.safe_dump(meta.model_dump(), f, sort_keys=False)
    return path


def load_run_metadata(path: Path) -> RunMetadata:
    with Path(path).open(encoding="utf-8") as f:
        return RunMetadata.model_validate(yaml.safe_load(f))


def load_run_config(path: Path) -> SimConfig:
    """Rebuild the SimConfig recorded in a ``run.meta.yaml`` file."""
    return SimConfig.model_validate(load_run_metadata(path).config)
