"""Configure pytest."""

import os
import sys
from pathlib import Path

import pytest

# Get the project root directory
root_dir = Path(__file__).parent

# Add src directory to Python path
src_path = str(root_dir / "src")
if src_path not in sys.path:
    sys.path.insert(0, src_path)

# Remove any duplicate paths
sys.path = list(dict.fromkeys(sys.path))

# Set PYTHONPATH environment variable
os.environ["PYTHONPATH"] = src_path


@pytest.fixture(autouse=True)
def _isolate_fastersim_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Drop FASTERSIM_* variables so the host environment never leaks into tests.

    Variables set by the code under test (``--no-rich``) are removed again on
    teardown.
    """
    from fastersim.models.config import SimConfig

    names = {"FASTERSIM_DEBUG", "FASTERSIM_NO_RICH", "FASTERSIM_WORKERS"}
    names.update(f"FASTERSIM_{key.upper()}" for key in SimConfig.model_fields)
    names.update(key for key in os.environ if key.startswith("FASTERSIM_"))
    for name in names:
        monkeypatch.delenv(name, raising=False)
