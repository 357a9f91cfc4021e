"""Runtime settings that do not change simulation results.

Loaded from ``FASTERSIM_*`` environment variables, e.g. ``FASTERSIM_DEBUG=1``
or ``FASTERSIM_WORKERS=4``.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class RuntimeSettings(BaseSettings):
    """Process-level switches for logging, console output and parallelism."""

    model_config = SettingsConfigDict(env_prefix="FASTERSIM_", extra="ignore")

    debug: bool = False
    no_rich: bool = False
    workers: int = Field(1, ge=1)
    """Worker processes used by ``compare`` and ``sweep``."""
