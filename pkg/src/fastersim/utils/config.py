"""Experiment configuration loading.

Two on-disk formats are accepted:

* the flat text format, one ``key = value`` per line with ``#`` comments;
* a ``.toml`` file holding the same keys as a flat table (read with tomli).

Keys are exactly the SimConfig field names, plus ``area = WxH`` as shorthand
for ``area_width`` and ``area_height``. Missing keys take SimConfig defaults.

``resolve_config`` layers settings with precedence
CLI > environment (``FASTERSIM_<FIELD>``) > config file > defaults.
"""

import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import tomli
from pydantic import ValidationError

from fastersim.models.config import SimConfig

ENV_PREFIX = "FASTERSIM_"
AREA_KEY = "area"


class ConfigError(ValueError):
    """Raised for malformed, unknown or out-of-range configuration entries."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        """Initialize the error, prefixing the message with the line number."""
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _make_env_var_name(key: str, prefix: str = ENV_PREFIX) -> str:
    """Convert a config key to its environment variable name.

    Example: "p_send" -> "FASTERSIM_P_SEND".
    """
    return prefix + key.replace(".", "_").upper()


def _split_area(value: Any, line: Optional[int]) -> Tuple[str, str]:
    width, sep, height = str(value).lower().partition("x")
    if not sep or not width.strip() or not height.strip():
        raise ConfigError(f"area must look like WIDTHxHEIGHT, got {value!r}", line)
    return width.strip(), height.strip()


def _store(
    values: Dict[str, Any],
    lines: Dict[str, int],
    key: str,
    value: Any,
    line: Optional[int],
) -> None:
    if key == AREA_KEY:
        width, height = _split_area(value, line)
        _store(values, lines, "area_width", width, line)
        _store(values, lines, "area_height", height, line)
        return
    if key not in SimConfig.model_fields:
        raise ConfigError(f"unknown key {key!r}", line)
    if key in values:
        raise ConfigError(f"duplicate key {key!r}", line)
    values[key] = value
    if line is not None:
        lines[key] = line


def _read_flat(path: Path) -> Tuple[Dict[str, Any], Dict[str, int]]:
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    text = path.read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", number)
        _store(values, lines, key, value, number)
    return values, lines


def _read_toml(path: Path) -> Dict[str, Any]:
    try:
        with path.open("rb") as f:
            data = tomli.load(f)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    values: Dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"nested table {key!r} is not supported")
        _store(values, {}, key, value, None)
    return values


def read_config_values(path: Path) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """Read raw (unvalidated) values and the line each key came from."""
    if path.suffix.lower() == ".toml":
        return _read_toml(path), {}
    return _read_flat(path)


def _validate(values: Mapping[str, Any], lines: Mapping[str, int]) -> SimConfig:
    try:
        return SimConfig.model_validate(dict(values))
    except ValidationError as exc:
        first = exc.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else None
        line = lines.get(field) if field else None
        where = f"{field}: " if field else ""
        raise ConfigError(f"{where}{first['msg']}", line) from exc


def parse_config(path: Path) -> SimConfig:
    """Parse a config file into a validated SimConfig.

    Raises:
        ConfigError: On a malformed line, an unknown or duplicate key, or an
            out-of-range value. Errors from the flat format name the line.
        OSError: If the file cannot be read.
    """
    values, lines = read_config_values(Path(path))
    return _validate(values, lines)


def env_overrides(environ: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
    """SimConfig values set through ``FASTERSIM_<FIELD>`` environment variables."""
    environ = os.environ if environ is None else environ
    found: Dict[str, str] = {}
    for key in SimConfig.model_fields:
        env_var = _make_env_var_name(key)
        if env_var in environ:
            found[key] = environ[env_var]
    return found


def resolve_config(
    path: Optional[Path] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> SimConfig:
    """Resolve a SimConfig using precedence CLI > env > config file > default.

    Args:
        path: Optional config file.
        overrides: Values given on the command line; ``None`` entries are
            treated as "not provided".
    """
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    if path is not None:
        values, lines = read_config_values(Path(path))
    for key, value in env_overrides().items():
        values[key] = value
        lines.pop(key, None)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in SimConfig.model_fields:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = value
        lines.pop(key, None)
    return _validate(values, lines)
