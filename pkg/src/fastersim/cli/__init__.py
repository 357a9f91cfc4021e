"""Command-line interface for fastersim.

The Typer app lives in :mod:`fastersim.cli.commands`; Rich console helpers in
:mod:`fastersim.cli.console` and table rendering in :mod:`fastersim.cli.renderer`.
"""

from fastersim.cli.commands import app

__all__ = ["app"]
