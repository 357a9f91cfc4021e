"""Main entry point for the fastersim CLI."""

from fastersim.cli import app

if __name__ == "__main__":
    app()
