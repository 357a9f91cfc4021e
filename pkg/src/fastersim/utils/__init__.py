"""Utility modules for fastersim: configuration, logging, settings and file I/O."""
