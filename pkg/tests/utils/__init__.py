"""Utilities test package."""
