"""CLI subcommand modules."""

from . import extract, reconstruct, solve, validate

__all__ = ["extract", "reconstruct", "solve", "validate"]
