"""Command-line interface: build, measure, trees, verify, sample and chern."""

from .main import cli, main, run

__all__ = ["cli", "main", "run"]
