"""Command-line surface: gen-trace, characterize, model, sweep, advise"""

from .app import build_parser, run

__all__ = ["build_parser", "run"]
