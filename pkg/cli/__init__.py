"""
Command-line front end: argument parsing, config resolution, dispatch.
"""

from cli.main import build_parser, collect_overrides, main, resolve_config

__all__ = ["build_parser", "collect_overrides", "main", "resolve_config"]
