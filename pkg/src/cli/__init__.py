"""Command-line front end."""

from src.cli.config import CliConfig, build_config, build_parser, parse_args
from src.cli.run import report_error, run

__all__ = ["CliConfig", "build_config", "build_parser", "parse_args", "report_error", "run"]
