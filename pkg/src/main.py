"""Main entry point for the heighttower command line."""

import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# Add project root to path
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from pydantic import ValidationError  # noqa: E402

from src.cli.config import build_config, parse_args  # noqa: E402
from src.cli.run import report_error, run  # noqa: E402
from src.errors import HeightTowerError  # noqa: E402
from src.utils.settings import load_settings  # noqa: E402


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, resolve settings and run one subcommand."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        configure_logging(bool(getattr(args, "verbose", False)))
        settings = load_settings(getattr(args, "config", None))
        config = build_config(args, settings, argv)
    except (HeightTowerError, ValidationError, OSError) as e:
        return report_error(e)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
