"""
Main CLI entry point for hetanova
"""

import logging
import sys

from hetanova.cli.args import create_parser, parse_args
from hetanova.cli.commands import (
    cmd_ci,
    cmd_quantile,
    cmd_simulate,
    cmd_summarize,
    cmd_test,
)
from hetanova.utils.errors import HetAnovaError

logger = logging.getLogger("hetanova")


def main(argv=None):
    """Command line entry point."""
    args = parse_args(argv)

    # Configure logging
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    logger.setLevel(level)

    if args.command is None:
        # No command specified, show help
        create_parser().print_help()
        sys.exit(1)

    # Map commands to their handler functions
    command_handlers = {
        "summarize": cmd_summarize,
        "test": cmd_test,
        "ci": cmd_ci,
        "simulate": cmd_simulate,
        "quantile": cmd_quantile,
    }

    handler = command_handlers.get(args.command)
    if not handler:
        logger.error(f"Unknown command: {args.command}")
        sys.exit(1)

    try:
        success = handler(args)
    except HetAnovaError as e:
        logger.error(str(e))
        sys.exit(e.exit_code)
    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
