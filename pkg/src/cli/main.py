"""Command-line entry point."""

from typing import Optional, Sequence
import argparse
import json
import logging
import sys

from .commands import extract, reconstruct, solve, validate
from ..core.config import settings
from ..core.exceptions import EXIT_DOMAIN_ERROR, EXIT_USAGE_ERROR, ReconstructionError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true', help="Log at DEBUG level")

    parser = argparse.ArgumentParser(
        prog='pmr',
        description=f"{settings.app_name} v{settings.version}",
    )
    subparsers = parser.add_subparsers(dest='command', required=True, metavar='<command>')
    for command in (reconstruct, extract, solve, validate):
        command.register(subparsers, parents=[common])
    return parser


def configure_logging(verbose: bool = False) -> None:
    """Send log records to stderr; stdout carries command output only."""
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(level=level, format=settings.log_format, stream=sys.stderr, force=True)


def report_error(exc: ReconstructionError) -> None:
    print(f"error: {exc.error_code}: {exc.message}", file=sys.stderr)
    if exc.details:
        print(json.dumps(exc.details, default=str), file=sys.stderr)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit code.

    0 on success, 1 on domain errors (parse, extraction, infeasible), 2 on usage errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for bad arguments
        return e.code if isinstance(e.code, int) else EXIT_USAGE_ERROR

    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ReconstructionError as e:
        report_error(e)
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_DOMAIN_ERROR


def main() -> None:
    sys.exit(run_cli())
