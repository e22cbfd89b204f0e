"""
Command-line application for markedgroups
"""
import argparse
import sys
from typing import List, Optional

from markedgroups import __version__
from markedgroups.api.commands import EXIT_INPUT_ERROR, register_subcommands, run_command
from markedgroups.config import Config
from markedgroups.models.errors import MarkedGroupsError
from markedgroups.utils.helpers import configure_logging


class CommandLineError(MarkedGroupsError, ValueError):
    """Unknown subcommand, missing or malformed flag"""


class _Parser(argparse.ArgumentParser):
    """Argument errors are input errors (exit 1), not argparse's exit 2"""

    def error(self, message):
        raise CommandLineError(f"{self.prog}: {message}")


def create_parser() -> argparse.ArgumentParser:
    """
    Parser factory
    Global flags come before the subcommand and override the environment
    """
    parser = _Parser(
        prog='markedgroups',
        description='Desk-scale toolkit for marked groups and small cancellation families',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--human', action='store_true', help='Human-readable output instead of JSON')
    parser.add_argument('--log-level', default=None,
                        help='DEBUG, INFO, WARNING, ERROR or CRITICAL (default MARKEDGROUPS_LOG_LEVEL)')
    parser.add_argument('--node-limit', type=int, default=None,
                        help='Coxeter search budget (default MARKEDGROUPS_COXETER_NODE_LIMIT)')
    parser.add_argument('--seed', type=int, default=None, help='Sampling seed (default MARKEDGROUPS_RANDOM_SEED)')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    register_subcommands(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    try:
        Config.validate()
        args = create_parser().parse_args(argv)
        configure_logging(args.log_level or Config.LOG_LEVEL)
    except ValueError as e:
        print(f"\n❌ Configuration Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return run_command(args)


if __name__ == '__main__':
    sys.exit(main())
