"""
Command-line subcommands: argument wiring, report rendering and exit codes
"""
import argparse
import logging
import sys
from typing import Callable, Optional, TextIO, Tuple

import pandas as pd

from markedgroups.api.schemas import ErrorResponse, ReportDocument
from markedgroups.models.errors import BudgetExceededError, ParseError
from markedgroups.services.presentation_service import read_text
from markedgroups.services.report_service import ReportService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_BUDGET_EXCEEDED = 2

Outcome = Tuple[ReportDocument, Optional[pd.DataFrame]]
Handler = Callable[[ReportService, argparse.Namespace], Outcome]


def _check_c16(service: ReportService, args: argparse.Namespace) -> Outcome:
    return service.check_c16(read_text(args.file)), None


def _dehn(service: ReportService, args: argparse.Namespace) -> Outcome:
    return service.dehn(read_text(args.file), args.word, args.max_steps), None


def _independent(service: ReportService, args: argparse.Namespace) -> Outcome:
    return service.independent(read_text(args.file)), None


def _wreath(service: ReportService, args: argparse.Namespace) -> Outcome:
    return service.wreath(args.n, args.drop), None


def _coxeter(service: ReportService, args: argparse.Namespace) -> Outcome:
    return service.coxeter(args.mu, args.word), None


def _abels(service: ReportService, args: argparse.Namespace) -> Outcome:
    eigenline = None
    if args.check_eigenline:
        a, b, i = args.check_eigenline
        try:
            index = int(i)
        except ValueError:
            raise ParseError(f"Eigenline index must be 1 or 2, got {i!r}") from None
        eigenline = (a, b, index)
    return service.abels(args.p, args.precision, eigenline), None


def _thompson(service: ReportService, args: argparse.Namespace) -> Outcome:
    return service.thompson(' '.join(args.expr)), None


def _chabauty_scan(service: ReportService, args: argparse.Namespace) -> Outcome:
    open_set_text = read_text(args.open_set) if args.open_set else None
    return service.chabauty_scan(
        args.rank, args.index, open_set_text,
        isolate=args.isolate,
        separator_budget=args.separator_budget,
        min_index=args.min_index,
    )


def register_subcommands(subparsers) -> None:
    """Add every subcommand to an argparse subparsers action"""
    p = subparsers.add_parser('check-c16', help="Check the C'(1/6) condition of a presentation")
    p.add_argument('file', help='Presentation file')
    p.set_defaults(handler=_check_c16)

    p = subparsers.add_parser('dehn', help="Decide triviality of a word with Dehn's algorithm")
    p.add_argument('file', help='Presentation file (C\'(1/6))')
    p.add_argument('word', help='Word literal, e.g. "x1 y1 X1 Y1"')
    p.add_argument('--max-steps', type=int, default=None,
                   help='Step cap (default MARKEDGROUPS_DEHN_MAX_STEPS; 0 = |w|)')
    p.set_defaults(handler=_dehn)

    p = subparsers.add_parser('independent', help='Check that no relator follows from the others')
    p.add_argument('file', help='Presentation file (C\'(1/6))')
    p.set_defaults(handler=_independent)

    p = subparsers.add_parser('wreath', help='Emit and certify the wreath relators u_1..u_n')
    p.add_argument('--n', type=int, required=True, help='Number of relators')
    p.add_argument('--drop', type=int, default=None, help='Only certify u_S against the others')
    p.set_defaults(handler=_wreath)

    p = subparsers.add_parser('coxeter', help='Tits word problem for a shift-invariant Coxeter matrix')
    p.add_argument('--mu', required=True, help="Distance map, e.g. '1=3,2=2,*=inf'")
    p.add_argument('word', help='Space-separated integer vertices, e.g. "0 1 0 1 0 1"')
    p.set_defaults(handler=_coxeter)

    p = subparsers.add_parser('abels', help='Hensel and eigenline certificates at a prime p')
    p.add_argument('--p', type=int, required=True, help='Odd prime')
    p.add_argument('--precision', type=int, required=True, help='p-adic precision k')
    p.add_argument('--check-eigenline', nargs=3, metavar=('A', 'B', 'I'), default=None,
                   help='Decide (A, B) in E_I; A and B are rationals with p-power denominators')
    p.set_defaults(handler=_abels)

    p = subparsers.add_parser('thompson', help="Evaluate an expression in Thompson's group F")
    p.add_argument('expr', nargs='+', help='Expression, e.g. "characters(compose(A, inverse(B)))"')
    p.set_defaults(handler=_thompson)

    p = subparsers.add_parser('chabauty-scan', help='Enumerate low-index normal subgroups of F_m')
    p.add_argument('--rank', type=int, required=True, help='Rank m of the free group')
    p.add_argument('--index', type=int, required=True, help='Largest index n')
    p.add_argument('--min-index', type=int, default=2, help='Smallest index (default 2)')
    p.add_argument('--open-set', default=None, help='Open-set file to test every kernel against')
    p.add_argument('--isolate', action='store_true', help='Search a separating open set for every kernel')
    p.add_argument('--separator-budget', type=int, default=None,
                   help='Longest separating word (default MARKEDGROUPS_SEPARATOR_WORD_LENGTH)')
    p.set_defaults(handler=_chabauty_scan)


def render_human(report: ReportDocument, table: Optional[pd.DataFrame] = None) -> str:
    """Banner-style summary for terminals"""
    marker = '✗' if report.verdict.value in ('violation', 'dependent', 'nontrivial', 'nonmember') else '✓'
    lines = [
        "=" * 60,
        f"  {report.command}: {marker} {report.verdict.value}",
        "=" * 60,
        f"  {report.summary}",
        f"  Report: {report.report_id} (schema {report.schema_version})",
    ]
    for key, value in report.witnesses.items():
        lines.append(f"  {key}: {value}")
    for step in report.traces:
        lines.append(f"  step {step.get('step')}: {step}")
    if table is not None:
        lines.append("")
        lines.append(table.to_string(index=False) if len(table) else "  (no kernels)")
    elif 'presentation' in report.details:
        lines.append("")
        lines.append(report.details['presentation'].rstrip())
    timing = ', '.join(f"{k}={v}" for k, v in report.timings.items())
    lines.append(f"  Timings: {timing}")
    lines.append("=" * 60)
    return '\n'.join(lines) + '\n'


def _error(kind: str, exc: Exception, human: bool, stdout: TextIO, stderr: TextIO) -> None:
    details = {}
    for attr in ('line', 'column'):
        if getattr(exc, attr, None) is not None:
            details[attr] = getattr(exc, attr)
    body = ErrorResponse(error=kind, message=str(exc), details=details or None)
    if human:
        stderr.write(f"\n❌ {kind}: {exc}\n")
    else:
        stdout.write(body.model_dump_json(indent=2) + '\n')


def run_command(args: argparse.Namespace, stdout: TextIO = None, stderr: TextIO = None) -> int:
    """
    Run the parsed subcommand and write its report

    Returns:
        0 when a verdict was computed (undetermined included), 1 for input
        errors, 2 when a search budget ran out
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    human = getattr(args, 'human', False)
    try:
        service = ReportService(node_limit=args.node_limit, seed=args.seed)
        report, table = args.handler(service, args)
    except BudgetExceededError as e:
        logger.info("Budget exceeded: %s", e)
        _error('Budget Exceeded', e, human, stdout, stderr)
        return EXIT_BUDGET_EXCEEDED
    except ValueError as e:
        logger.info("Input error: %s", e)
        _error('Bad Input', e, human, stdout, stderr)
        return EXIT_INPUT_ERROR
    except OSError as e:
        _error('Bad Input', e, human, stdout, stderr)
        return EXIT_INPUT_ERROR

    if human:
        stdout.write(render_human(report, table))
    else:
        stdout.write(report.model_dump_json(indent=2) + '\n')
    return EXIT_OK
