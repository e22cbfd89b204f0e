"""
Utility helper functions for markedgroups
"""
import hashlib
import json
import logging
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from typing import Any, Dict, Iterator, Optional

from markedgroups.models.errors import ParseError

_HANDLER_NAME = 'markedgroups-stderr'


def configure_logging(level: str = 'WARNING') -> logging.Logger:
    """
    Install a single stderr handler on the package logger

    Calling it again changes the level and rebinds the handler to the current
    sys.stderr; repeated CLI invocations in one process never stack handlers.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ERROR, CRITICAL)

    Returns:
        The package logger
    """
    logger = logging.getLogger('markedgroups')
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level: {level}")
    logger.setLevel(numeric)
    existing = [h for h in logger.handlers if h.get_name() == _HANDLER_NAME]
    if existing:
        existing[0].setStream(sys.stderr)
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.set_name(_HANDLER_NAME)
        handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def _canonical(value: Any) -> Any:
    """JSON-compatible, order-independent rendering of report inputs"""
    if isinstance(value, dict):
        return {str(k): _canonical(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (set, frozenset)):
        return sorted((_canonical(v) for v in value), key=repr)
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def generate_report_id(command: str, inputs: Dict[str, Any]) -> str:
    """
    Deterministic report ID from the command and its canonical inputs

    Args:
        command: Subcommand name, e.g. 'check-c16'
        inputs: Canonicalised inputs (presentation text, flags, ...)

    Returns:
        An ID of the form RPT_<COMMAND>_<HASH>
    """
    payload = json.dumps({'command': command, 'inputs': _canonical(inputs)}, sort_keys=True)
    digest = hashlib.sha256(payload.encode('utf-8')).hexdigest()[:12]
    tag = command.upper().replace('-', '_')
    return f"RPT_{tag}_{digest.upper()}"


@contextmanager
def timed(timings: Dict[str, float], name: str) -> Iterator[None]:
    """Record the wall time of the block in milliseconds under timings[name]"""
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = round((time.perf_counter() - start) * 1000.0, 3)


def parse_rational(text: str, line: Optional[int] = None) -> Fraction:
    """
    Parse '5', '-1/27' or '3/9' into an exact Fraction

    Raises:
        ParseError: not an integer or a quotient of integers
    """
    cleaned = text.strip()
    try:
        if '.' in cleaned or 'e' in cleaned.lower():
            raise ValueError(cleaned)
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Expected a rational such as 5 or -1/27, got {text!r}", line) from None


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
