"""
Utilities module for markedgroups
"""

from .helpers import (
    configure_logging,
    format_fraction,
    generate_report_id,
    parse_rational,
    timed
)

__all__ = [
    'configure_logging',
    'format_fraction',
    'generate_report_id',
    'parse_rational',
    'timed'
]
