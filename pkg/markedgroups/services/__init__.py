"""
Services module for markedgroups
"""

from .presentation_service import (
    format_presentation,
    format_word,
    load_open_set,
    load_presentation,
    parse_open_set,
    parse_presentation,
    parse_word
)
from .report_service import ReportService

__all__ = [
    'format_presentation',
    'format_word',
    'load_open_set',
    'load_presentation',
    'parse_open_set',
    'parse_presentation',
    'parse_word',
    'ReportService'
]
