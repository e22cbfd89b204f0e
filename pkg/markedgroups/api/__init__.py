"""
API module for markedgroups: report schemas and the command-line surface
"""

from .schemas import (
    DehnStepModel,
    ErrorResponse,
    KernelRow,
    PieceReportModel,
    ReportDocument
)

__all__ = [
    'DehnStepModel',
    'ErrorResponse',
    'KernelRow',
    'PieceReportModel',
    'ReportDocument'
]
