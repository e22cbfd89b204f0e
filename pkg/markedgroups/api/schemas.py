"""
Pydantic schemas for the machine-readable reports
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from markedgroups.config import Config
from markedgroups.models.verdicts import Verdict


class PieceReportModel(BaseModel):
    """A 1/6-large piece found at two locations"""
    witness: str
    relator_index: int
    position: int
    second_relator: int
    second_position: int
    second_orientation: int = Field(..., description="+1 for the relator, -1 for its inverse")
    ratio: str


class DehnStepModel(BaseModel):
    """One substitution of Dehn's algorithm"""
    step: int
    input_word: str
    piece: str
    relator_index: int
    output_word: str


class KernelRow(BaseModel):
    """One normal subgroup in a chabauty-scan table"""
    kernel: str
    group: str
    index: int
    in_open_set: Optional[Verdict] = None
    isolated: Optional[bool] = None
    separator: Optional[str] = None


class ReportDocument(BaseModel):
    """Versioned report emitted by every subcommand"""
    schema_version: str = Field(default_factory=lambda: Config.REPORT_SCHEMA_VERSION)
    report_id: str
    command: str
    verdict: Verdict
    summary: str
    witnesses: Dict[str, Any] = Field(default_factory=dict)
    traces: List[Dict[str, Any]] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "schema_version": "1.0",
                "report_id": "RPT_DEHN_3F1A9C0B22D4",
                "command": "dehn",
                "verdict": "trivial",
                "summary": "Word is trivial after 1 Dehn step",
                "witnesses": {"reduced_word": "1"},
                "traces": [{"step": 1, "input_word": "x1 y1 x1^-1 y1^-1 x2 y2 x2^-1 y2^-1",
                            "piece": "x1 y1 x1^-1 y1^-1 x2", "relator_index": 1, "output_word": "1"}],
                "details": {"word_length": 8, "steps": 1, "step_bound": 8},
                "timings": {"parse_ms": 0.21, "dehn_ms": 0.42}
            }
        }
    )

    @field_validator('schema_version')
    @classmethod
    def schema_version_present(cls, v: str) -> str:
        if not v:
            raise ValueError("schema_version must be set")
        return v


class ErrorResponse(BaseModel):
    """Error response schema"""
    error: str
    message: str
    details: Optional[Dict[str, Any]] = None
