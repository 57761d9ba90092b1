"""
Error Schemas - CLI Layer
Pydantic models for the structured error bodies written to stderr
"""
from datetime import datetime
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ErrorResponse(BaseModel):
    """Standard error body; handlers may attach extra context fields."""

    model_config = ConfigDict(extra="allow")

    error_code: str = Field(..., description="Machine-readable error code")
    message: str = Field(..., description="Human-readable error message")
    exit_code: int = Field(..., ge=1, le=2, description="Process exit status")
    details: Optional[str] = Field(None, description="Additional error details")
    timestamp: datetime = Field(default_factory=datetime.now, description="Error timestamp")


class ValidationErrorDetail(BaseModel):
    field: str
    message: str
    value: Optional[Any] = None


class ValidationErrorResponse(ErrorResponse):
    error_code: str = Field(default="VALIDATION_ERROR")
    validation_errors: List[ValidationErrorDetail] = Field(default_factory=list)


class ParseErrorResponse(ErrorResponse):
    """SystemFile syntax or schema error."""

    error_code: str = Field(default="SYSTEM_FILE_ERROR")
    line: Optional[int] = None
    column: Optional[int] = None
    location: Optional[str] = None
