"""
Error Handler - CLI Layer

Maps domain exceptions and click usage errors to structured JSON error
bodies on stderr and to process exit codes. Centralised here so individual
commands never need try/except for domain exceptions.

Exit code mapping:
  ValidationError / ConfigurationError  → 1
  SystemFileError                       → 1  (line / column when known)
  PreconditionViolation                 → 1
  EntityNotFoundError                   → 1
  DuplicateEntityError                  → 1
  click usage errors                    → 1
  mathematical check failed             → 2  (a report verdict, set by the command)
  Unhandled Exception                   → 1  INTERNAL_ERROR
"""
import logging
import sys
import traceback
import uuid
from typing import Any, Optional

import click

from domain.exceptions.domain_exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    DomainError,
    DuplicateEntityError,
    EntityNotFoundError,
    PreconditionViolation,
    ValidationError,
)
from infrastructure.logging import get_logger
from infrastructure.persistence.system_file_codec import SystemFileError

from ..schemas.error_schemas import ErrorResponse, ParseErrorResponse, ValidationErrorResponse

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2

logger = get_logger(__name__, logging.WARNING)


def _error_body(
    error_code: str,
    message: str,
    details: Optional[str] = None,
    **extra: Any,
) -> ErrorResponse:
    return ErrorResponse(error_code=error_code, message=message, exit_code=EXIT_USAGE, details=details, **extra)


def _emit(body: ErrorResponse) -> int:
    click.echo(body.model_dump_json(exclude_none=True), err=True)
    return body.exit_code


def handle_exception(exc: BaseException) -> int:
    """Write the error body for exc to stderr and return the exit code (specific → general order)."""

    # ------------------------------------------------------------------ #
    # 1. click usage errors
    # ------------------------------------------------------------------ #
    if isinstance(exc, click.UsageError):
        usage = exc.ctx.get_usage() if exc.ctx is not None else None
        return _emit(_error_body("USAGE_ERROR", exc.format_message(), usage=usage))
    if isinstance(exc, click.ClickException):
        return _emit(_error_body("USAGE_ERROR", exc.format_message()))
    if isinstance(exc, click.Abort):
        return _emit(_error_body("ABORTED", "Aborted"))

    # ------------------------------------------------------------------ #
    # 2. Domain exceptions
    # ------------------------------------------------------------------ #
    if isinstance(exc, SystemFileError):
        return _emit(ParseErrorResponse(
            message=exc.message,
            exit_code=EXIT_USAGE,
            line=exc.line,
            column=exc.column,
            location=exc.location,
        ))
    if isinstance(exc, ValidationError):
        return _emit(ValidationErrorResponse(
            error_code="CONFIGURATION_ERROR" if isinstance(exc, ConfigurationError) else "VALIDATION_ERROR",
            message=exc.message,
            exit_code=EXIT_USAGE,
            details=f"Field: {exc.field}",
            validation_errors=[{"field": exc.field, "message": exc.message}],
        ))
    if isinstance(exc, EntityNotFoundError):
        return _emit(_error_body(
            "ENTITY_NOT_FOUND", str(exc), entity_type=exc.entity_type, identifier=exc.identifier,
        ))
    if isinstance(exc, DuplicateEntityError):
        return _emit(_error_body(
            "DUPLICATE_ENTITY", str(exc), entity_type=exc.entity_type, identifier=exc.identifier,
        ))
    if isinstance(exc, PreconditionViolation):
        return _emit(_error_body("PRECONDITION_VIOLATION", exc.message, operation=exc.operation, rule=exc.rule))
    if isinstance(exc, DimensionMismatchError):
        return _emit(_error_body(
            "DIMENSION_MISMATCH", exc.message, what=exc.what, expected=exc.expected, actual=exc.actual,
        ))
    # Catch-all for any remaining DomainError subclasses
    if isinstance(exc, DomainError):
        return _emit(_error_body("DOMAIN_ERROR", exc.message))

    # ------------------------------------------------------------------ #
    # 3. Unhandled exceptions
    # ------------------------------------------------------------------ #
    correlation_id = str(uuid.uuid4())
    logger.error("Unhandled exception", error=exc if isinstance(exc, Exception) else None,
                 correlation_id=correlation_id, traceback=traceback.format_exc())
    return _emit(_error_body(
        "INTERNAL_ERROR",
        "An unexpected error occurred.",
        details=f"{type(exc).__name__}: {exc}",
        correlation_id=correlation_id,
    ))


class ErrorHandlingGroup(click.Group):
    """
    click group that owns the exit-code contract.

    Commands signal a failed mathematical check with ctx.exit(EXIT_CHECK_FAILED);
    every exception is rendered by handle_exception.
    """

    def main(self, *args: Any, **kwargs: Any) -> Any:  # type: ignore[override]
        kwargs["standalone_mode"] = False
        try:
            result = super().main(*args, **kwargs)
        except Exception as exc:  # noqa: BLE001
            sys.exit(handle_exception(exc))
        # Non-standalone click returns the Exit code of ctx.exit(), or the callback's return value
        sys.exit(result if isinstance(result, int) else EXIT_OK)
