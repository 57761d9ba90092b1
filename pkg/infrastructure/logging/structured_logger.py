"""
Structured Logger - Infrastructure Layer

Thin wrapper around Python's stdlib logging that emits one JSON object per
line on standard error. Standard output is reserved for reports and
estimate tables, so a pipeline reading the output never sees log records.

Infrastructure components and CLI commands receive this logger via
constructor injection or get_logger(); application services keep using
logging.getLogger(__name__).
"""
import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional, Union

LevelLike = Union[int, str]


def _resolve_level(level: LevelLike) -> int:
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.strip().upper())
    return resolved if isinstance(resolved, int) else logging.WARNING


class StructuredLogger:
    """
    JSON-structured logger wrapping Python stdlib logging.

    Usage:
        logger = StructuredLogger("infrastructure.simulation")
        logger.info("Block finished", block=3, paths=4096)
        logger.error("Config rejected", error=exc, field="dt")
        logger.log_simulation_complete("switching", 100_000, 0.998, 0.004, 812.0)
    """

    def __init__(self, name: str, level: LevelLike = logging.INFO) -> None:
        self._logger = logging.getLogger(name)
        self._name = name

        # Attach a JSON handler only once per logger name
        if not self._logger.handlers:
            handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(_JsonFormatter())
            self._logger.addHandler(handler)
            self._logger.propagate = False

        self._logger.setLevel(_resolve_level(level))

    @property
    def name(self) -> str:
        return self._name

    # ------------------------------------------------------------------
    # Core log methods
    # ------------------------------------------------------------------

    def debug(self, message: str, **context: Any) -> None:
        self._emit(logging.DEBUG, message, **context)

    def info(self, message: str, **context: Any) -> None:
        self._emit(logging.INFO, message, **context)

    def warning(self, message: str, **context: Any) -> None:
        self._emit(logging.WARNING, message, **context)

    def error(self, message: str, error: Optional[Exception] = None, **context: Any) -> None:
        """
        Log at ERROR level with optional exception detail.

        Args:
            message: Human-readable error description.
            error:   The exception instance (optional). Its type and str() are
                     added to the structured record automatically.
            **context: Additional key-value fields to include in the JSON record.
        """
        if error is not None:
            context["error_type"] = type(error).__name__
            context["error_detail"] = str(error)
        self._emit(logging.ERROR, message, **context)

    # ------------------------------------------------------------------
    # Domain-specific convenience methods
    # ------------------------------------------------------------------

    def log_campaign_complete(
        self, campaign: str, instances: int, violations: int, duration_ms: float
    ) -> None:
        self.info(
            "Campaign complete",
            campaign=campaign,
            instances=instances,
            violations=violations,
            duration_ms=round(duration_ms, 2),
        )

    def log_simulation_complete(
        self, model: str, n_paths: int, mean: float, std_error: float, duration_ms: float, **context: Any
    ) -> None:
        self.info(
            "Simulation complete",
            model=model,
            n_paths=n_paths,
            mean=mean,
            std_error=std_error,
            duration_ms=round(duration_ms, 2),
            **context,
        )

    def log_check_failed(self, check: str, witness: Any) -> None:
        """One record per failed verdict; the witness is rendered with repr()."""
        self.warning("Check failed", check=check, witness=repr(witness))

    def log_verification_complete(self, source: str, passed: bool, duration_ms: float) -> None:
        self.info(
            "Verification complete",
            source=source,
            passed=passed,
            duration_ms=round(duration_ms, 2),
        )

    # ------------------------------------------------------------------
    # Internal
    # ------------------------------------------------------------------

    def _emit(self, level: int, message: str, **context: Any) -> None:
        extra = {"structured_context": context}
        self._logger.log(level, message, extra=extra)


class _JsonFormatter(logging.Formatter):
    """
    Formats log records as single-line JSON objects.

    Output example:
        {"ts": "2026-02-27T10:00:00+00:00", "level": "INFO", "logger": "cli.verify",
         "message": "Verification complete", "passed": true}
    """

    def format(self, record: logging.LogRecord) -> str:  # noqa: A003
        payload: Dict[str, Any] = {
            "ts": datetime.now(tz=timezone.utc).isoformat(timespec="seconds"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        context = getattr(record, "structured_context", {})
        payload.update(context)

        if record.exc_info:
            payload["traceback"] = self.formatException(record.exc_info)

        return json.dumps(payload, default=str)


def get_logger(name: str, level: LevelLike = logging.INFO) -> StructuredLogger:
    """
    Factory function for obtaining a StructuredLogger.

    Example:
        from infrastructure.logging import get_logger
        logger = get_logger(__name__, settings.log_level)
    """
    return StructuredLogger(name, level)
