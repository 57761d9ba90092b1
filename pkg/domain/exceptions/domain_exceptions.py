"""
Domain Exceptions - Clean Architecture Domain Layer

Defines all exceptions that can be raised by the finite measure model, the
process algebra and the control engine. These exceptions encode precondition
failures and data invariant failures.
The domain layer raises ONLY these exceptions, never click or stdlib exceptions.

Mathematical check failures are NOT exceptions: a failing axiom or a failing
supermartingale inequality is a verdict inside a BellmanReport.
"""
from typing import Optional


class DomainError(Exception):
    """Base class for all domain exceptions.

    The CLI error handler catches this base and maps every subclass to a
    process exit code without importing individual exception types.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return self.message


class ValidationError(DomainError):
    """Raised when value-object or entity field-level validation fails.

    Example:
        raise ValidationError("weights", "weights must sum to 1, got 5/6")

    Maps to exit code 1.
    """

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        self.message = message
        super().__init__(f"Validation failed for '{field}': {message}")


class ConfigurationError(ValidationError):
    """Raised when a simulation or campaign configuration violates an invariant.

    Example:
        raise ConfigurationError("dt", "dt=0.05 exceeds epsilon/10=0.02")

    Maps to exit code 1.
    """


class DimensionMismatchError(DomainError):
    """Raised when two objects live on sample spaces of different sizes.

    Example:
        raise DimensionMismatchError("random variable", expected=4, actual=3)

    Maps to exit code 1.
    """

    def __init__(self, what: str, expected: int, actual: int) -> None:
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Dimension mismatch for {what}: expected {expected} outcomes, got {actual}"
        )


class PreconditionViolation(DomainError):
    """Raised when an operation is called outside its documented precondition.

    Example:
        raise PreconditionViolation(
            "information_monotone", "u must not exceed v pointwise", rule="u<=v"
        )

    Maps to exit code 1.
    """

    def __init__(self, operation: str, message: str, rule: Optional[str] = None) -> None:
        self.operation = operation
        self.rule = rule
        super().__init__(f"{operation}: {message}")


class NotAStoppingTimeError(PreconditionViolation):
    """Raised when a random time is used where a stopping time is required.

    Args:
        time_label: Identifier of the offending time (control-time id or "s").
        stage: First stage t at which {S <= t} is not an event of the filtration.

    Maps to exit code 1.
    """

    def __init__(self, operation: str, time_label: str, stage: int) -> None:
        self.time_label = time_label
        self.stage = stage
        super().__init__(
            operation,
            f"'{time_label}' is not a stopping time: {{S <= {stage}}} is not an event "
            f"of stage {stage}",
            rule="stopping-time",
        )


class EmptyFamilyError(DomainError):
    """Raised when an essential supremum is requested over an empty family.

    The convention sup of the empty set = -inf is handled by callers that
    can represent it (solve); everywhere else it is an error.

    Maps to exit code 1.
    """

    def __init__(self, operation: str) -> None:
        self.operation = operation
        super().__init__(f"{operation}: family of random variables is empty")


class EntityNotFoundError(DomainError):
    """Raised when a referenced control or control time does not exist.

    Example:
        raise EntityNotFoundError("Control", "c[1;0:2,1:1]")

    Maps to exit code 1.
    """

    def __init__(self, entity_type: str, identifier: str) -> None:
        self.entity_type = entity_type
        self.identifier = identifier
        super().__init__(f"{entity_type} with identifier '{identifier}' not found")


class DuplicateEntityError(DomainError):
    """Raised when an id is declared twice and duplicates are not allowed.

    Example:
        raise DuplicateEntityError("ControlTime", "1")

    Maps to exit code 1.
    """

    def __init__(self, entity_type: str, identifier: str) -> None:
        self.entity_type = entity_type
        self.identifier = identifier
        super().__init__(f"{entity_type} '{identifier}' already exists")
