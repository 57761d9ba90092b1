"""Domain Exceptions - Clean Architecture Domain Layer"""
from .domain_exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    DomainError,
    DuplicateEntityError,
    EmptyFamilyError,
    EntityNotFoundError,
    NotAStoppingTimeError,
    PreconditionViolation,
    ValidationError,
)

__all__ = [
    "DomainError",
    "ValidationError",
    "ConfigurationError",
    "DimensionMismatchError",
    "PreconditionViolation",
    "NotAStoppingTimeError",
    "EmptyFamilyError",
    "EntityNotFoundError",
    "DuplicateEntityError",
]
