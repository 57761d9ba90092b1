"""
Sample Space Value Object - Clean Architecture Domain Layer

A finite, ordered set of outcome labels. Every other value object refers to
outcomes by their index in this sequence, never by label.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

from domain.exceptions import EntityNotFoundError, ValidationError


@dataclass(frozen=True)
class SampleSpace:
    """Immutable finite sample space with pairwise distinct labels."""

    outcomes: Tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        self._validate_outcomes()

    def _validate_outcomes(self) -> None:
        if not self.outcomes:
            raise ValidationError("outcomes", "a sample space needs at least one outcome")
        for label in self.outcomes:
            if not isinstance(label, str) or not label:
                raise ValidationError("outcomes", f"outcome labels must be non-empty strings, got {label!r}")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValidationError("outcomes", "outcome labels must be pairwise distinct")

    @classmethod
    def of_size(cls, n: int) -> "SampleSpace":
        """Space with generated labels w0..w{n-1}."""
        if n < 1:
            raise ValidationError("outcomes", f"size must be >= 1, got {n}")
        return cls(tuple(f"w{i}" for i in range(n)))

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "SampleSpace":
        return cls(tuple(labels))

    @property
    def size(self) -> int:
        return len(self.outcomes)

    def index(self, label: str) -> int:
        try:
            return self.outcomes.index(label)
        except ValueError:
            raise EntityNotFoundError("Outcome", label) from None

    def __repr__(self) -> str:
        return f"SampleSpace(n={self.size}, outcomes={list(self.outcomes)})"
