"""
Probability Measure Value Object - Clean Architecture Domain Layer

An exact probability measure on a finite sample space. Zero-weight outcomes
form the null set; every "almost surely" in the engine means "on every
outcome of positive weight".
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import AbstractSet, FrozenSet, Sequence, Tuple

from domain.exceptions import DimensionMismatchError, ValidationError

from .rational import RationalLike, to_fraction
from .sigma_field import SigmaField


@dataclass(frozen=True)
class ProbMeasure:
    """Immutable measure given by one non-negative rational weight per outcome."""

    weights: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "weights", tuple(to_fraction(w, "weights") for w in self.weights)
        )
        self._validate_weights()

    def _validate_weights(self) -> None:
        if not self.weights:
            raise ValidationError("weights", "a measure needs at least one outcome")
        negative = [i for i, w in enumerate(self.weights) if w < 0]
        if negative:
            raise ValidationError("weights", f"negative weight on outcomes {negative}")
        total = sum(self.weights, Fraction(0))
        if total != 1:
            raise ValidationError("weights", f"weights must sum to 1, got {total}")

    @classmethod
    def uniform(cls, n: int) -> "ProbMeasure":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def from_values(cls, weights: Sequence[RationalLike]) -> "ProbMeasure":
        return cls(tuple(to_fraction(w, "weights") for w in weights))

    @property
    def n(self) -> int:
        return len(self.weights)

    @cached_property
    def null_outcomes(self) -> FrozenSet[int]:
        return frozenset(i for i, w in enumerate(self.weights) if w == 0)

    @cached_property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w > 0)

    def is_null(self, outcome: int) -> bool:
        return self.weights[outcome] == 0

    def mass(self, event: AbstractSet[int]) -> Fraction:
        return sum((self.weights[i] for i in event), Fraction(0))

    def expect(self, values: Sequence[Fraction]) -> Fraction:
        """E[X] for an outcome -> rational map."""
        if len(values) != self.n:
            raise DimensionMismatchError("random variable", expected=self.n, actual=len(values))
        return sum((w * v for w, v in zip(self.weights, values) if w), Fraction(0))

    def agrees_on(self, other: "ProbMeasure", g: SigmaField) -> bool:
        """True iff both measures give every atom (hence every event) of g the same mass."""
        if other.n != self.n:
            raise DimensionMismatchError("measure", expected=self.n, actual=other.n)
        return all(self.mass(block) == other.mass(block) for block in g.atoms)

    def is_trivial_on(self, g: SigmaField) -> bool:
        """True iff g is trivial up to null sets: all positive-weight outcomes share an atom."""
        return len({g.labels()[i] for i in self.support}) <= 1

    def __repr__(self) -> str:
        return f"ProbMeasure({[str(w) for w in self.weights]})"
