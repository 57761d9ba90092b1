"""
Random Variable Value Object - Clean Architecture Domain Layer

A finite rational-valued function on the outcomes of a finite sample space.
Payoffs J(c), conditional payoffs J(c,S) and Bellman values V(c,S) are all
RandomVariables.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Iterator, Optional, Sequence, Tuple

from domain.exceptions import DimensionMismatchError, ValidationError

from .prob_measure import ProbMeasure
from .rational import RationalLike, to_fraction
from .sigma_field import SigmaField


@dataclass(frozen=True)
class RandomVariable:
    """Immutable vector of exact rationals, one per outcome."""

    values: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", tuple(to_fraction(v, "values") for v in self.values)
        )
        if not self.values:
            raise ValidationError("values", "a random variable needs at least one outcome")

    # ------------------------------------------------------------------
    # Factories
    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, n: int, value: RationalLike) -> "RandomVariable":
        v = to_fraction(value, "value")
        return cls(tuple(v for _ in range(n)))

    @classmethod
    def indicator(cls, n: int, event: AbstractSet[int]) -> "RandomVariable":
        return cls(tuple(Fraction(1 if i in event else 0) for i in range(n)))

    @classmethod
    def from_values(cls, values: Sequence[RationalLike]) -> "RandomVariable":
        return cls(tuple(to_fraction(v, "values") for v in values))

    # ------------------------------------------------------------------
    # Sequence protocol
    # ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, outcome: int) -> Fraction:
        return self.values[outcome]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    # ------------------------------------------------------------------
    # Pointwise arithmetic
    # ------------------------------------------------------------------

    def _other(self, other: "RandomVariable") -> Tuple[Fraction, ...]:
        if other.n != self.n:
            raise DimensionMismatchError("random variable", expected=self.n, actual=other.n)
        return other.values

    def __add__(self, other: "RandomVariable") -> "RandomVariable":
        return RandomVariable(tuple(a + b for a, b in zip(self.values, self._other(other))))

    def __sub__(self, other: "RandomVariable") -> "RandomVariable":
        return RandomVariable(tuple(a - b for a, b in zip(self.values, self._other(other))))

    def shift(self, amount: RationalLike) -> "RandomVariable":
        delta = to_fraction(amount, "amount")
        return RandomVariable(tuple(v + delta for v in self.values))

    def maximum(self, other: "RandomVariable") -> "RandomVariable":
        return RandomVariable(tuple(max(a, b) for a, b in zip(self.values, self._other(other))))

    def truncate(self, cap: Optional[Fraction]) -> "RandomVariable":
        """M ∧ X; cap None stands for M = +inf."""
        if cap is None:
            return self
        return RandomVariable(tuple(min(v, cap) for v in self.values))

    def glue(self, event: AbstractSet[int], other: "RandomVariable") -> "RandomVariable":
        """1_G self + 1_{Ω∖G} other."""
        return RandomVariable(
            tuple(a if i in event else b for i, (a, b) in enumerate(zip(self.values, self._other(other))))
        )

    def with_value(self, outcome: int, value: RationalLike) -> "RandomVariable":
        values = list(self.values)
        values[outcome] = to_fraction(value, "value")
        return RandomVariable(tuple(values))

    # ------------------------------------------------------------------
    # Measure-dependent queries
    # ------------------------------------------------------------------

    def expectation(self, mu: ProbMeasure) -> Fraction:
        return mu.expect(self.values)

    def is_measurable(self, g: SigmaField) -> bool:
        return g.is_measurable(self.values)

    def dominates(self, mu: ProbMeasure, other: "RandomVariable") -> bool:
        """self >= other on every positive-weight outcome."""
        theirs = self._other(other)
        return all(self.values[i] >= theirs[i] for i in mu.support)

    def __repr__(self) -> str:
        return f"RandomVariable({[str(v) for v in self.values]})"
