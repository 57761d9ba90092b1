"""
Random Time Value Object - Clean Architecture Domain Layer

A map from outcomes to {0, 1, ...} ∪ {∞}. Whether it is a stopping time is a
property checked against a filtration, never assumed at construction.
"""
import math
from dataclasses import dataclass
from typing import AbstractSet, FrozenSet, Optional, Sequence, Tuple, Union

from domain.exceptions import DimensionMismatchError, ValidationError

INFINITY = math.inf
INFINITY_TOKEN = "inf"

TimeValue = Union[int, float]


def parse_time_value(raw: Union[int, float, str], field: str = "values") -> TimeValue:
    """Accept a non-negative int or the 'inf' sentinel."""
    if isinstance(raw, str):
        if raw.strip().lower() in (INFINITY_TOKEN, "∞"):
            return INFINITY
        try:
            raw = int(raw)
        except ValueError:
            raise ValidationError(field, f"time values must be integers or 'inf', got {raw!r}") from None
    if isinstance(raw, bool):
        raise ValidationError(field, f"time values must be integers or 'inf', got {raw!r}")
    if isinstance(raw, float):
        if raw == INFINITY:
            return INFINITY
        raise ValidationError(field, f"time values must be integers or 'inf', got {raw!r}")
    if not isinstance(raw, int) or raw < 0:
        raise ValidationError(field, f"time values must be non-negative, got {raw!r}")
    return raw


def format_time_value(value: TimeValue) -> Union[int, str]:
    return INFINITY_TOKEN if value == INFINITY else int(value)


@dataclass(frozen=True)
class RandomTime:
    """Immutable random time on n outcomes."""

    values: Tuple[TimeValue, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(parse_time_value(v) for v in self.values))
        if not self.values:
            raise ValidationError("values", "a random time needs at least one outcome")

    @classmethod
    def constant(cls, n: int, value: TimeValue) -> "RandomTime":
        return cls(tuple(value for _ in range(n)))

    @classmethod
    def infinite(cls, n: int) -> "RandomTime":
        return cls.constant(n, INFINITY)

    @classmethod
    def from_values(cls, values: Sequence[Union[int, float, str]]) -> "RandomTime":
        return cls(tuple(parse_time_value(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, outcome: int) -> TimeValue:
        return self.values[outcome]

    @property
    def is_deterministic(self) -> bool:
        return len(set(self.values)) == 1

    def constant_value(self, support: Optional[AbstractSet[int]] = None) -> Optional[TimeValue]:
        """The common value on the support (all outcomes by default), else None."""
        seen = {self.values[i] for i in (support if support is not None else range(self.n))}
        return next(iter(seen)) if len(seen) == 1 else None

    def event_le(self, t: TimeValue) -> FrozenSet[int]:
        """{S <= t}."""
        return frozenset(i for i, v in enumerate(self.values) if v <= t)

    def event_eq(self, t: TimeValue) -> FrozenSet[int]:
        return frozenset(i for i, v in enumerate(self.values) if v == t)

    def _other(self, other: "RandomTime") -> Tuple[TimeValue, ...]:
        if other.n != self.n:
            raise DimensionMismatchError("random time", expected=self.n, actual=other.n)
        return other.values

    def le(self, other: "RandomTime", support: Optional[AbstractSet[int]] = None) -> bool:
        """self <= other on the given outcomes (all outcomes by default)."""
        theirs = self._other(other)
        outcomes = support if support is not None else range(self.n)
        return all(self.values[i] <= theirs[i] for i in outcomes)

    def equals_on(self, other: "RandomTime", support: AbstractSet[int]) -> bool:
        theirs = self._other(other)
        return all(self.values[i] == theirs[i] for i in support)

    def minimum(self, other: "RandomTime") -> "RandomTime":
        return RandomTime(tuple(min(a, b) for a, b in zip(self.values, self._other(other))))

    def __repr__(self) -> str:
        return f"RandomTime({[format_time_value(v) for v in self.values]})"
