"""
Discrete Process Value Object - Clean Architecture Domain Layer

A process on a finite sample space in discrete time t = 0..horizon. Values are
exact rationals or interned labels from a finite alphabet; only equality of
values is ever used by the process algebra.
"""
from dataclasses import dataclass
from typing import Hashable, Sequence, Tuple

from domain.exceptions import ValidationError

Row = Tuple[Hashable, ...]


@dataclass(frozen=True)
class DiscreteProcess:
    """Immutable outcome-major value matrix (rows[ω][t] = X_t(ω))."""

    rows: Tuple[Row, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))
        self._validate_rows()

    def _validate_rows(self) -> None:
        if not self.rows:
            raise ValidationError("rows", "a process needs at least one outcome")
        width = len(self.rows[0])
        if width == 0:
            raise ValidationError("rows", "a process needs at least time 0")
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValidationError(
                    "rows", f"row {i} has {len(row)} entries, expected horizon+1 = {width}"
                )
            for value in row:
                if isinstance(value, float):
                    raise ValidationError("rows", f"float value {value!r} in row {i}; use exact values")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Hashable]]) -> "DiscreteProcess":
        """Build from time-major data: columns[t][ω] = X_t(ω)."""
        if not columns:
            raise ValidationError("columns", "a process needs at least time 0")
        return cls(tuple(zip(*columns)))

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def horizon(self) -> int:
        return len(self.rows[0]) - 1

    def column(self, t: int) -> Tuple[Hashable, ...]:
        return tuple(row[t] for row in self.rows)

    def prefix(self, outcome: int, t: int) -> Row:
        """(X_0(ω), ..., X_t(ω))."""
        return self.rows[outcome][: t + 1]

    def __repr__(self) -> str:
        return f"DiscreteProcess(n={self.n}, horizon={self.horizon})"
