"""
Filtration Value Object - Clean Architecture Domain Layer

A nondecreasing sequence of σ-fields indexed by t = 0..horizon. The terminal
stage doubles as G_∞: every time at or beyond the horizon sees stages[horizon].
"""
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from domain.exceptions import DimensionMismatchError, ValidationError

from .sigma_field import SigmaField

TimeIndex = Union[int, float]


@dataclass(frozen=True)
class Filtration:
    """Immutable filtration (G_0 ⊂ G_1 ⊂ ... ⊂ G_horizon)."""

    stages: Tuple[SigmaField, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))
        self._validate_stages()

    def _validate_stages(self) -> None:
        if not self.stages:
            raise ValidationError("stages", "a filtration needs at least stage 0")
        n = self.stages[0].n
        for t, stage in enumerate(self.stages):
            if stage.n != n:
                raise DimensionMismatchError(f"filtration stage {t}", expected=n, actual=stage.n)
        for t in range(1, len(self.stages)):
            if not self.stages[t - 1].is_coarser_than(self.stages[t]):
                raise ValidationError(
                    "stages", f"stage {t} does not refine stage {t - 1} (information must not shrink)"
                )

    @classmethod
    def constant(cls, g: SigmaField, horizon: int) -> "Filtration":
        return cls(tuple(g for _ in range(horizon + 1)))

    @classmethod
    def from_stages(cls, stages: Sequence[SigmaField]) -> "Filtration":
        return cls(tuple(stages))

    @property
    def horizon(self) -> int:
        return len(self.stages) - 1

    @property
    def n(self) -> int:
        return self.stages[0].n

    @property
    def terminal(self) -> SigmaField:
        return self.stages[-1]

    def at(self, t: TimeIndex) -> SigmaField:
        """Stage t, with every t >= horizon (including inf) mapped to the terminal stage."""
        if t >= self.horizon:
            return self.terminal
        return self.stages[int(t)]

    def __repr__(self) -> str:
        return f"Filtration(horizon={self.horizon}, stages={list(self.stages)})"
