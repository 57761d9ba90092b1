"""
Verify System Request DTO - Application Layer

Carries validated input from the CLI into the verification use case.
Plain dataclasses: no click, no pydantic, no infrastructure imports.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional

from domain.entities import FiniteControlSystem

ALL_CHECKS: FrozenSet[str] = frozenset({"axioms", "lattice", "bellman", "payoff"})


@dataclass
class VerifySystemRequest:
    """
    Input DTO for VerifySystemUseCase.

    source is whatever the system source understands (a path, or "-" for
    standard input with the file store). eps and cap parametrize the
    lattice checks; cap None means M = +∞.
    """

    source: str
    checks: FrozenSet[str] = ALL_CHECKS
    eps: Fraction = Fraction(0)
    cap: Optional[Fraction] = None
    # Control-time ids for the B5 certificate; None uses the deterministic times in order
    sequence: Optional[List[str]] = None

    def __post_init__(self) -> None:
        if not self.source or not self.source.strip():
            raise ValueError("source cannot be empty")
        unknown = set(self.checks) - ALL_CHECKS
        if unknown:
            raise ValueError(f"unknown checks {sorted(unknown)}; choose from {sorted(ALL_CHECKS)}")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")


@dataclass
class SystemSnapshot:
    """A loaded system together with where it came from."""

    system: FiniteControlSystem
    source: str
    digest: str
    derive_prefix: bool = False
    seed: Optional[int] = None
