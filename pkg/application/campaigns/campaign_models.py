"""
Campaign configuration and results.

A campaign runs a fixed number of randomized instances, each drawn from its
own generator seeded by (seed, instance index), so a given instance is the
same whatever the worker count or the instances around it.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from domain.exceptions import ConfigurationError


@dataclass
class CampaignConfig:
    """
    Attributes:
        instances:         number of randomized instances (0 allowed).
        max_outcomes:      largest sample space drawn.
        max_horizon:       largest horizon drawn.
        seed:              root seed.
        allow_nonstopping: draw arbitrary random times, dropping the stopping hypothesis.
        mutations:         mutated systems to run after the coherent ones (lattice campaign).
        sub_fields:        random sub-σ-fields tested per system (lattice campaign).
        workers:           instance-level parallelism.
    """

    instances: int = 100
    max_outcomes: int = 6
    max_horizon: int = 3
    seed: int = 0
    allow_nonstopping: bool = False
    mutations: int = 0
    sub_fields: int = 3
    workers: int = 1

    def __post_init__(self) -> None:
        if self.instances < 0:
            raise ConfigurationError("instances", f"must be >= 0, got {self.instances}")
        if not 1 <= self.max_outcomes <= 12:
            raise ConfigurationError("max_outcomes", f"must be in [1, 12], got {self.max_outcomes}")
        if not 0 <= self.max_horizon <= 8:
            raise ConfigurationError("max_horizon", f"must be in [0, 8], got {self.max_horizon}")
        if self.seed < 0:
            raise ConfigurationError("seed", f"must be >= 0, got {self.seed}")
        if self.mutations < 0:
            raise ConfigurationError("mutations", f"must be >= 0, got {self.mutations}")
        if self.sub_fields < 0:
            raise ConfigurationError("sub_fields", f"must be >= 0, got {self.sub_fields}")
        if self.workers < 1:
            raise ConfigurationError("workers", f"must be >= 1, got {self.workers}")

    def rng(self, index: int, stream: int = 0) -> np.random.Generator:
        """Generator owned by one instance."""
        return np.random.default_rng([self.seed, stream, index])

    # ------------------------------------------------------------------
    # Factory helpers
    # ------------------------------------------------------------------

    @classmethod
    def galmarino(cls, instances: int = 1000, seed: int = 0) -> "CampaignConfig":
        return cls(instances=instances, max_outcomes=8, max_horizon=5, seed=seed)

    @classmethod
    def lattice(cls, instances: int = 200, seed: int = 0) -> "CampaignConfig":
        return cls(instances=instances, max_outcomes=6, max_horizon=3, seed=seed, mutations=50)

    @classmethod
    def snell(cls, instances: int = 100, seed: int = 0) -> "CampaignConfig":
        return cls(instances=instances, max_outcomes=5, max_horizon=4, seed=seed)

    @classmethod
    def for_testing(cls) -> "CampaignConfig":
        return cls(instances=10, max_outcomes=4, max_horizon=2, seed=1, mutations=4, sub_fields=1)


@dataclass(frozen=True)
class Violation:
    """One failed check with the instance that produced it."""

    index: int
    check: str
    instance: Dict[str, Any]
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "check": self.check, "detail": self.detail, "instance": self.instance}


@dataclass
class CampaignReport:
    name: str
    instances: int = 0
    checks: Dict[str, int] = field(default_factory=dict)
    skipped: Dict[str, int] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)
    duration_ms: float = 0.0

    def count(self, check: str) -> None:
        self.checks[check] = self.checks.get(check, 0) + 1

    def skip(self, check: str) -> None:
        self.skipped[check] = self.skipped.get(check, 0) + 1

    def fail(self, violation: Violation) -> None:
        self.violations.append(violation)

    def absorb(self, other: "CampaignReport") -> None:
        """Fold a per-instance report into this one."""
        self.instances += other.instances
        for key, value in other.checks.items():
            self.checks[key] = self.checks.get(key, 0) + value
        for key, value in other.skipped.items():
            self.skipped[key] = self.skipped.get(key, 0) + value
        self.violations.extend(other.violations)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "campaign": self.name,
            "instances": self.instances,
            "passed": self.passed,
            "checks": dict(sorted(self.checks.items())),
            "skipped": dict(sorted(self.skipped.items())),
            "violations": [v.to_dict() for v in self.violations],
        }
