"""
Convergence of E J(c^ε) as ε ↓ 0.

Runs the switching engine along a decreasing ε grid (dt scaled with ε),
reports whether the estimates are non-decreasing within noise and whether
each stays below the closed-form value, and extrapolates to ε = 0 by a
weighted least-squares fit of the estimates against √ε. No convergence
rate is known, so the fit is a trend summary, not a rate claim.
"""
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from domain.exceptions import ConfigurationError
from infrastructure.logging import StructuredLogger, get_logger

from .simulation_config import SwitchingConfig
from .switching_engine import SwitchingStrategy, ThresholdStrategy, simulate_switching, target_for

StrategyFactory = Callable[[SwitchingConfig], SwitchingStrategy]


def _threshold(cfg: SwitchingConfig) -> SwitchingStrategy:
    return ThresholdStrategy(cfg.epsilon, cfg.boundary)


@dataclass(frozen=True)
class ConvergenceRow:
    epsilon: float
    dt: float
    mean: float
    std_error: float
    mean_jumps: float


@dataclass(frozen=True)
class ConvergenceTable:
    rows: List[ConvergenceRow]
    target: Optional[float]
    extrapolated: float
    extrapolated_se: float
    tolerance: float

    @property
    def nondecreasing(self) -> bool:
        """Each estimate is at least the previous one minus three combined standard errors."""
        return all(
            b.mean >= a.mean - 3.0 * math.hypot(a.std_error, b.std_error)
            for a, b in zip(self.rows, self.rows[1:])
        )

    @property
    def below_value(self) -> Optional[bool]:
        """An admissible control cannot beat the value: every estimate <= target + 3 SE."""
        if self.target is None:
            return None
        return all(r.mean <= self.target + 3.0 * r.std_error for r in self.rows)

    @property
    def finest_within(self) -> Optional[bool]:
        """Finest-ε estimate within max(3 SE, tolerance) + 0.1·√ε of the target."""
        if self.target is None or not self.rows:
            return None
        last = self.rows[-1]
        allowance = max(3.0 * last.std_error, self.tolerance) + 0.1 * math.sqrt(last.epsilon)
        return abs(last.mean - self.target) <= allowance

    @property
    def extrapolation_within(self) -> Optional[bool]:
        if self.target is None:
            return None
        band = max(3.0 * self.extrapolated_se, self.tolerance)
        return abs(self.extrapolated - self.target) <= band

    @property
    def passed(self) -> bool:
        checks = [self.nondecreasing, self.below_value, self.finest_within]
        return all(c is not False for c in checks)


def extrapolate(eps: Sequence[float], means: Sequence[float], errors: Sequence[float]) -> Tuple[float, float]:
    """Intercept of a weighted fit mean ≈ a + b·√ε, with its standard error."""
    if len(eps) < 2:
        return float(means[-1]), float(errors[-1])
    root = np.sqrt(np.asarray(eps, dtype=float))
    design = np.column_stack([np.ones_like(root), root])
    weights = 1.0 / np.maximum(np.asarray(errors, dtype=float), 1e-12) ** 2
    normal = design.T @ (weights[:, None] * design)
    coef = np.linalg.solve(normal, design.T @ (weights * np.asarray(means, dtype=float)))
    covariance = np.linalg.inv(normal)
    return float(coef[0]), float(math.sqrt(covariance[0, 0]))


def value_convergence_study(
    cfg: SwitchingConfig,
    eps_grid: Sequence[float],
    threads: Optional[int] = None,
    strategy_factory: StrategyFactory = _threshold,
    logger: Optional[StructuredLogger] = None,
) -> ConvergenceTable:
    if len(eps_grid) == 0:
        raise ConfigurationError("eps_grid", "must be nonempty")
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ConfigurationError("eps_grid", f"must be strictly decreasing, got {list(eps_grid)}")
    logger = logger or get_logger(__name__)

    rows = []
    for epsilon in eps_grid:
        run = cfg.with_epsilon(epsilon)
        result = simulate_switching(run, strategy_factory(run), threads=threads, logger=logger)
        rows.append(ConvergenceRow(epsilon, run.dt, result.estimate.mean, result.estimate.std_error,
                                   result.mean_jumps))

    intercept, intercept_se = extrapolate(
        [r.epsilon for r in rows], [r.mean for r in rows], [r.std_error for r in rows]
    )
    table = ConvergenceTable(rows, target_for(cfg), intercept, intercept_se, cfg.tolerance)
    logger.info(
        "Convergence study complete",
        cost_model=cfg.cost_model,
        grid=list(eps_grid),
        extrapolated=intercept,
        extrapolated_se=intercept_se,
        nondecreasing=table.nondecreasing,
    )
    return table
