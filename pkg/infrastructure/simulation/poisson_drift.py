"""
Poisson Drift - Infrastructure Layer

Controls at deterministic times versus controls at stopping times, checked
by simulation. A unit-rate Poisson process N has arrivals S_0 = 0 < S_1 < ...;
on [S_n, S_{n+1}) an independent sign R_n (P(R_n = +1) = 2/3) is added as a
drift to the observed process. A control is penalised at rate e^{−αs}
whenever its drift disagrees with the true one.

  - the tracker X̂ always uses drift +1 and is wrong exactly when R = −1,
    so E J(X̂) = v = 1/(3α);
  - the deviating control X* switches to drift −1 on (t, S_t), S_t the
    first arrival after t, and agrees with X̂ elsewhere.

Paths are simulated arrival to arrival with exact exponential gaps, and the
penalty of each segment is integrated in closed form, so the only error
besides Monte Carlo noise is the truncation at t_max (at most e^{−αT}/α).
"""
import math
import time
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from domain.exceptions import ConfigurationError
from infrastructure.logging import StructuredLogger, get_logger

from .estimate import Estimate
from .rng_streams import block_generator, block_sizes
from .simulation_config import PoissonDriftConfig
from .worker_pool import concatenate, run_blocks

PLUS_PROBABILITY = 2.0 / 3.0


def tracker_value(alpha: float) -> float:
    """v = 1/(3α)."""
    return 1.0 / (3.0 * alpha)


def gap_value(alpha: float, t: float) -> float:
    """E[(J(X*) − J(X̂))·1{R_t = −1}] = −e^{−αt}/(3(1+α))."""
    return -math.exp(-alpha * t) / (3.0 * (1.0 + alpha))


def bound_value(alpha: float, t: float) -> float:
    """Two-control upper bound on E V_t: v − e^{−αt}/(3(1+α))."""
    return tracker_value(alpha) + gap_value(alpha, t)


@dataclass(frozen=True)
class PoissonDriftReport:
    alpha: float
    t: float
    tracker: Estimate
    gap: Estimate
    bound: Estimate
    tail_bound: float
    tolerance: float
    duration_ms: float

    @property
    def tracker_target(self) -> float:
        return tracker_value(self.alpha)

    @property
    def gap_target(self) -> float:
        return gap_value(self.alpha, self.t)

    @property
    def bound_target(self) -> float:
        return bound_value(self.alpha, self.t)

    @property
    def bound_below_value(self) -> bool:
        """E V_t <= bound < v, so the Bellman process at time t is not mean non-decreasing."""
        return self.bound_target < self.tracker_target

    @property
    def passed(self) -> bool:
        return (
            self.tracker.agrees_with(self.tracker_target, self.tolerance)
            and self.gap.agrees_with(self.gap_target, self.tolerance)
            and self.bound.agrees_with(self.bound_target, self.tolerance)
            and self.bound_below_value
        )

    def rows(self) -> List[Tuple[str, Estimate, float]]:
        return [
            ("tracker", self.tracker, self.tracker_target),
            ("gap", self.gap, self.gap_target),
            ("bound", self.bound, self.bound_target),
        ]


def _arrivals(rng: np.random.Generator, size: int, horizon: float) -> np.ndarray:
    """Arrival times per path, extended until every path has one beyond the horizon."""
    chunk = max(8, int(math.ceil(horizon + 4.0 * math.sqrt(horizon) + 4.0)))
    arrivals = np.cumsum(rng.exponential(1.0, size=(size, chunk)), axis=1)
    while arrivals[:, -1].min() <= horizon:
        more = np.cumsum(rng.exponential(1.0, size=(size, chunk)), axis=1) + arrivals[:, -1:]
        arrivals = np.hstack([arrivals, more])
    return arrivals


def _simulate_block(cfg: PoissonDriftConfig, block: int, size: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = block_generator(cfg.seed, block)
    alpha, horizon = cfg.alpha, cfg.t_max
    arrivals = _arrivals(rng, size, horizon)
    signs = np.where(rng.random(arrivals.shape) < PLUS_PROBABILITY, 1, -1)

    starts = np.minimum(np.hstack([np.zeros((size, 1)), arrivals[:, :-1]]), horizon)
    ends = np.minimum(arrivals, horizon)
    segment = (np.exp(-alpha * starts) - np.exp(-alpha * ends)) / alpha
    tracker = np.sum(segment * (signs == -1), axis=1)

    rows = np.arange(size)
    current = np.sum(arrivals <= cfg.t, axis=1)
    sign_t = signs[rows, current]
    next_arrival = np.minimum(arrivals[rows, current], horizon)
    saved = (math.exp(-alpha * cfg.t) - np.exp(-alpha * next_arrival)) / alpha
    gap = np.where(sign_t == -1, -saved, 0.0)
    return tracker, gap


def simulate_poisson_drift(
    cfg: PoissonDriftConfig,
    threads: Optional[int] = None,
    logger: Optional[StructuredLogger] = None,
) -> PoissonDriftReport:
    logger = logger or get_logger(__name__)
    started = time.perf_counter()
    tasks = [
        (lambda b=b, n=n: _simulate_block(cfg, b, n))
        for b, n in enumerate(block_sizes(cfg.n_paths, cfg.block_size))
    ]
    parts = run_blocks(tasks, threads)
    tracker = concatenate([p for p, _ in parts])
    gap = concatenate([g for _, g in parts])
    report = PoissonDriftReport(
        alpha=cfg.alpha,
        t=cfg.t,
        tracker=Estimate.from_samples(tracker),
        gap=Estimate.from_samples(gap),
        bound=Estimate.from_samples(tracker + gap),
        tail_bound=cfg.tail_bound(),
        tolerance=cfg.tolerance,
        duration_ms=(time.perf_counter() - started) * 1000,
    )
    logger.log_simulation_complete(
        "poisson-drift", cfg.n_paths, report.gap.mean, report.gap.std_error, report.duration_ms,
        t=cfg.t, tracker_mean=report.tracker.mean,
    )
    return report


@dataclass(frozen=True)
class GapTrendRow:
    t: float
    estimate: Estimate
    closed_form: float

    @property
    def within(self) -> bool:
        return abs(self.estimate.mean - self.closed_form) <= 3.0 * self.estimate.std_error


def poisson_gap_trend(
    cfg: PoissonDriftConfig,
    t_grid: Sequence[float],
    threads: Optional[int] = None,
    logger: Optional[StructuredLogger] = None,
) -> List[GapTrendRow]:
    """Gap estimate against −e^{−αt}/(3(1+α)) along a grid of deviation times; tends to −1/(3(1+α)) as t ↓ 0."""
    if any(t <= 0 or t >= cfg.t_max for t in t_grid):
        raise ConfigurationError("t_grid", f"deviation times must lie in (0, t_max={cfg.t_max})")
    rows = []
    for t in t_grid:
        report = simulate_poisson_drift(replace(cfg, t=t), threads=threads, logger=logger)
        rows.append(GapTrendRow(t=t, estimate=report.gap, closed_form=report.gap_target))
    return rows
