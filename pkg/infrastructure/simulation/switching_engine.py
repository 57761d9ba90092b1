"""
Switching Engine - Infrastructure Layer

Monte Carlo for the game in which a controller watches one of two
independent Brownian motions at a time. With c the index being watched and
σ its last switch,

    Z_t = B^c_t − B^{1−c}_σ,    τ_t = t − σ,

the payoff is ∫ e^{−αt} Z_t dt − Σ_jumps e^{−αt} K(Z_{t−}, τ_{t−}).

Only the watched coordinate is simulated. At a switch the hidden motion is
revealed as its last seen value plus √τ·N, which has exactly the law of the
unobserved increment. Strategies receive an ObservedState with read-only
(t, z, τ, c) and nothing else, so a strategy cannot peek at the coordinate
it is not watching; the ε gap between jumps is enforced here, whatever the
strategy asks for.

Discretization: Euler grid of step dt, left-point rewards with exact
discount weights (e^{−αt_k} − e^{−αt_{k+1}})/α, jumps decided and charged
with the pre-jump grid values as left limits, and first entrance into
(−∞, −l] detected on the grid without bridge correction.
"""
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Tuple

import numpy as np

from infrastructure.logging import StructuredLogger, get_logger

from .cost_kernels import CostKernel
from .estimate import Estimate
from .rng_streams import block_generator, block_sizes
from .simulation_config import SwitchingConfig
from .worker_pool import concatenate, run_blocks


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObservedState:
    """What a controller sees just before time t: its own Z, the lag τ and the index c."""

    t: float
    z: np.ndarray
    tau: np.ndarray
    c: np.ndarray


def _read_only(values: np.ndarray) -> np.ndarray:
    view = values.view()
    view.flags.writeable = False
    return view


class SwitchingStrategy(Protocol):
    name: str

    def decide(self, state: ObservedState) -> np.ndarray: ...


class NeverSwitch:
    name = "never-switch"

    def decide(self, state: ObservedState) -> np.ndarray:
        return np.zeros(state.z.shape, dtype=bool)


class ThresholdStrategy:
    """
    c^ε: after the ε wait, switch on the first grid time with Z <= −l.

    The engine always enforces the configured ε; a larger `epsilon` here
    makes the strategy wait longer on its own account.
    """

    def __init__(self, epsilon: float = 0.0, boundary: float = 0.0) -> None:
        self.epsilon = epsilon
        self.boundary = boundary
        self.name = f"threshold(l={boundary:g})"

    def decide(self, state: ObservedState) -> np.ndarray:
        wants = state.z <= -self.boundary
        if self.epsilon > 0:
            wants = wants & (state.tau >= self.epsilon - 1e-9)
        return wants


class CallbackStrategy:
    """Wraps fn(t, z, tau, c) -> bool array."""

    def __init__(self, fn: Callable[[float, np.ndarray, np.ndarray, np.ndarray], np.ndarray],
                 name: str = "callback") -> None:
        self._fn = fn
        self.name = name

    def decide(self, state: ObservedState) -> np.ndarray:
        return np.asarray(self._fn(state.t, state.z, state.tau, state.c), dtype=bool)


# ---------------------------------------------------------------------------
# Closed-form targets and tail
# ---------------------------------------------------------------------------


def value_case_a(x: float, alpha: float) -> float:
    return x / alpha


def value_case_b(x: float, alpha: float) -> float:
    gamma = math.sqrt(2.0 * alpha)
    return (gamma * abs(x) + math.exp(-gamma * abs(x))) / (alpha * gamma)


def target_for(cfg: SwitchingConfig) -> Optional[float]:
    if cfg.cost_model == "case_a":
        return value_case_a(cfg.x, cfg.alpha)
    if cfg.cost_model == "case_b":
        return value_case_b(cfg.x, cfg.alpha)
    return None


def tail_bound(cfg: SwitchingConfig) -> float:
    """Reward plus switching-cost tail discarded beyond t_max."""
    return cfg.tail_bound()


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SwitchingResult:
    strategy: str
    estimate: Estimate
    mean_jumps: float
    tail_bound: float
    target: Optional[float]
    tolerance: float
    duration_ms: float

    @property
    def passed(self) -> Optional[bool]:
        if self.target is None:
            return None
        return self.estimate.agrees_with(self.target, self.tolerance)


def _simulate_block(cfg: SwitchingConfig, strategy: SwitchingStrategy, kernel: CostKernel,
                    block: int, size: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = block_generator(cfg.seed, block)

    def normals() -> np.ndarray:
        if cfg.antithetic:
            draw = rng.standard_normal(size // 2)
            return np.concatenate([draw, -draw])
        return rng.standard_normal(size)

    alpha, dt = cfg.alpha, cfg.dt
    root_dt = math.sqrt(dt)
    weight = (1.0 - math.exp(-alpha * dt)) / alpha
    current = np.zeros(size)
    last_seen = np.full(size, -cfg.x)
    watched = np.zeros(size, dtype=np.int8)
    lag_steps = np.zeros(size, dtype=np.int64)
    payoff = np.zeros(size)
    jumps = np.zeros(size, dtype=np.int64)

    for k in range(cfg.steps):
        t = k * dt
        discount = math.exp(-alpha * t)
        z = current - last_seen
        tau = lag_steps * dt
        state = ObservedState(t, _read_only(z), _read_only(tau), _read_only(watched))
        jump = np.asarray(strategy.decide(state), dtype=bool) & (lag_steps >= cfg.epsilon_steps)
        if jump.any():
            reveal = normals()
            payoff[jump] -= discount * kernel(z[jump], tau[jump])
            hidden = last_seen + np.sqrt(tau) * reveal
            last_seen = np.where(jump, current, last_seen)
            current = np.where(jump, hidden, current)
            watched = np.where(jump, 1 - watched, watched).astype(np.int8)
            lag_steps = np.where(jump, 0, lag_steps)
            jumps += jump
            z = current - last_seen
        payoff += discount * weight * z
        current = current + root_dt * normals()
        lag_steps += 1

    if cfg.antithetic:
        half = size // 2
        return 0.5 * (payoff[:half] + payoff[half:]), jumps
    return payoff, jumps


def simulate_switching(
    cfg: SwitchingConfig,
    strategy: Optional[SwitchingStrategy] = None,
    threads: Optional[int] = None,
    logger: Optional[StructuredLogger] = None,
) -> SwitchingResult:
    """E J(c) for one strategy; c^ε at the configured boundary by default."""
    logger = logger or get_logger(__name__)
    strategy = strategy or ThresholdStrategy(cfg.epsilon, cfg.boundary)
    kernel = cfg.kernel()
    started = time.perf_counter()
    tasks = [
        (lambda b=b, n=n: _simulate_block(cfg, strategy, kernel, b, n))
        for b, n in enumerate(block_sizes(cfg.n_paths, cfg.block_size))
    ]
    parts = run_blocks(tasks, threads)
    samples = concatenate([p for p, _ in parts])
    jumps = concatenate([j for _, j in parts])
    estimate = Estimate.from_samples(samples)
    duration_ms = (time.perf_counter() - started) * 1000
    logger.log_simulation_complete(
        f"switching/{cfg.cost_model}/{strategy.name}", cfg.n_paths, estimate.mean, estimate.std_error, duration_ms
    )
    return SwitchingResult(
        strategy=strategy.name,
        estimate=estimate,
        mean_jumps=float(np.mean(jumps)) if jumps.size else 0.0,
        tail_bound=tail_bound(cfg),
        target=target_for(cfg),
        tolerance=cfg.tolerance,
        duration_ms=duration_ms,
    )
