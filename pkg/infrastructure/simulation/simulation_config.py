"""
Simulation Configuration - Infrastructure Layer

Parameters of the Monte Carlo engines and of the verification-lemma checker.
Each config validates its own invariants at construction and raises
ConfigurationError, so an engine never starts on a config it cannot honour.

Grid policy for the switching game:
  - dt <= ε/10, so a jump-separated control is resolvable on the grid;
  - t_max large enough that the discarded tail beyond it is below a tenth
    of the tolerance the estimate will be judged with.
"""
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from domain.exceptions import ConfigurationError

from .cost_kernels import CaseBCost, CostKernel, Growth, kernel_for

COST_MODELS = frozenset({"case_a", "case_b", "custom"})
VALUE_TAGS = frozenset({"case_a", "case_b", "tabulated", "callable"})

DEFAULT_BLOCK_SIZE = 4096

# E sup_{s<=t}|B_s| <= 2·√(2t/π) per Brownian motion, two of them.
_SUP_GROWTH = 4.0 * math.sqrt(2.0 / math.pi)


def _discounted_moments(alpha: float, start: float) -> Tuple[float, float]:
    """∫_start^∞ e^{−αt} dt and ∫_start^∞ e^{−αt} √t dt."""
    plain = math.exp(-alpha * start) / alpha
    root = float(gammaincc(1.5, alpha * start) * gamma_fn(1.5) / alpha**1.5)
    return plain, root


def discarded_tail(alpha: float, x: float, epsilon: float, t_max: float, growth: Growth) -> float:
    """
    Upper bound on the reward and switching cost earned after t_max, using
    |Z_t| <= |x| + sup|B^0| + sup|B^1| and at most one jump per ε.
    """
    k0, k1, k2 = growth
    plain, root = _discounted_moments(alpha, t_max)
    reward = abs(x) * plain + _SUP_GROWTH * root
    early_plain, early_root = _discounted_moments(alpha, max(0.0, t_max - epsilon))
    cost = (
        k0 * early_plain
        + k1 * (abs(x) * early_plain + _SUP_GROWTH * early_root)
        + k2 * early_root
    ) / epsilon
    return reward + cost


@dataclass
class SwitchingConfig:
    """
    Attributes:
        alpha:      discount rate (> 0).
        x:          initial offset; B^1 starts at −x so Z_0 = x.
        epsilon:    minimum gap between jumps of the control, also before the first one.
        dt:         Euler step.
        t_max:      truncation horizon.
        n_paths:    number of paths.
        seed:       root seed of the block streams.
        cost_model: "case_a", "case_b" (L ≡ 0) or "custom".
        boundary:   l; the threshold strategy jumps on entrance of Z into (−∞, −l].
        tolerance:  absolute tolerance the estimate is judged with.
        antithetic: pair every normal draw with its negation.
        block_size: paths per RNG block (even when antithetic).
        custom_cost: kernel used when cost_model == "custom".
    """

    alpha: float = 1.0
    x: float = 0.0
    epsilon: float = 0.2
    dt: float = 0.01
    t_max: float = 20.0
    n_paths: int = 100_000
    seed: int = 0
    cost_model: str = "case_a"
    boundary: float = 0.0
    tolerance: float = 0.02
    antithetic: bool = False
    block_size: int = DEFAULT_BLOCK_SIZE
    custom_cost: Optional[CostKernel] = None

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ConfigurationError("alpha", f"must be > 0, got {self.alpha}")
        if self.epsilon <= 0:
            raise ConfigurationError("epsilon", f"must be > 0, got {self.epsilon}")
        if self.dt <= 0:
            raise ConfigurationError("dt", f"must be > 0, got {self.dt}")
        if self.dt > self.epsilon / 10 * (1 + 1e-9):
            raise ConfigurationError("dt", f"dt={self.dt} exceeds epsilon/10={self.epsilon / 10}")
        if self.t_max <= self.dt:
            raise ConfigurationError("t_max", f"must exceed dt, got {self.t_max}")
        if self.n_paths < 1:
            raise ConfigurationError("n_paths", f"must be >= 1, got {self.n_paths}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigurationError("seed", f"must be a 64-bit unsigned integer, got {self.seed}")
        if self.cost_model not in COST_MODELS:
            raise ConfigurationError("cost_model", f"must be one of {sorted(COST_MODELS)}, got {self.cost_model!r}")
        if self.tolerance <= 0:
            raise ConfigurationError("tolerance", f"must be > 0, got {self.tolerance}")
        if self.block_size < 2 or (self.antithetic and self.block_size % 2):
            raise ConfigurationError("block_size", f"must be >= 2 and even with antithetic, got {self.block_size}")
        if self.antithetic and self.n_paths % 2:
            raise ConfigurationError("n_paths", "must be even with antithetic variates")
        tail = self.tail_bound()
        if tail >= 0.1 * self.tolerance:
            raise ConfigurationError(
                "t_max",
                f"discarded tail bound {tail:.3g} is not below 0.1 x tolerance = {0.1 * self.tolerance:.3g}",
            )

    @property
    def steps(self) -> int:
        return int(round(self.t_max / self.dt))

    @property
    def epsilon_steps(self) -> int:
        return int(math.ceil(self.epsilon / self.dt - 1e-9))

    def kernel(self, method: str = "closed") -> CostKernel:
        return kernel_for(self.cost_model, self.alpha, self.custom_cost, method)

    def tail_bound(self) -> float:
        return discarded_tail(self.alpha, self.x, self.epsilon, self.t_max, self.kernel().growth)

    def with_epsilon(self, epsilon: float) -> "SwitchingConfig":
        """Same config at another ε, dt scaled by the same factor."""
        return replace(self, epsilon=epsilon, dt=self.dt * epsilon / self.epsilon)

    # ------------------------------------------------------------------
    # Factory helpers
    # ------------------------------------------------------------------

    @classmethod
    def case_a(cls, x: float = 0.0, alpha: float = 1.0, **overrides) -> "SwitchingConfig":
        return cls(alpha=alpha, x=x, cost_model="case_a", **overrides)

    @classmethod
    def case_b(cls, x: float = 0.0, alpha: float = 0.5, epsilon: float = 0.05, **overrides) -> "SwitchingConfig":
        params = dict(dt=epsilon / 10, t_max=30.0, tolerance=0.05)
        params.update(overrides)
        return cls(alpha=alpha, x=x, epsilon=epsilon, cost_model="case_b", **params)

    @classmethod
    def for_testing(cls) -> "SwitchingConfig":
        return cls(n_paths=2_000, t_max=15.0, dt=0.02, tolerance=0.1, block_size=512)


@dataclass
class PoissonDriftConfig:
    """
    Attributes:
        alpha:      discount rate (> 0).
        t:          deviation time of the deviating control (> 0).
        t_max:      truncation horizon of the discounted penalty.
        n_paths:    number of paths.
        seed:       root seed.
        tolerance:  absolute tolerance of the comparisons.
        block_size: paths per RNG block.
    """

    alpha: float = 1.0
    t: float = math.log(2.0)
    t_max: float = 40.0
    n_paths: int = 200_000
    seed: int = 0
    tolerance: float = 0.005
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ConfigurationError("alpha", f"must be > 0, got {self.alpha}")
        if self.t <= 0:
            raise ConfigurationError("t", f"must be > 0, got {self.t}")
        if self.t_max <= self.t:
            raise ConfigurationError("t_max", f"must exceed t={self.t}, got {self.t_max}")
        if self.n_paths < 1:
            raise ConfigurationError("n_paths", f"must be >= 1, got {self.n_paths}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigurationError("seed", f"must be a 64-bit unsigned integer, got {self.seed}")
        if self.tolerance <= 0:
            raise ConfigurationError("tolerance", f"must be > 0, got {self.tolerance}")
        if self.block_size < 1:
            raise ConfigurationError("block_size", f"must be >= 1, got {self.block_size}")

    def tail_bound(self) -> float:
        return math.exp(-self.alpha * self.t_max) / self.alpha

    @classmethod
    def for_testing(cls) -> "PoissonDriftConfig":
        return cls(n_paths=20_000, tolerance=0.02, block_size=2048)


@dataclass
class VerificationInput:
    """
    Attributes:
        alpha:        discount rate (> 0).
        h_kind:       "case_a" (z/α), "case_b" (ψ(|z|)), "tabulated" or "callable".
        cost_model:   kernel K as in SwitchingConfig.
        boundary:     l of the equality regions.
        z_grid:       points z at which the conditions are evaluated.
        t_grid:       lags t for the jump conditions.
        order:        Gauss–Hermite order.
        perturbation: coefficient of an added perturbation·z² (mutation tests).
        table:        (z nodes, h values) for h_kind == "tabulated".
        h:            the candidate for h_kind == "callable".
        custom_cost:  kernel used when cost_model == "custom".
        atol:         residual tolerance of the equality conditions.
        equality_everywhere: the candidate claims equality in every condition on the whole grid.
    """

    alpha: float = 1.0
    h_kind: str = "case_a"
    cost_model: str = "case_a"
    boundary: float = 0.0
    z_grid: Sequence[float] = field(default_factory=lambda: tuple(np.linspace(-3.0, 3.0, 61)))
    t_grid: Sequence[float] = (0.25, 1.0, 4.0)
    order: int = 64
    perturbation: float = 0.0
    table: Optional[Tuple[Sequence[float], Sequence[float]]] = None
    h: Optional[Callable[[np.ndarray], np.ndarray]] = None
    custom_cost: Optional[CostKernel] = None
    atol: float = 1e-10
    equality_everywhere: bool = False

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ConfigurationError("alpha", f"must be > 0, got {self.alpha}")
        if self.h_kind not in VALUE_TAGS:
            raise ConfigurationError("h_kind", f"must be one of {sorted(VALUE_TAGS)}, got {self.h_kind!r}")
        if self.cost_model not in COST_MODELS:
            raise ConfigurationError("cost_model", f"must be one of {sorted(COST_MODELS)}, got {self.cost_model!r}")
        if self.h_kind == "tabulated" and self.table is None:
            raise ConfigurationError("table", "tabulated candidate needs (z nodes, h values)")
        if self.h_kind == "callable" and self.h is None:
            raise ConfigurationError("h", "callable candidate needs a function")
        if len(self.z_grid) == 0 or len(self.t_grid) == 0:
            raise ConfigurationError("z_grid", "grids must be nonempty")
        if not np.all(np.isfinite(self.z_grid)) or not np.all(np.isfinite(self.t_grid)):
            raise ConfigurationError("z_grid", "grids must be finite")
        if min(self.t_grid) < 0:
            raise ConfigurationError("t_grid", "lags must be >= 0")
        if self.order < 2:
            raise ConfigurationError("order", f"must be >= 2, got {self.order}")

    @property
    def gamma(self) -> float:
        """γ with γ² = 2α."""
        return math.sqrt(2.0 * self.alpha)

    def kernel(self) -> CostKernel:
        if self.cost_model == "case_b":
            return CaseBCost(self.alpha, method="hermite", order=self.order)
        return kernel_for(self.cost_model, self.alpha, self.custom_cost, method="hermite")

    @classmethod
    def case_a(cls, alpha: float = 1.0, **overrides) -> "VerificationInput":
        return cls(alpha=alpha, h_kind="case_a", cost_model="case_a", equality_everywhere=True, **overrides)

    @classmethod
    def case_b(cls, alpha: float = 0.5, **overrides) -> "VerificationInput":
        params: Dict[str, Any] = dict(boundary=0.0)
        params.update(overrides)
        return cls(alpha=alpha, h_kind="case_b", cost_model="case_b", **params)
