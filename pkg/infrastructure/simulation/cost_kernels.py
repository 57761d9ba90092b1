"""
Switching-cost kernels K(z, t) for the two-Brownian-motion game.

Every kernel is vectorized over numpy arrays and declares a growth bound
|K(z,t)| <= k0 + k1|z| + k2√t, which the tail bound of the engine uses.

The case (b) kernel is an expectation over Y = √t·U − z with U standard
normal, i.e. Y ~ N(−z, t):

    K(z,t) = (E|Y| − |z|)/α + (E e^{−γ|Y|} − e^{−γ|z|})/(αγ) + 1{z>0}·L(z,t),   γ = √(2α)

evaluated either in closed form through the normal cdf or with the same
Gauss–Hermite rule the verification checker integrates with.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Tuple

import numpy as np
from scipy.special import log_ndtr, ndtr

from domain.exceptions import ConfigurationError

HERMITE_ORDER = 64

KernelFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
Growth = Tuple[float, float, float]


class CostKernel(Protocol):
    growth: Growth

    def __call__(self, z: np.ndarray, t: np.ndarray) -> np.ndarray: ...


def hermite_rule(order: int = HERMITE_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes u and weights w with Σ w f(u) ≈ ∫ f(u) φ(u) du."""
    x, w = np.polynomial.hermite.hermgauss(order)
    return math.sqrt(2.0) * x, w / math.sqrt(math.pi)


def gaussian_expectation(
    f: Callable[[np.ndarray], np.ndarray], z: np.ndarray, t: np.ndarray, order: int = HERMITE_ORDER
) -> np.ndarray:
    """E f(√t·U − z) on broadcast (z, t) arrays."""
    u, w = hermite_rule(order)
    z, t = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(t, dtype=float))
    points = np.sqrt(t)[..., None] * u - z[..., None]
    return np.sum(f(points) * w, axis=-1)


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseACost:
    """K(z,t) = −2z/α: every control earns x/α."""

    alpha: float

    @property
    def growth(self) -> Growth:
        return (0.0, 2.0 / self.alpha, 0.0)

    def __call__(self, z: np.ndarray, t: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return -2.0 * z / self.alpha + 0.0 * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class CaseBCost:
    alpha: float
    method: str = "closed"
    extra: Optional[KernelFn] = None
    order: int = HERMITE_ORDER

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ConfigurationError("alpha", f"must be > 0, got {self.alpha}")
        if self.method not in ("closed", "hermite"):
            raise ConfigurationError("method", f"must be 'closed' or 'hermite', got {self.method!r}")

    @property
    def gamma(self) -> float:
        return math.sqrt(2.0 * self.alpha)

    @property
    def growth(self) -> Growth:
        return (1.0 / (self.alpha * self.gamma), 0.0, math.sqrt(2.0 / math.pi) / self.alpha)

    def __call__(self, z: np.ndarray, t: np.ndarray) -> np.ndarray:
        z, t = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(t, dtype=float))
        if self.method == "closed":
            mean_abs, mean_exp = self._moments_closed(z, t)
        else:
            g = self.gamma
            mean_abs = gaussian_expectation(np.abs, z, t, self.order)
            mean_exp = gaussian_expectation(lambda y: np.exp(-g * np.abs(y)), z, t, self.order)
        a, g = self.alpha, self.gamma
        value = (mean_abs - np.abs(z)) / a + (mean_exp - np.exp(-g * np.abs(z))) / (a * g)
        if self.extra is not None:
            value = value + np.where(z > 0, self.extra(z, t), 0.0)
        return value

    def _moments_closed(self, z: np.ndarray, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """E|Y| and E e^{−γ|Y|} for Y ~ N(μ, s²) with μ = −z, s = √t."""
        g = self.gamma
        mu = -z
        s = np.sqrt(t)
        positive = s > 0
        safe = np.where(positive, s, 1.0)
        ratio = mu / safe
        mean_abs = safe * math.sqrt(2.0 / math.pi) * np.exp(-0.5 * ratio**2) + mu * (1.0 - 2.0 * ndtr(-ratio))
        half_var = 0.5 * (g * safe) ** 2
        mean_exp = (
            np.exp(g * mu + half_var + log_ndtr(-ratio - g * safe))
            + np.exp(-g * mu + half_var + log_ndtr(ratio - g * safe))
        )
        mean_abs = np.where(positive, mean_abs, np.abs(mu))
        mean_exp = np.where(positive, mean_exp, np.exp(-g * np.abs(mu)))
        return mean_abs, mean_exp


@dataclass(frozen=True)
class CustomCost:
    """A user kernel; the growth bound is the caller's promise."""

    fn: KernelFn
    growth: Growth = field(default=(0.0, 0.0, 0.0))

    def __call__(self, z: np.ndarray, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(z, dtype=float), np.asarray(t, dtype=float)), dtype=float)


def kernel_for(cost_model: str, alpha: float, custom: Optional[CostKernel] = None,
               method: str = "closed") -> CostKernel:
    if cost_model == "case_a":
        return CaseACost(alpha)
    if cost_model == "case_b":
        return CaseBCost(alpha, method=method)
    if cost_model == "custom":
        if custom is None:
            raise ConfigurationError("cost_model", "custom cost model needs a kernel")
        return custom
    raise ConfigurationError("cost_model", f"unknown cost model {cost_model!r}")
