"""
Verification Lemma Checker - Infrastructure Layer

Numerical check that a candidate value function h and a switching cost K
satisfy the sufficient conditions for optimality of the switching game.
With l the switching boundary:

  continuation   z − αh(z) + ½h″(z) <= 0 for every z,
                 with equality on z >= −l;
  jump           −K(z,t) + E h(√t·U − z) − h(z) <= 0 for every (z, t),
                 with equality on z <= −l for t > 0.

h″ is exact for the closed-form candidates, a spline derivative for
tabulated candidates, and a central difference for callables. The Gaussian
expectation uses the Gauss–Hermite rule of the cost kernels, so an exact
candidate cancels the kernel to roundoff.
"""
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from domain.exceptions import ValidationError
from infrastructure.logging import StructuredLogger, get_logger

from .cost_kernels import gaussian_expectation
from .simulation_config import VerificationInput

ValueFn = Callable[[np.ndarray], np.ndarray]

FINITE_DIFFERENCE_STEP = 1e-4
# Looser tolerance when h″ comes from differencing or a spline.
NUMERICAL_CURVATURE_ATOL = 1e-6
WORST_SHOWN = 5

CONTINUATION = "continuation"
CONTINUATION_EQUALITY = "continuation-equality"
JUMP = "jump"
JUMP_EQUALITY = "jump-equality"


@dataclass(frozen=True)
class Residual:
    z: float
    t: Optional[float]
    value: float

    def to_dict(self) -> Dict[str, Any]:
        return {"z": self.z, "t": self.t, "residual": self.value}


@dataclass(frozen=True)
class ConditionResult:
    """
    Attributes:
        name:           which condition.
        kind:           "inequality" (residual <= atol) or "equality" (|residual| <= atol).
        points:         grid points in the condition's region.
        max_residual:   signed maximum of the residual.
        max_abs:        maximum |residual|.
        strict_points:  points with residual < −atol (strict inequality).
        worst:          the largest offending residuals, for a failure report.
        atol:           tolerance used.
    """

    name: str
    kind: str
    points: int
    max_residual: float
    max_abs: float
    strict_points: int
    worst: List[Residual] = field(default_factory=list)
    atol: float = 1e-10

    @property
    def passed(self) -> bool:
        if self.points == 0:
            return True
        if self.kind == "equality":
            return self.max_abs <= self.atol
        return self.max_residual <= self.atol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "condition": self.name,
            "kind": self.kind,
            "points": self.points,
            "max_residual": self.max_residual,
            "max_abs_residual": self.max_abs,
            "strict_points": self.strict_points,
            "passed": self.passed,
            "worst": [r.to_dict() for r in self.worst],
        }


@dataclass(frozen=True)
class VerificationReport:
    h_kind: str
    cost_model: str
    boundary: float
    conditions: List[ConditionResult]
    duration_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> ConditionResult:
        for result in self.conditions:
            if result.name == name:
                return result
        raise KeyError(name)

    def worst_violations(self) -> List[Tuple[str, Residual]]:
        found = [(c.name, r) for c in self.conditions if not c.passed for r in c.worst]
        return sorted(found, key=lambda item: -abs(item[1].value))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h_kind": self.h_kind,
            "cost_model": self.cost_model,
            "boundary": self.boundary,
            "passed": self.passed,
            "conditions": [c.to_dict() for c in self.conditions],
        }


# ---------------------------------------------------------------------------
# Candidates
# ---------------------------------------------------------------------------


class VerificationLemmaChecker:
    """Evaluates the four conditions of one VerificationInput on its grids."""

    def __init__(self, vin: VerificationInput, logger: Optional[StructuredLogger] = None) -> None:
        self.vin = vin
        self._logger = logger or get_logger(__name__)
        self._h, self._h2 = self._candidate()
        self._kernel = vin.kernel()

    def _candidate(self) -> Tuple[ValueFn, ValueFn]:
        vin = self.vin
        alpha, gamma = vin.alpha, vin.gamma
        if vin.h_kind == "case_a":
            h: ValueFn = lambda z: np.asarray(z, dtype=float) / alpha
            h2: ValueFn = lambda z: np.zeros_like(np.asarray(z, dtype=float))
        elif vin.h_kind == "case_b":
            h = lambda z: (gamma * np.abs(z) + np.exp(-gamma * np.abs(z))) / (alpha * gamma)
            h2 = lambda z: gamma * np.exp(-gamma * np.abs(z)) / alpha
        elif vin.h_kind == "tabulated":
            nodes, values = vin.table  # type: ignore[misc]
            spline = CubicSpline(np.asarray(nodes, dtype=float), np.asarray(values, dtype=float))
            h = lambda z: spline(np.asarray(z, dtype=float))
            h2 = lambda z: spline(np.asarray(z, dtype=float), 2)
        else:
            fn = vin.h
            step = FINITE_DIFFERENCE_STEP
            h = lambda z: np.asarray(fn(np.asarray(z, dtype=float)), dtype=float)  # type: ignore[misc]
            h2 = lambda z: (h(np.asarray(z) + step) - 2.0 * h(z) + h(np.asarray(z) - step)) / step**2

        bump = vin.perturbation
        if bump:
            base, base2 = h, h2
            h = lambda z: base(z) + bump * np.asarray(z, dtype=float) ** 2
            h2 = lambda z: base2(z) + 2.0 * bump
        return h, h2

    @property
    def curvature_atol(self) -> float:
        if self.vin.h_kind in ("case_a", "case_b"):
            return self.vin.atol
        return max(self.vin.atol, NUMERICAL_CURVATURE_ATOL)

    def _values(self, z: np.ndarray) -> np.ndarray:
        values = np.asarray(self._h(z), dtype=float)
        if not np.all(np.isfinite(values)):
            bad = float(np.asarray(z)[~np.isfinite(values)].flat[0])
            raise ValidationError("h", f"candidate is not finite at z={bad:g}")
        return values

    # ------------------------------------------------------------------
    # Residuals
    # ------------------------------------------------------------------

    def continuation_residual(self, z: np.ndarray) -> np.ndarray:
        """z − αh(z) + ½h″(z)."""
        z = np.asarray(z, dtype=float)
        return z - self.vin.alpha * self._values(z) + 0.5 * np.asarray(self._h2(z), dtype=float)

    def jump_residual(self, z: np.ndarray, t: np.ndarray) -> np.ndarray:
        """−K(z,t) + E h(√t·U − z) − h(z)."""
        z, t = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(t, dtype=float))
        expected = gaussian_expectation(self._h, z, t, self.vin.order)
        if not np.all(np.isfinite(expected)):
            raise ValidationError("h", "candidate is not finite at a quadrature node")
        return -self._kernel(z, t) + expected - self._values(z)

    # ------------------------------------------------------------------
    # Conditions
    # ------------------------------------------------------------------

    def check(self) -> VerificationReport:
        started = time.perf_counter()
        vin = self.vin
        z = np.asarray(vin.z_grid, dtype=float)
        t = np.asarray(vin.t_grid, dtype=float)
        everywhere = vin.equality_everywhere

        continuation = self.continuation_residual(z)
        zz, tt = np.meshgrid(z, t, indexing="ij")
        jump = self.jump_residual(zz, tt)

        continuation_region = np.ones_like(z, dtype=bool) if everywhere else z >= -vin.boundary
        jump_region = (tt > 0) & (True if everywhere else zz <= -vin.boundary)

        curvature_atol = self.curvature_atol
        conditions = [
            _summarize(CONTINUATION, "inequality", z, None, continuation, None, curvature_atol),
            _summarize(CONTINUATION_EQUALITY, "equality", z, None, continuation, continuation_region,
                       curvature_atol),
            _summarize(JUMP, "inequality", zz, tt, jump, None, vin.atol),
            _summarize(JUMP_EQUALITY, "equality", zz, tt, jump, jump_region, vin.atol),
        ]
        report = VerificationReport(
            h_kind=vin.h_kind,
            cost_model=vin.cost_model,
            boundary=vin.boundary,
            conditions=conditions,
            duration_ms=(time.perf_counter() - started) * 1000,
        )
        for name, residual in report.worst_violations()[:WORST_SHOWN]:
            self._logger.log_check_failed(name, residual.to_dict())
        self._logger.log_verification_complete(
            f"verification-lemma/{vin.h_kind}", report.passed, report.duration_ms
        )
        return report


def _summarize(name: str, kind: str, z: np.ndarray, t: Optional[np.ndarray], residual: np.ndarray,
               region: Optional[np.ndarray], atol: float) -> ConditionResult:
    mask = np.ones(residual.shape, dtype=bool) if region is None else np.broadcast_to(region, residual.shape)
    values = residual[mask]
    if values.size == 0:
        return ConditionResult(name, kind, 0, -math.inf, 0.0, 0, [], atol)
    zs = np.broadcast_to(z, residual.shape)[mask]
    ts = None if t is None else np.broadcast_to(t, residual.shape)[mask]
    offence = np.abs(values) if kind == "equality" else values
    order = np.argsort(-offence, kind="stable")
    worst = [
        Residual(float(zs[i]), None if ts is None else float(ts[i]), float(values[i]))
        for i in order[:WORST_SHOWN]
        if offence[i] > atol
    ]
    return ConditionResult(
        name=name,
        kind=kind,
        points=int(values.size),
        max_residual=float(values.max()),
        max_abs=float(np.abs(values).max()),
        strict_points=int(np.sum(values < -atol)),
        worst=worst,
        atol=atol,
    )


def check_verification_conditions(
    vin: VerificationInput, logger: Optional[StructuredLogger] = None
) -> VerificationReport:
    return VerificationLemmaChecker(vin, logger).check()
