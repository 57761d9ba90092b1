"""
Bellman Calculator Service - Application Layer

Computes the conditional payoff system J(c,S) = E^{P^c}[J(c) | G^c_{S^c}] and
the Bellman system V(c,S) = ess sup_{d ∈ D(c,S)} J(d,S) of a finite control
system, and solves for the optimal expected payoff v = sup_c E^{P^c} J(c).

Results are cached per calculator instance; a calculator is bound to one
immutable system, so the caches never go stale.
"""
import logging
from fractions import Fraction
from typing import Dict, FrozenSet, Optional, Tuple

from domain.entities import ClassKey, FiniteControlSystem
from domain.exceptions import PreconditionViolation
from domain.value_objects import ProbMeasure, RandomTime, RandomVariable, SigmaField

from application.services.finite_core import as_equal, cond_exp, ess_sup
from application.services.process_algebra import require_stopping_time, sigma_at

logger = logging.getLogger(__name__)


def times_as_equal(mu: ProbMeasure, s: RandomTime, t: RandomTime) -> bool:
    """S = T mu-a.s."""
    return s.equals_on(t, frozenset(mu.support))


def times_as_le(mu: ProbMeasure, s: RandomTime, t: RandomTime) -> bool:
    """S <= T mu-a.s."""
    return s.le(t, frozenset(mu.support))


class BellmanCalculator:
    """
    Conditional payoff and Bellman systems of one FiniteControlSystem.

    Usage:
        calc = BellmanCalculator(system)
        v, optimal = calc.solve()
        calc.bellman_value("c*", "1")
    """

    def __init__(self, system: FiniteControlSystem) -> None:
        self._system = system
        self._fields: Dict[ClassKey, SigmaField] = {}
        self._payoffs: Dict[ClassKey, RandomVariable] = {}
        self._values: Dict[Tuple[FrozenSet[str], str], RandomVariable] = {}
        self._terminal: Dict[str, RandomVariable] = {}

    @property
    def system(self) -> FiniteControlSystem:
        return self._system

    # ------------------------------------------------------------------
    # Information at control times
    # ------------------------------------------------------------------

    def sigma(self, control_id: str, time_id: str) -> SigmaField:
        """G^c_{S^c}; raises NotAStoppingTimeError when S^c is not a G^c stopping time."""
        key = (control_id, time_id)
        if key not in self._fields:
            record = self._system.control(control_id)
            s = self._system.time_of(time_id, control_id)
            require_stopping_time(s, record.filtration, "conditional_payoff", f"{time_id}/{control_id}")
            self._fields[key] = sigma_at(record.filtration, s)
        return self._fields[key]

    def measure(self, control_id: str) -> ProbMeasure:
        return self._system.control(control_id).measure

    # ------------------------------------------------------------------
    # Conditional payoff and Bellman systems
    # ------------------------------------------------------------------

    def conditional_payoff(self, control_id: str, time_id: str) -> RandomVariable:
        """J(c,S)."""
        key = (control_id, time_id)
        if key not in self._payoffs:
            record = self._system.control(control_id)
            self._payoffs[key] = cond_exp(
                record.measure, record.payoff, self.sigma(control_id, time_id)
            )
        return self._payoffs[key]

    def terminal_payoff(self, control_id: str) -> RandomVariable:
        """E^{P^c}[J(c) | G^c_∞]."""
        if control_id not in self._terminal:
            record = self._system.control(control_id)
            self._terminal[control_id] = cond_exp(
                record.measure, record.payoff, record.filtration.terminal
            )
        return self._terminal[control_id]

    def bellman_value(self, control_id: str, time_id: str) -> RandomVariable:
        """
        V(c,S) as the pointwise maximum of J(d,S) over d ∈ D(c,S).

        The pointwise maximum is one version of the P^c-essential supremum and
        depends on c only through its class, so it is cached per (class, time).
        """
        members = self._system.class_members(control_id, time_id)
        if not members:
            raise PreconditionViolation(
                "bellman_value", f"class D({control_id},{time_id}) is empty", rule="c in D(c,S)"
            )
        key = (frozenset(members), time_id)
        if key not in self._values:
            self._values[key] = ess_sup(
                self.measure(control_id),
                [self.conditional_payoff(d, time_id) for d in members],
            )
        return self._values[key]

    def expected_payoff(self, control_id: str) -> Fraction:
        record = self._system.control(control_id)
        return record.payoff.expectation(record.measure)

    def conditionally_optimal(self, control_id: str, time_id: str) -> bool:
        """V(c,S) = J(c,S) P^c-a.s."""
        return as_equal(
            self.measure(control_id),
            self.bellman_value(control_id, time_id),
            self.conditional_payoff(control_id, time_id),
        )

    # ------------------------------------------------------------------
    # Optimal expected payoff
    # ------------------------------------------------------------------

    def solve(self) -> Tuple[Optional[Fraction], Tuple[str, ...]]:
        """
        (v, optimal ids) by exhaustive maximization; v None encodes sup ∅ = -∞.

        Ties are reported in ascending id order.
        """
        if not self._system.controls:
            logger.info("Empty control set; optimal value is -inf")
            return None, ()
        expectations = {cid: self.expected_payoff(cid) for cid in self._system.control_ids}
        value = max(expectations.values())
        optimal = tuple(sorted(cid for cid, e in expectations.items() if e == value))
        logger.debug("Solved %d controls: v=%s optimal=%s", len(expectations), value, optimal)
        return value, optimal


# ---------------------------------------------------------------------------
# Functional entry points
# ---------------------------------------------------------------------------


def conditional_payoff(system: FiniteControlSystem, control_id: str, time_id: str) -> RandomVariable:
    return BellmanCalculator(system).conditional_payoff(control_id, time_id)


def bellman_value(system: FiniteControlSystem, control_id: str, time_id: str) -> RandomVariable:
    return BellmanCalculator(system).bellman_value(control_id, time_id)


def conditionally_optimal(system: FiniteControlSystem, control_id: str, time_id: str) -> bool:
    return BellmanCalculator(system).conditionally_optimal(control_id, time_id)


def solve(system: FiniteControlSystem) -> Tuple[Optional[Fraction], Tuple[str, ...]]:
    return BellmanCalculator(system).solve()
