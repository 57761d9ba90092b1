"""
Bellman Verifier Service - Application Layer

Bellman's principle on a finite control system:

  B1  V is a supermartingale system
  B2  V(c*,·) has constant expectation v along every optimal c*
  B3  V(c*,·) is a martingale along every optimal c*
  B4  conditional optimality propagates forward (optimal implies conditionally
      optimal at 0, hence everywhere)
  B5  constant expectation along a sequence from 0 that ends at ∞ certifies optimality

plus the envelope characterisation (V is the minimal supermartingale system
above the terminal conditional payoffs) and the conditional-expectation
identity for sub-σ-fields of G^c_{T^c}.

Times are compared class-wise: the pair (S,T) is ordered for c when
S^d <= T^d P^d-a.s. for every d ∈ D(c,T).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

from domain.entities import (
    BellmanReport,
    ClassKey,
    FiniteControlSystem,
    Section,
    Verdict,
    Witness,
)
from domain.exceptions import PreconditionViolation
from domain.value_objects import INFINITY, RandomVariable, SigmaField

from application.services.bellman_calculator import BellmanCalculator, times_as_le
from application.services.finite_core import as_equal, cond_exp, ess_sup, first_difference, first_excess
from application.services.lattice_checker import LatticeCheckerService

logger = logging.getLogger(__name__)

FINITE_SPACE_NOTES = (
    "integrability and uniform integrability hold automatically on a finite sample space",
    "optimizing nets reduce to finite maxima over the control set",
)

ValueSystem = Mapping[ClassKey, RandomVariable]


@dataclass
class EnvelopeResult:
    """Outcome of envelope_minimality for one candidate system W."""

    candidate_valid: bool
    dominates: bool
    verdicts: List[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.candidate_valid and self.dominates


class BellmanVerifierService:
    """
    Runs B1–B5 on a system extended with the control times 0 and ∞.

    Usage:
        report = BellmanVerifierService(system).verify()
    """

    def __init__(self, system: FiniteControlSystem) -> None:
        self._system = system.with_extremal_times()
        self._calc = BellmanCalculator(self._system)

    @property
    def system(self) -> FiniteControlSystem:
        return self._system

    @property
    def calculator(self) -> BellmanCalculator:
        return self._calc

    # ------------------------------------------------------------------
    # Bellman's principle
    # ------------------------------------------------------------------

    def verify(self, sequence: Optional[Sequence[str]] = None) -> BellmanReport:
        report = BellmanReport()
        for message in FINITE_SPACE_NOTES:
            report.note(message)
        value, optimal = self._calc.solve()
        report.set_solution(value, optimal)
        if value is None:
            report.note("empty control set: v = -inf and every check is vacuous")

        values = self.value_system()
        for verdict in self.supermartingale_verdicts(values, "B1"):
            report.add(verdict)
        report.add(self._check_dominance())
        report.add(self._check_constant_expectation(optimal, value))
        report.add(self._check_martingale(optimal))
        report.add(self._check_propagation(optimal))
        report.add(self._check_certificate(sequence, value, report))
        return report

    def value_system(self) -> ValueSystem:
        return {
            (cid, tid): self._calc.bellman_value(cid, tid)
            for cid in self._system.control_ids
            for tid in self._system.time_ids
        }

    def ordered_pairs(self, control_id: str) -> List[Tuple[str, str]]:
        """(S, T) with S^d <= T^d P^d-a.s. for every d ∈ D(c,T), in declaration order."""
        pairs = []
        for s in self._system.control_times:
            for t in self._system.control_times:
                members = self._system.class_members(control_id, t.id)
                if all(times_as_le(self._calc.measure(d), s.of(d), t.of(d)) for d in members):
                    pairs.append((s.id, t.id))
        return pairs

    def supermartingale_verdicts(self, w: ValueSystem, prefix: str) -> List[Verdict]:
        """Definition checks (i), (ii) and (iv) of a supermartingale system; (iii) is automatic."""
        _require_complete(self._system, w, prefix)
        return [
            self._check_measurable(w, f"{prefix}-measurable"),
            self._check_class_agreement(w, f"{prefix}-agreement"),
            self._check_conditional_order(w, prefix, lambda lhs, rhs, mu: first_excess(mu, lhs, rhs)),
        ]

    def _check_measurable(self, w: ValueSystem, name: str) -> Verdict:
        checked = 0
        for (cid, tid), x in sorted(w.items()):
            checked += 1
            g = self._calc.sigma(cid, tid).complete(self._calc.measure(cid).null_outcomes)
            if not x.is_measurable(g):
                return Verdict.failed(
                    name, Section.BELLMAN,
                    Witness((cid,), (tid,), detail="not G^c_{S^c}-measurable"), checked,
                )
        return Verdict.ok(name, Section.BELLMAN, checked)

    def _check_class_agreement(self, w: ValueSystem, name: str) -> Verdict:
        checked = 0
        for cid in self._system.control_ids:
            for tid in self._system.time_ids:
                for did in self._system.class_members(cid, tid):
                    checked += 1
                    for mu in (self._calc.measure(cid), self._calc.measure(did)):
                        outcome = first_difference(mu, w[(cid, tid)], w[(did, tid)])
                        if outcome is not None:
                            return Verdict.failed(
                                name, Section.BELLMAN,
                                Witness((cid, did), (tid,), outcome=outcome,
                                        lhs=w[(cid, tid)][outcome], rhs=w[(did, tid)][outcome],
                                        detail="values differ on a class"),
                                checked,
                            )
        return Verdict.ok(name, Section.BELLMAN, checked)

    def _check_conditional_order(
        self,
        w: ValueSystem,
        name: str,
        violation: Callable,
        controls: Optional[Sequence[str]] = None,
    ) -> Verdict:
        """E^{P^c}[W(c,T) | G^c_{S^c}] against W(c,S) over every ordered pair."""
        checked = 0
        for cid in controls if controls is not None else self._system.control_ids:
            mu = self._calc.measure(cid)
            for s_id, t_id in self.ordered_pairs(cid):
                checked += 1
                lhs = cond_exp(mu, w[(cid, t_id)], self._calc.sigma(cid, s_id))
                rhs = w[(cid, s_id)]
                outcome = violation(lhs, rhs, mu)
                if outcome is not None:
                    return Verdict.failed(
                        name, Section.BELLMAN,
                        Witness((cid,), (s_id, t_id), outcome=outcome, lhs=lhs[outcome], rhs=rhs[outcome],
                                detail=f"E[W(c,{t_id}) | G_{s_id}] vs W(c,{s_id})"),
                        checked,
                    )
        return Verdict.ok(name, Section.BELLMAN, checked)

    def _check_dominance(self) -> Verdict:
        checked = 0
        for cid in self._system.control_ids:
            mu = self._calc.measure(cid)
            for tid in self._system.time_ids:
                checked += 1
                v = self._calc.bellman_value(cid, tid)
                j = self._calc.conditional_payoff(cid, tid)
                outcome = first_excess(mu, j, v)
                if outcome is not None:
                    return Verdict.failed(
                        "V>=J", Section.BELLMAN,
                        Witness((cid,), (tid,), outcome=outcome, lhs=v[outcome], rhs=j[outcome]),
                        checked,
                    )
        return Verdict.ok("V>=J", Section.BELLMAN, checked)

    def _check_constant_expectation(self, optimal: Sequence[str], value: Optional[Fraction]) -> Verdict:
        checked = 0
        for cid in optimal:
            mu = self._calc.measure(cid)
            for tid in self._system.time_ids:
                checked += 1
                mean = self._calc.bellman_value(cid, tid).expectation(mu)
                if mean != value:
                    return Verdict.failed(
                        "B2", Section.BELLMAN,
                        Witness((cid,), (tid,), lhs=mean, rhs=value, detail="E V(c*,T) != v"),
                        checked,
                    )
        return Verdict.ok("B2", Section.BELLMAN, checked)

    def _check_martingale(self, optimal: Sequence[str]) -> Verdict:
        return self._check_conditional_order(
            self.value_system(), "B3",
            lambda lhs, rhs, mu: first_difference(mu, lhs, rhs),
            controls=optimal,
        )

    def _check_propagation(self, optimal: Sequence[str]) -> Verdict:
        checked = 0
        zero = _time_identically(self._system, 0)
        for cid in optimal:
            checked += 1
            if zero is not None and not self._calc.conditionally_optimal(cid, zero):
                return Verdict.failed(
                    "B4", Section.BELLMAN,
                    Witness((cid,), (zero,), detail="optimal control not conditionally optimal at 0"), checked,
                )
        for cid in self._system.control_ids:
            for s_id, t_id in self.ordered_pairs(cid):
                if not self._calc.conditionally_optimal(cid, s_id):
                    continue
                checked += 1
                if not self._calc.conditionally_optimal(cid, t_id):
                    mu = self._calc.measure(cid)
                    v = self._calc.bellman_value(cid, t_id)
                    j = self._calc.conditional_payoff(cid, t_id)
                    outcome = first_difference(mu, v, j)
                    return Verdict.failed(
                        "B4", Section.BELLMAN,
                        Witness((cid,), (s_id, t_id), outcome=outcome, lhs=v[outcome], rhs=j[outcome],
                                detail="conditional optimality lost between S and T"),
                        checked,
                    )
        return Verdict.ok("B4", Section.BELLMAN, checked)

    def _check_certificate(
        self, sequence: Optional[Sequence[str]], value: Optional[Fraction], report: BellmanReport
    ) -> Verdict:
        sequence = list(sequence) if sequence else deterministic_sequence(self._system)
        if not sequence or _time_value(self._system, sequence[0]) != 0:
            report.note("B5 not applicable: the sequence must start at the time 0")
            return Verdict.ok("B5", Section.BELLMAN, note="not applicable")
        infinity = _time_identically(self._system, INFINITY)
        checked = 0
        for cid in self._system.control_ids:
            mu = self._calc.measure(cid)
            means = {self._calc.bellman_value(cid, tid).expectation(mu) for tid in sequence}
            if len(means) != 1:
                continue
            if infinity is not None and not as_equal(
                mu, self._calc.bellman_value(cid, sequence[-1]), self._calc.bellman_value(cid, infinity)
            ):
                continue
            checked += 1
            expected = self._calc.expected_payoff(cid)
            if expected != value:
                return Verdict.failed(
                    "B5", Section.BELLMAN,
                    Witness((cid,), tuple(sequence), lhs=expected, rhs=value,
                            detail="premises hold but the control is not optimal"),
                    checked,
                )
        return Verdict.ok("B5", Section.BELLMAN, checked)

    # ------------------------------------------------------------------
    # Envelope and consistency
    # ------------------------------------------------------------------

    def envelope_minimality(self, w: ValueSystem) -> EnvelopeResult:
        """
        W must be a supermartingale system with W(c,∞) >= E^{P^c}[J(c) | G^c_∞].
        Then the result reports whether W >= V everywhere.
        """
        verdicts = [
            Verdict(v.name, v.passed, Section.ENVELOPE, v.witness, v.checked, v.note)
            for v in self.supermartingale_verdicts(w, "W")
        ]
        verdicts.append(self._check_terminal(w))
        valid = all(v.passed for v in verdicts)
        minimal = self._check_above_value(w)
        verdicts.append(minimal)
        if not valid:
            logger.info("Envelope candidate is not a supermartingale system above the terminal payoffs")
        return EnvelopeResult(valid, minimal.passed, verdicts)

    def _check_terminal(self, w: ValueSystem) -> Verdict:
        infinity = _time_identically(self._system, INFINITY)
        checked = 0
        for cid in self._system.control_ids:
            checked += 1
            mu = self._calc.measure(cid)
            terminal = self._calc.terminal_payoff(cid)
            outcome = first_excess(mu, terminal, w[(cid, infinity)])
            if outcome is not None:
                return Verdict.failed(
                    "W-terminal", Section.ENVELOPE,
                    Witness((cid,), (infinity,), outcome=outcome, lhs=w[(cid, infinity)][outcome],
                            rhs=terminal[outcome], detail="W(c,inf) below E[J(c) | G_inf]"),
                    checked,
                )
        return Verdict.ok("W-terminal", Section.ENVELOPE, checked)

    def _check_above_value(self, w: ValueSystem) -> Verdict:
        checked = 0
        for (cid, tid), x in sorted(w.items()):
            checked += 1
            v = self._calc.bellman_value(cid, tid)
            outcome = first_excess(self._calc.measure(cid), v, x)
            if outcome is not None:
                return Verdict.failed(
                    "W-dominates-V", Section.ENVELOPE,
                    Witness((cid,), (tid,), outcome=outcome, lhs=x[outcome], rhs=v[outcome]),
                    checked,
                )
        return Verdict.ok("W-dominates-V", Section.ENVELOPE, checked)

    def consistency_theorem_check(self, control_id: str, time_id: str, sub_field: SigmaField) -> bool:
        """
        E^{P^c}[V(c,T) | A] = ess sup_{d ∈ D(c,T)} E^{P^d}[J(d) | A] P^c-a.s.,
        and E^{P^c} V(c,T) = max_d E^{P^d} J(d).
        """
        if not sub_field.is_coarser_than(self._calc.sigma(control_id, time_id)):
            raise PreconditionViolation(
                "consistency_theorem_check", "A must be a sub-σ-field of G^c_{T^c}", rule="A ⊂ G^c_T"
            )
        lattice = LatticeCheckerService(self._system, self._calc).check(control_id, time_id)
        if not lattice.c3.passed:
            raise PreconditionViolation(
                "consistency_theorem_check",
                f"D({control_id},{time_id}) lacks the upwards-lattice property",
                rule="lattice",
            )
        mu = self._calc.measure(control_id)
        members = self._system.class_members(control_id, time_id)
        value = self._calc.bellman_value(control_id, time_id)
        lhs = cond_exp(mu, value, sub_field)
        rhs = ess_sup(mu, [
            cond_exp(self._calc.measure(d), self._system.control(d).payoff, sub_field) for d in members
        ])
        pointwise = as_equal(mu, lhs, rhs)
        in_mean = value.expectation(mu) == max(self._calc.expected_payoff(d) for d in members)
        return pointwise and in_mean


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _time_value(system: FiniteControlSystem, time_id: str) -> Optional[float]:
    """Common constant value of a deterministic control time, else None."""
    values = {s.constant_value() for _, s in system.control_time(time_id).times}
    if len(values) != 1:
        return None
    return next(iter(values))


def _time_identically(system: FiniteControlSystem, value: float) -> Optional[str]:
    for ctime in system.control_times:
        if ctime.is_identically(value):
            return ctime.id
    return None


def deterministic_sequence(system: FiniteControlSystem) -> List[str]:
    """Deterministic control times sorted by value, 0 first and ∞ last."""
    timed = [(v, tid) for tid in system.time_ids if (v := _time_value(system, tid)) is not None]
    return [tid for _, tid in sorted(timed, key=lambda pair: pair[0])]


def _require_complete(system: FiniteControlSystem, w: ValueSystem, operation: str) -> None:
    for cid in system.control_ids:
        for tid in system.time_ids:
            if (cid, tid) not in w:
                raise PreconditionViolation(operation, f"candidate has no entry for ({cid}, {tid})")


def verify_bellman(system: FiniteControlSystem, sequence: Optional[Sequence[str]] = None) -> BellmanReport:
    return BellmanVerifierService(system).verify(sequence)


def is_supermartingale_system(system: FiniteControlSystem, w: ValueSystem) -> List[Verdict]:
    return BellmanVerifierService(system).supermartingale_verdicts(w, "W")


def envelope_minimality(system: FiniteControlSystem, w: ValueSystem) -> EnvelopeResult:
    return BellmanVerifierService(system).envelope_minimality(w)


def consistency_theorem_check(
    system: FiniteControlSystem, control_id: str, time_id: str, sub_field: SigmaField
) -> bool:
    return BellmanVerifierService(system).consistency_theorem_check(control_id, time_id, sub_field)
