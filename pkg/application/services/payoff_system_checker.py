"""
Payoff System Checker - Application Layer

Confirms that the conditional payoff system is a payoff system:
  (i)  J(c,T) is G^c_{T^c}-measurable
  (ii) J(c,S) = J(c,T) P^c-a.s. on {S^c = T^c}
and, for caller-supplied agreement cases, that J(c,S) = J(d,S) a.s. on A
whenever c ~_S d, A ∈ G^c_{S^c}, a nondecreasing sequence of control times
accesses infinity on A for both controls with c ~_{S_n} d and A ∈ G^c_{S_n^c},
and the terminal conditional payoffs of c and d agree on A.
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence

from domain.entities import FiniteControlSystem, Section, Verdict, Witness
from domain.exceptions import PreconditionViolation
from domain.value_objects import ProbMeasure, RandomVariable

from application.services.bellman_calculator import BellmanCalculator, times_as_le

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AgreementCase:
    """Inputs of one agreement check: controls c, d, time S, event A and the sequence (S_n)."""

    control_id: str
    other_id: str
    time_id: str
    event: FrozenSet[int]
    sequence: Sequence[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "event", frozenset(self.event))
        object.__setattr__(self, "sequence", tuple(self.sequence))


def _first_gap(mu: ProbMeasure, x: RandomVariable, y: RandomVariable, event) -> int:
    return next((i for i in mu.support if i in event and x[i] != y[i]), -1)


class PayoffSystemCheckerService:
    def __init__(self, system: FiniteControlSystem, calculator: Optional[BellmanCalculator] = None) -> None:
        self._system = system
        self._calc = calculator or BellmanCalculator(system)

    def check(self, cases: Sequence[AgreementCase] = ()) -> List[Verdict]:
        verdicts = [self._check_measurable(), self._check_consistency()]
        for case in cases:
            verdicts.append(self._check_agreement(case))
        return verdicts

    def _check_measurable(self) -> Verdict:
        checked = 0
        for cid in self._system.control_ids:
            for tid in self._system.time_ids:
                checked += 1
                if not self._calc.conditional_payoff(cid, tid).is_measurable(self._calc.sigma(cid, tid)):
                    return Verdict.failed(
                        "payoff-measurable", Section.PAYOFF,
                        Witness((cid,), (tid,), detail="J(c,S) not G^c_{S^c}-measurable"), checked,
                    )
        return Verdict.ok("payoff-measurable", Section.PAYOFF, checked)

    def _check_consistency(self) -> Verdict:
        checked = 0
        times = self._system.control_times
        for cid in self._system.control_ids:
            mu = self._calc.measure(cid)
            for k, s in enumerate(times):
                for t in times[k + 1:]:
                    checked += 1
                    event = frozenset(i for i in range(self._system.n) if s.of(cid)[i] == t.of(cid)[i])
                    outcome = _first_gap(
                        mu, self._calc.conditional_payoff(cid, s.id), self._calc.conditional_payoff(cid, t.id), event
                    )
                    if outcome >= 0:
                        return Verdict.failed(
                            "payoff-consistency", Section.PAYOFF,
                            Witness((cid,), (s.id, t.id), outcome=outcome, detail="J(c,S) != J(c,T) on {S=T}"),
                            checked,
                        )
        return Verdict.ok("payoff-consistency", Section.PAYOFF, checked)

    def _check_agreement(self, case: AgreementCase) -> Verdict:
        self._require_hypotheses(case)
        c, d, tid = case.control_id, case.other_id, case.time_id
        jc = self._calc.conditional_payoff(c, tid)
        jd = self._calc.conditional_payoff(d, tid)
        for mu in (self._calc.measure(c), self._calc.measure(d)):
            outcome = _first_gap(mu, jc, jd, case.event)
            if outcome >= 0:
                return Verdict.failed(
                    "payoff-agreement", Section.PAYOFF,
                    Witness((c, d), (tid,), outcome=outcome, event=tuple(sorted(case.event)),
                            lhs=jc[outcome], rhs=jd[outcome], detail="J(c,S) != J(d,S) on A"),
                )
        return Verdict.ok("payoff-agreement", Section.PAYOFF, 1)

    def _require_hypotheses(self, case: AgreementCase) -> None:
        op = "payoff_system_check"
        system, calc = self._system, self._calc
        c, d = case.control_id, case.other_id
        if d not in system.class_of(c, case.time_id):
            raise PreconditionViolation(op, f"{c} and {d} are not equivalent at {case.time_id}", rule="c ~_S d")
        if not calc.sigma(c, case.time_id).contains(case.event):
            raise PreconditionViolation(op, "A is not an event of G^c_{S^c}", rule="A in G^c_S")
        if not case.sequence:
            raise PreconditionViolation(op, "the sequence of control times is empty")
        for tid in case.sequence:
            if d not in system.class_of(c, tid):
                raise PreconditionViolation(op, f"{c} and {d} are not equivalent at {tid}", rule="c ~_Sn d")
            if not calc.sigma(c, tid).contains(case.event):
                raise PreconditionViolation(op, f"A is not an event of G^c at {tid}", rule="A in G^c_Sn")
        for cid in (c, d):
            mu = calc.measure(cid)
            times = [system.time_of(tid, cid) for tid in case.sequence]
            for earlier, later in zip(times, times[1:]):
                if not times_as_le(mu, earlier, later):
                    raise PreconditionViolation(op, "the sequence is not nondecreasing", rule="nondecreasing")
            horizon = system.control(cid).horizon
            late = [i for i in mu.support if i in case.event and max(s[i] for s in times) < horizon]
            if late:
                raise PreconditionViolation(
                    op, f"the sequence does not access infinity on A for {cid}", rule="accesses infinity"
                )
        tc, td = calc.terminal_payoff(c), calc.terminal_payoff(d)
        for mu in (calc.measure(c), calc.measure(d)):
            if _first_gap(mu, tc, td, case.event) >= 0:
                raise PreconditionViolation(
                    op, "terminal conditional payoffs differ on A", rule="E[J(c)|G_inf] = E[J(d)|G_inf] on A"
                )


def payoff_system_check(system: FiniteControlSystem, cases: Sequence[AgreementCase] = ()) -> bool:
    verdicts = PayoffSystemCheckerService(system).check(cases)
    failed = [v for v in verdicts if not v.passed]
    for v in failed:
        logger.info("Payoff system check %s failed: %r", v.name, v.witness)
    return not failed
