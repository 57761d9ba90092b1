"""
Optimal Stopping as a control system

Controls are the stopping times τ <= horizon of a filtration F; control τ
observes G^τ_t = F_{τ∧t}, uses the common measure and earns X_τ. The control
times are the deterministic times with D(τ,t) = {σ : σ∧t = τ∧t}.

Along the never-stopped control τ ≡ horizon the Bellman value at time t is the
Snell envelope of X, which snell_envelope computes independently by backward
induction.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from domain.entities import ControlRecord, ControlTime, FiniteControlSystem
from domain.exceptions import PreconditionViolation, ValidationError
from domain.value_objects import (
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
)

from application.services.bellman_calculator import BellmanCalculator
from application.services.class_derivation import derive_prefix_classes
from application.services.finite_core import as_equal, cond_exp
from application.services.process_algebra import natural_filtration, sigma_at, stop_process

logger = logging.getLogger(__name__)

MAX_STOPPING_TIMES = 20_000

Assignment = Dict[int, int]


@dataclass(frozen=True)
class OptimalStoppingSystem:
    """A control system over stopping times plus the data it was built from."""

    system: FiniteControlSystem
    process: DiscreteProcess
    measure: ProbMeasure
    filtration: Filtration

    @property
    def horizon(self) -> int:
        return self.process.horizon

    @property
    def never_stopped_id(self) -> str:
        return stopping_time_id(RandomTime.constant(self.process.n, self.horizon))


def stopping_time_id(tau: RandomTime) -> str:
    return "tau[" + ",".join(str(int(v)) for v in tau.values) + "]"


def enumerate_stopping_times(f: Filtration) -> List[RandomTime]:
    """Every stopping time of f bounded by the horizon, in a deterministic order."""
    count = 0
    result = []
    for assignment in _combine(f, 0, list(f.at(0).atoms)):
        count += 1
        if count > MAX_STOPPING_TIMES:
            raise ValidationError(
                "filtration", f"more than {MAX_STOPPING_TIMES} stopping times; shrink the instance"
            )
        result.append(RandomTime(tuple(assignment[i] for i in range(f.n))))
    return result


def _assignments(f: Filtration, t: int, atom: Tuple[int, ...]) -> Iterator[Assignment]:
    """Stopping rules on one atom of F_t that have not stopped before t."""
    yield {i: t for i in atom}
    if t >= f.horizon:
        return
    children = [block for block in f.at(t + 1).atoms if block[0] in atom]
    yield from _combine(f, t + 1, children)


def _combine(f: Filtration, t: int, atoms: List[Tuple[int, ...]]) -> Iterator[Assignment]:
    if not atoms:
        yield {}
        return
    head, rest = atoms[0], atoms[1:]
    for first in _assignments(f, t, head):
        for tail in _combine(f, t, rest):
            merged = dict(first)
            merged.update(tail)
            yield merged


def build_optimal_stopping(
    x: DiscreteProcess,
    p: ProbMeasure,
    f: Optional[Filtration] = None,
    labels: Optional[Tuple[str, ...]] = None,
) -> OptimalStoppingSystem:
    """
    Controls are all F-stopping times; f defaults to the natural filtration of x.

    Process values must be rationals (they are paid out as X_τ).
    """
    f = f or natural_filtration(x)
    if f.n != x.n or p.n != x.n:
        raise PreconditionViolation("build_optimal_stopping", "process, measure and filtration sizes differ")
    if f.horizon != x.horizon:
        raise PreconditionViolation("build_optimal_stopping", "filtration and process horizons differ")
    space = SampleSpace.from_labels(labels) if labels else SampleSpace.of_size(x.n)
    horizon = x.horizon
    controls = []
    for tau in enumerate_stopping_times(f):
        stages = tuple(
            sigma_at(f, tau.minimum(RandomTime.constant(x.n, t))) for t in range(horizon + 1)
        )
        payoff = RandomVariable.from_values([x.rows[i][int(tau[i])] for i in range(x.n)])
        controls.append(
            ControlRecord(
                id=stopping_time_id(tau),
                filtration=Filtration(stages),
                measure=p,
                payoff=payoff,
                path=DiscreteProcess(
                    tuple(tuple(min(int(tau[i]), t) for t in range(horizon + 1)) for i in range(x.n))
                ),
                observed=stop_process(x, tau),
            )
        )
    ids = [record.id for record in controls]
    times = [ControlTime.uniform(str(t), ids, RandomTime.constant(x.n, t)) for t in range(horizon + 1)]
    draft = FiniteControlSystem(space, tuple(controls), tuple(times), {})
    system = FiniteControlSystem.build(space, controls, times, derive_prefix_classes(draft))
    logger.debug("Built optimal stopping system with %d stopping times", len(controls))
    return OptimalStoppingSystem(system, x, p, f)


def snell_envelope(x: DiscreteProcess, p: ProbMeasure, f: Optional[Filtration] = None) -> List[RandomVariable]:
    """E_h = X_h and E_t = max(X_t, E[E_{t+1} | F_t])."""
    f = f or natural_filtration(x)
    columns = [RandomVariable.from_values(list(x.column(t))) for t in range(x.horizon + 1)]
    envelope = [columns[-1]]
    for t in range(x.horizon - 1, -1, -1):
        envelope.append(columns[t].maximum(cond_exp(p, envelope[-1], f.at(t))))
    return envelope[::-1]


def snell_crosscheck(instance: OptimalStoppingSystem) -> bool:
    """Bellman value along τ ≡ horizon equals the Snell envelope a.s. at every time."""
    calc = BellmanCalculator(instance.system)
    envelope = snell_envelope(instance.process, instance.measure, instance.filtration)
    control = instance.never_stopped_id
    for t, expected in enumerate(envelope):
        if not as_equal(instance.measure, calc.bellman_value(control, str(t)), expected):
            logger.warning("Snell envelope mismatch at time %d", t)
            return False
    return True


def coin_example() -> OptimalStoppingSystem:
    """2/5 now, or a fair coin paying 0 or 1 at time 1."""
    x = DiscreteProcess(((Fraction(2, 5), Fraction(0)), (Fraction(2, 5), Fraction(1))))
    return build_optimal_stopping(x, ProbMeasure.uniform(2), labels=("tails", "heads"))
