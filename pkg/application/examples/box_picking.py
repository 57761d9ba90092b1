"""
Box Picking - exact finite example

Two boxes hold rewards Y1 and Y2 on Ω = {0,1}×{-1,1} with weights
(1/6, 1/3, 1/3, 1/6). A control opens box c1 at time 1, observes
X1 = Y_{c1}, then opens box c2 = f(X1) at time 2; the payoff is X1 + X2.

Two variants share controls, payoffs and the prefix classes D(c,t):
  - consistent: each control observes its own natural filtration F^{X^c};
  - classical:  every control uses the filtration F with F_0 trivial and
                F_1 = F_2 = 2^Ω, the smallest one adapting every X^c.

Every predictable strategy, a first box together with a map from the observed
X1 to the second box, is a distinct control: 2 x 4 = 8 controls.
"""
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

from domain.entities import ControlRecord, ControlTime, FiniteControlSystem
from domain.value_objects import (
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
    SigmaField,
)

from application.services.bellman_calculator import BellmanCalculator
from application.services.class_derivation import derive_prefix_classes
from application.services.process_algebra import natural_filtration

OUTCOMES = ("(0,-1)", "(0,1)", "(1,-1)", "(1,1)")
WEIGHTS = ("1/6", "1/3", "1/3", "1/6")
BOXES: Dict[int, Tuple[int, ...]] = {1: (0, 0, 1, 1), 2: (-1, 1, -1, 1)}
HORIZON = 2

OPTIMAL_VALUE = Fraction(7, 6)
CLASSICAL_FIRST_STEP_MEAN = Fraction(4, 3)


def control_id(first: int, decision: Dict[int, int]) -> str:
    body = ",".join(f"{x}:{decision[x]}" for x in sorted(decision))
    return f"c[{first};{body}]"


def box_picking_optimizer_id() -> str:
    """c*: open box 1, then box 2 when X1 = 0 and box 1 when X1 = 1."""
    return control_id(1, {0: 2, 1: 1})


def _strategies() -> List[Tuple[int, Dict[int, int]]]:
    strategies = []
    for first in (1, 2):
        seen = sorted(set(BOXES[first]))
        for choice in product((1, 2), repeat=len(seen)):
            strategies.append((first, dict(zip(seen, choice))))
    return strategies


def _control(first: int, decision: Dict[int, int], classical: bool) -> ControlRecord:
    n = len(OUTCOMES)
    x1 = BOXES[first]
    second = tuple(decision[x1[i]] for i in range(n))
    x2 = tuple(BOXES[second[i]][i] for i in range(n))
    path = DiscreteProcess(tuple((0, first, second[i]) for i in range(n)))
    observed = DiscreteProcess(tuple((0, x1[i], x2[i]) for i in range(n)))
    filtration = classical_filtration() if classical else natural_filtration(observed)
    return ControlRecord(
        id=control_id(first, decision),
        filtration=filtration,
        measure=ProbMeasure.from_values(WEIGHTS),
        payoff=RandomVariable.from_values([x1[i] + x2[i] for i in range(n)]),
        path=path,
        observed=observed,
    )


def classical_filtration() -> Filtration:
    n = len(OUTCOMES)
    return Filtration((SigmaField.trivial(n), SigmaField.discrete(n), SigmaField.discrete(n)))


def _build(classical: bool) -> FiniteControlSystem:
    space = SampleSpace.from_labels(OUTCOMES)
    controls = [_control(first, decision, classical) for first, decision in _strategies()]
    ids = [record.id for record in controls]
    times = [
        ControlTime.uniform(str(t), ids, RandomTime.constant(space.size, t)) for t in range(HORIZON + 1)
    ]
    system = FiniteControlSystem(space, tuple(controls), tuple(times), {})
    return FiniteControlSystem.build(space, controls, times, derive_prefix_classes(system))


def build_box_picking() -> FiniteControlSystem:
    """The informationally consistent system: G^c is the natural filtration of X^c."""
    return _build(classical=False)


def build_box_picking_classical() -> FiniteControlSystem:
    """The same controls on the common filtration F; Bellman's principle fails here."""
    return _build(classical=True)


def bellman_process(system: FiniteControlSystem, control: str) -> List[RandomVariable]:
    """(V(c,t))_{t=0..2} along one control; W* for the classical system."""
    calc = BellmanCalculator(system)
    return [calc.bellman_value(control, str(t)) for t in range(HORIZON + 1)]
