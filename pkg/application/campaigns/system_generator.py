"""
Random coherent control systems and their mutations.

A generated system has one decision time d. Up to d every control plays the
same actions and observes the same block label, revealed at d, so F_d has at
most two atoms. After d a control plays a_t = f(block) for one of the (at
most four) maps f from blocks to actions {0, 1}; it observes O[a_t][t] and
is paid R0 + Σ_{t>d} R[a_t][t] path by path. Gluing two controls on an event
of F_d yields another control, so every class is closed under gluing.

Mutations break exactly one structural property:
  enlarge     D(c,S) of a single control is widened to all controls
  drop-glue   the only control dominating some glued pair is deleted
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from domain.entities import ControlRecord, ControlTime, FiniteControlSystem
from domain.exceptions import PreconditionViolation
from domain.value_objects import DiscreteProcess, RandomTime, RandomVariable, SampleSpace
from domain.value_objects.sigma_field import MAX_ENUMERABLE_ATOMS

from application.campaigns.random_instances import random_measure
from application.services.bellman_calculator import BellmanCalculator
from application.services.class_derivation import derive_prefix_classes
from application.services.process_algebra import natural_filtration

logger = logging.getLogger(__name__)

ENLARGE = "enlarge"
DROP_GLUE = "drop-glue"


@dataclass(frozen=True)
class GeneratorLimits:
    max_outcomes: int = 6
    max_horizon: int = 3
    reward_range: int = 4


def _decision_id(decision: Tuple[int, ...]) -> str:
    return "f[" + ",".join(str(a) for a in decision) + "]"


def generate_coherent_system(rng: np.random.Generator, limits: GeneratorLimits) -> FiniteControlSystem:
    n = int(rng.integers(2, max(2, limits.max_outcomes) + 1))
    horizon = int(rng.integers(1, max(1, limits.max_horizon) + 1))
    decision_time = int(rng.integers(0, horizon))
    blocks = [0] * n if decision_time == 0 else [int(b) for b in rng.integers(0, 2, size=n)]
    block_values = sorted(set(blocks))
    mu = random_measure(rng, n)

    signals = rng.integers(0, 2, size=(2, horizon + 1, n))
    rewards = rng.integers(-limits.reward_range, limits.reward_range + 1, size=(2, horizon + 1, n))
    base = rng.integers(0, limits.reward_range + 1, size=n)

    controls: List[ControlRecord] = []
    for choice in product((0, 1), repeat=len(block_values)):
        decision = dict(zip(block_values, choice))
        path_rows, observed_rows, payoff = [], [], []
        for i in range(n):
            actions = [0] * (horizon + 1)
            seen = [0] * (horizon + 1)
            total = int(base[i])
            for t in range(1, horizon + 1):
                if t <= decision_time:
                    seen[t] = blocks[i] if t == decision_time else 0
                    continue
                actions[t] = decision[blocks[i]]
                seen[t] = 2 + int(signals[actions[t], t, i])
                total += int(rewards[actions[t], t, i])
            path_rows.append(tuple(actions))
            observed_rows.append(tuple(seen))
            payoff.append(Fraction(total))
        observed = DiscreteProcess(tuple(observed_rows))
        controls.append(ControlRecord(
            id=_decision_id(choice),
            filtration=natural_filtration(observed),
            measure=mu,
            payoff=RandomVariable.from_values(payoff),
            path=DiscreteProcess(tuple(path_rows)),
            observed=observed,
        ))

    space = SampleSpace.of_size(n)
    ids = [record.id for record in controls]
    times = [ControlTime.uniform(str(t), ids, RandomTime.constant(n, t)) for t in range(horizon + 1)]
    draft = FiniteControlSystem(space, tuple(controls), tuple(times), {})
    system = FiniteControlSystem.build(space, controls, times, derive_prefix_classes(draft))
    logger.debug("Generated system: n=%d horizon=%d decision=%d controls=%d", n, horizon, decision_time, len(ids))
    return system


# ---------------------------------------------------------------------------
# Mutations
# ---------------------------------------------------------------------------


def _enlarge(rng: np.random.Generator, system: FiniteControlSystem) -> Optional[FiniteControlSystem]:
    everyone = frozenset(system.control_ids)
    candidates = sorted(key for key, members in system.classes.items() if members != everyone)
    if not candidates:
        return None
    cid, tid = candidates[int(rng.integers(0, len(candidates)))]
    return system.with_class(cid, tid, everyone)


def _unique_glue(system: FiniteControlSystem) -> Optional[str]:
    """A control that alone dominates some glued pair of other members of its class."""
    calc = BellmanCalculator(system)
    for cid in system.control_ids:
        mu = calc.measure(cid)
        for tid in system.time_ids:
            members = system.class_members(cid, tid)
            field = calc.sigma(cid, tid)
            if len(members) < 3 or field.atom_count > MAX_ENUMERABLE_ATOMS:
                continue
            for event in field.events():
                if not event or len(event) == system.n:
                    continue
                for d in members:
                    for other in members:
                        if d == other:
                            continue
                        glued = system.control(d).payoff.glue(event, system.control(other).payoff)
                        dominating = [e for e in members if system.control(e).payoff.dominates(mu, glued)]
                        if len(dominating) == 1 and dominating[0] not in (d, other):
                            return dominating[0]
    return None


def mutate_system(rng: np.random.Generator, system: FiniteControlSystem) -> Tuple[str, FiniteControlSystem]:
    """(mutation kind, mutated system); drop-glue falls back to enlarge when no unique glue exists."""
    if rng.random() < 0.5:
        victim = _unique_glue(system)
        if victim is not None:
            return DROP_GLUE, system.without_control(victim)
    mutated = _enlarge(rng, system)
    if mutated is None:
        raise PreconditionViolation("mutate_system", "every class already holds every control")
    return ENLARGE, mutated


def summarize(system: FiniteControlSystem) -> Dict[str, object]:
    return {
        "outcomes": system.n,
        "horizon": system.horizon,
        "controls": list(system.control_ids),
        "weights": [str(w) for w in system.controls[0].measure.weights] if system.controls else [],
        "payoffs": {r.id: [str(v) for v in r.payoff] for r in system.controls},
    }
