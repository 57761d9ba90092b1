"""
Shared fixtures.

gamble_system is the smallest interesting control system: a fair coin, a
"safe" control paying 1/2 and a "risky" one paying 0 or 2, both learning the
coin at time 1. Its optimal value is 1, attained by "risky", and every check
passes on it; the unit tests break it one axiom at a time.
"""
from pathlib import Path
from typing import Dict, FrozenSet, Optional

import pytest

from application.examples.box_picking import build_box_picking, build_box_picking_classical
from domain.entities import ClassKey, ControlRecord, ControlTime, FiniteControlSystem
from domain.value_objects import (
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
    SigmaField,
)
from infrastructure.persistence.repositories import JsonSystemRepository

FIXTURES = Path(__file__).parent / "fixtures"


# ===========================================================================
# Helpers / Factories
# ===========================================================================

def coin_filtration() -> Filtration:
    return Filtration((SigmaField.trivial(2), SigmaField.discrete(2)))


def gamble_classes() -> Dict[ClassKey, FrozenSet[str]]:
    both = frozenset({"safe", "risky"})
    return {
        ("safe", "0"): both,
        ("risky", "0"): both,
        ("safe", "1"): frozenset({"safe"}),
        ("risky", "1"): frozenset({"risky"}),
    }


def make_gamble_system(
    classes: Optional[Dict[ClassKey, FrozenSet[str]]] = None,
    safe_filtration: Optional[Filtration] = None,
    extend: bool = True,
) -> FiniteControlSystem:
    space = SampleSpace.from_labels(["tails", "heads"])
    mu = ProbMeasure.uniform(2)
    safe = ControlRecord(
        id="safe",
        filtration=safe_filtration or coin_filtration(),
        measure=mu,
        payoff=RandomVariable.from_values(["1/2", "1/2"]),
        path=DiscreteProcess(((0, 0), (0, 0))),
    )
    risky = ControlRecord(
        id="risky",
        filtration=coin_filtration(),
        measure=mu,
        payoff=RandomVariable.from_values([0, 2]),
        path=DiscreteProcess(((0, 1), (0, 1))),
    )
    ids = ["safe", "risky"]
    times = [ControlTime.uniform(str(t), ids, RandomTime.constant(2, t)) for t in (0, 1)]
    return FiniteControlSystem.build(
        space, [safe, risky], times, gamble_classes() if classes is None else classes, extend=extend
    )


# ===========================================================================
# Fixtures
# ===========================================================================

@pytest.fixture
def gamble_system() -> FiniteControlSystem:
    return make_gamble_system()


@pytest.fixture(scope="session")
def box_picking() -> FiniteControlSystem:
    return build_box_picking()


@pytest.fixture(scope="session")
def box_picking_classical() -> FiniteControlSystem:
    return build_box_picking_classical()


@pytest.fixture
def repository() -> JsonSystemRepository:
    return JsonSystemRepository()


@pytest.fixture
def box_picking_file(tmp_path, repository, box_picking) -> Path:
    target = tmp_path / "box_picking.sys.json"
    repository.save(box_picking, target)
    return target


@pytest.fixture
def box_picking_classical_file(tmp_path, repository, box_picking_classical) -> Path:
    target = tmp_path / "box_picking_classical.sys.json"
    repository.save(box_picking_classical, target)
    return target
