"""
Class Derivation Service - Application Layer

Derives the agreement classes D(c,S) = {d : d^{S^c} = c^{S^c}} for controls
given as processes: two controls share a class at S when their paths,
stopped at S^c, coincide on every outcome charged by P^c or P^d.

Controls without a declared path fall back to their observed process.
"""
import logging
from typing import Dict, FrozenSet

from domain.entities import ClassKey, ControlRecord, FiniteControlSystem
from domain.exceptions import PreconditionViolation
from domain.value_objects import DiscreteProcess

from application.services.process_algebra import stop_process

logger = logging.getLogger(__name__)


def _path(record: ControlRecord) -> DiscreteProcess:
    path = record.path if record.path is not None else record.observed
    if path is None:
        raise PreconditionViolation(
            "derive_prefix_classes", f"control '{record.id}' declares neither a path nor an observed process"
        )
    return path


def derive_prefix_classes(system: FiniteControlSystem) -> Dict[ClassKey, FrozenSet[str]]:
    paths = {record.id: _path(record) for record in system.controls}
    classes: Dict[ClassKey, FrozenSet[str]] = {}
    for ctime in system.control_times:
        for c in system.controls:
            s = ctime.of(c.id)
            stopped_c = stop_process(paths[c.id], s)
            members = set()
            for d in system.controls:
                charged = set(c.measure.support) | set(d.measure.support)
                stopped_d = stop_process(paths[d.id], s)
                if all(stopped_c.rows[i] == stopped_d.rows[i] for i in charged):
                    members.add(d.id)
            classes[(c.id, ctime.id)] = frozenset(members)
    logger.debug("Derived %d prefix classes", len(classes))
    return classes


def with_prefix_classes(system: FiniteControlSystem) -> FiniteControlSystem:
    """The system with its class table replaced by the derived prefix classes."""
    return system.with_classes(derive_prefix_classes(system))
