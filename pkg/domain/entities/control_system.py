"""
Finite Control System Entity - Clean Architecture Domain Layer
Aggregate root for a stochastic control system on a finite sample space:
controls with their own filtration, measure and payoff, a family of control
times, and the agreement classes D(c,S).

Construction enforces structural well-formedness only (ids, dimensions,
horizons). The adaptive-dynamics axioms and stability under stopping are
mathematical properties and are checked by the axiom validator, never here.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

from ..exceptions.domain_exceptions import (
    DimensionMismatchError,
    DuplicateEntityError,
    EntityNotFoundError,
    ValidationError,
)
from ..value_objects import (
    INFINITY,
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
)

ZERO_TIME_ID = "0"
INFINITY_TIME_ID = "inf"

ClassKey = Tuple[str, str]


@dataclass(frozen=True)
class ControlRecord:
    """
    One admissible control c with its information G^c, law P^c and payoff J(c).

    path holds the control's own values c_t(ω) and observed the process the
    controller sees; both are optional and only used to derive classes and
    filtrations.
    """

    id: str
    filtration: Filtration
    measure: ProbMeasure
    payoff: RandomVariable
    path: Optional[DiscreteProcess] = None
    observed: Optional[DiscreteProcess] = None

    def __post_init__(self) -> None:
        self._validate_record()

    def _validate_record(self) -> None:
        if not self.id or not self.id.strip():
            raise ValidationError("control.id", "Control id cannot be empty")
        n = self.filtration.n
        if self.measure.n != n:
            raise DimensionMismatchError(f"measure of control '{self.id}'", n, self.measure.n)
        if self.payoff.n != n:
            raise DimensionMismatchError(f"payoff of control '{self.id}'", n, self.payoff.n)
        for name, process in (("path", self.path), ("observed", self.observed)):
            if process is None:
                continue
            if process.n != n:
                raise DimensionMismatchError(f"{name} of control '{self.id}'", n, process.n)
            if process.horizon != self.filtration.horizon:
                raise ValidationError(
                    f"control.{name}",
                    f"control '{self.id}': {name} horizon {process.horizon} != "
                    f"filtration horizon {self.filtration.horizon}",
                )

    @property
    def horizon(self) -> int:
        return self.filtration.horizon


@dataclass(frozen=True)
class ControlTime:
    """A control time S = (S^c)_c: one random time per control, in control order."""

    id: str
    times: Tuple[Tuple[str, RandomTime], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", tuple((cid, s) for cid, s in self.times))
        if not self.id or not self.id.strip():
            raise ValidationError("control_time.id", "Control time id cannot be empty")
        ids = [cid for cid, _ in self.times]
        if len(set(ids)) != len(ids):
            raise ValidationError("control_time.times", f"time '{self.id}' lists a control twice")

    @classmethod
    def uniform(cls, time_id: str, control_ids: Iterable[str], s: RandomTime) -> "ControlTime":
        """The same random time for every control (e.g. a deterministic time)."""
        return cls(time_id, tuple((cid, s) for cid in control_ids))

    def of(self, control_id: str) -> RandomTime:
        for cid, s in self.times:
            if cid == control_id:
                return s
        raise EntityNotFoundError("ControlTime entry", f"{self.id}/{control_id}")

    def as_dict(self) -> Dict[str, RandomTime]:
        return dict(self.times)

    def is_identically(self, value: float) -> bool:
        return all(all(v == value for v in s.values) for _, s in self.times)


@dataclass(frozen=True)
class FiniteControlSystem:
    """
    Aggregate root: (Ω, C, G^c, P^c, J, 𝔊, D).

    classes maps (control id, control-time id) to the member ids of D(c,S).
    Missing or malformed class entries are allowed here and reported by the
    validator.
    """

    space: SampleSpace
    controls: Tuple[ControlRecord, ...]
    control_times: Tuple[ControlTime, ...]
    classes: Mapping[ClassKey, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "control_times", tuple(self.control_times))
        object.__setattr__(
            self, "classes", {key: frozenset(members) for key, members in self.classes.items()}
        )
        self._validate_structure()

    def _validate_structure(self) -> None:
        n = self.space.size
        seen = set()
        for record in self.controls:
            if record.id in seen:
                raise DuplicateEntityError("Control", record.id)
            seen.add(record.id)
            if record.filtration.n != n:
                raise DimensionMismatchError(f"control '{record.id}'", n, record.filtration.n)
        horizons = {record.horizon for record in self.controls}
        if len(horizons) > 1:
            raise ValidationError("controls", f"controls disagree on the horizon: {sorted(horizons)}")
        time_ids = set()
        for ctime in self.control_times:
            if ctime.id in time_ids:
                raise DuplicateEntityError("ControlTime", ctime.id)
            time_ids.add(ctime.id)
            declared = {cid for cid, _ in ctime.times}
            if declared != seen:
                missing = sorted(seen - declared)
                unknown = sorted(declared - seen)
                raise ValidationError(
                    "control_times",
                    f"time '{ctime.id}' must give one random time per control "
                    f"(missing {missing}, unknown {unknown})",
                )
            for cid, s in ctime.times:
                if s.n != n:
                    raise DimensionMismatchError(f"time '{ctime.id}' of control '{cid}'", n, s.n)

    # ------------------------------------------------------------------
    # Lookups
    # ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.space.size

    @property
    def horizon(self) -> int:
        return self.controls[0].horizon if self.controls else 0

    @property
    def control_ids(self) -> Tuple[str, ...]:
        return tuple(record.id for record in self.controls)

    @property
    def time_ids(self) -> Tuple[str, ...]:
        return tuple(ctime.id for ctime in self.control_times)

    def control(self, control_id: str) -> ControlRecord:
        for record in self.controls:
            if record.id == control_id:
                return record
        raise EntityNotFoundError("Control", control_id)

    def control_time(self, time_id: str) -> ControlTime:
        for ctime in self.control_times:
            if ctime.id == time_id:
                return ctime
        raise EntityNotFoundError("ControlTime", time_id)

    def time_of(self, time_id: str, control_id: str) -> RandomTime:
        return self.control_time(time_id).of(control_id)

    def has_class(self, control_id: str, time_id: str) -> bool:
        return (control_id, time_id) in self.classes

    def class_of(self, control_id: str, time_id: str) -> FrozenSet[str]:
        try:
            return self.classes[(control_id, time_id)]
        except KeyError:
            raise EntityNotFoundError("Class D(c,S)", f"{control_id}/{time_id}") from None

    def class_members(self, control_id: str, time_id: str) -> Tuple[str, ...]:
        """D(c,S) in control declaration order, restricted to known controls."""
        members = self.class_of(control_id, time_id)
        return tuple(cid for cid in self.control_ids if cid in members)

    # ------------------------------------------------------------------
    # Derived systems
    # ------------------------------------------------------------------

    def with_classes(self, classes: Mapping[ClassKey, Iterable[str]]) -> "FiniteControlSystem":
        return replace(self, classes={key: frozenset(v) for key, v in classes.items()})

    def with_class(self, control_id: str, time_id: str, members: Iterable[str]) -> "FiniteControlSystem":
        classes = dict(self.classes)
        classes[(control_id, time_id)] = frozenset(members)
        return replace(self, classes=classes)

    def without_control(self, control_id: str) -> "FiniteControlSystem":
        """Drop a control everywhere: control list, control times and class members."""
        self.control(control_id)
        controls = tuple(r for r in self.controls if r.id != control_id)
        times = tuple(
            ControlTime(t.id, tuple((cid, s) for cid, s in t.times if cid != control_id))
            for t in self.control_times
        )
        classes = {
            key: members - {control_id}
            for key, members in self.classes.items()
            if key[0] != control_id
        }
        return FiniteControlSystem(self.space, controls, times, classes)

    def with_extremal_times(self) -> "FiniteControlSystem":
        """
        Add the control times 0 and ∞ unless some time is already identically 0 (resp. ∞).

        New entries get D(c,0) = C and D(c,∞) = {c}.
        """
        times = list(self.control_times)
        classes: Dict[ClassKey, FrozenSet[str]] = dict(self.classes)
        ids = self.control_ids
        existing = {t.id for t in times}
        if not any(t.is_identically(0) for t in times):
            time_id = _fresh_id(ZERO_TIME_ID, existing)
            existing.add(time_id)
            times.insert(0, ControlTime.uniform(time_id, ids, RandomTime.constant(self.n, 0)))
            for cid in ids:
                classes[(cid, time_id)] = frozenset(ids)
        if not any(t.is_identically(INFINITY) for t in times):
            time_id = _fresh_id(INFINITY_TIME_ID, existing)
            times.append(ControlTime.uniform(time_id, ids, RandomTime.infinite(self.n)))
            for cid in ids:
                classes[(cid, time_id)] = frozenset({cid})
        return FiniteControlSystem(self.space, self.controls, tuple(times), classes)

    @classmethod
    def build(
        cls,
        space: SampleSpace,
        controls: Sequence[ControlRecord],
        control_times: Sequence[ControlTime],
        classes: Mapping[ClassKey, Iterable[str]],
        extend: bool = True,
    ) -> "FiniteControlSystem":
        system = cls(
            space,
            tuple(controls),
            tuple(control_times),
            {key: frozenset(v) for key, v in classes.items()},
        )
        return system.with_extremal_times() if extend else system

    def __repr__(self) -> str:
        return (
            f"FiniteControlSystem(n={self.n}, controls={len(self.controls)}, "
            f"times={list(self.time_ids)})"
        )


def _fresh_id(preferred: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    candidate = preferred
    while candidate in taken:
        candidate = f"{candidate}'"
    return candidate
