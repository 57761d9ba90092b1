"""
System File Codec - Infrastructure Layer

Translates between SystemFile documents (JSON text validated by
SystemFileModel) and FiniteControlSystem aggregates.

Decoding stops at the first problem: JSON syntax errors carry the line and
column of the offending character, schema errors the dotted location inside
the document. Domain validation errors raised while building value objects
pass through unchanged.

Encoding is deterministic and always writes the full class table with
extend = false, so an emitted file re-parses to the same system.
"""
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional

from pydantic import ValidationError as SchemaError

from domain.entities import ControlRecord, ControlTime, FiniteControlSystem
from domain.exceptions import DomainError
from domain.value_objects import (
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
    SigmaField,
    format_fraction,
    format_time_value,
)

from .models.system_file_model import FORMAT_NAME, SCHEMA_VERSION, ControlModel, SystemFileModel


class SystemFileError(DomainError):
    """Raised when a SystemFile cannot be parsed.

    Example:
        raise SystemFileError("Expecting ',' delimiter", line=12, column=7)

    Maps to exit code 1.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 location: Optional[str] = None) -> None:
        self.line = line
        self.column = column
        self.location = location
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if location:
            where.append(f"at {location}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)


@dataclass(frozen=True)
class DecodedSystem:
    system: FiniteControlSystem
    derive_prefix: bool = False


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def parse_document(text: str) -> SystemFileModel:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFileError(exc.msg, line=exc.lineno, column=exc.colno) from None
    try:
        return SystemFileModel.model_validate(raw)
    except SchemaError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise SystemFileError(first["msg"], location=location) from None


def _process(rows: Optional[List[List[Hashable]]]) -> Optional[DiscreteProcess]:
    return None if rows is None else DiscreteProcess(tuple(tuple(row) for row in rows))


def _control(model: ControlModel, n: int) -> ControlRecord:
    return ControlRecord(
        id=model.id,
        filtration=Filtration(tuple(SigmaField(n, tuple(tuple(a) for a in stage)) for stage in model.filtration)),
        measure=ProbMeasure.from_values(model.measure),
        payoff=RandomVariable.from_values(model.payoff),
        path=_process(model.path),
        observed=_process(model.observed),
    )


def document_to_system(document: SystemFileModel) -> DecodedSystem:
    space = SampleSpace.from_labels(document.outcomes)
    controls = [_control(model, space.size) for model in document.controls]
    ids = [record.id for record in controls]
    times = []
    for entry in document.control_times:
        if entry.uniform is not None:
            times.append(ControlTime.uniform(entry.id, ids, RandomTime.from_values(entry.uniform)))
        else:
            assert entry.times is not None
            times.append(
                ControlTime(entry.id, tuple((cid, RandomTime.from_values(v)) for cid, v in entry.times.items()))
            )
    classes = {
        (cid, tid): frozenset(members)
        for cid, per_time in (document.classes or {}).items()
        for tid, members in per_time.items()
    }
    system = FiniteControlSystem.build(space, controls, times, classes, extend=document.extend)
    return DecodedSystem(system, derive_prefix=document.derive == "prefix")


def decode_system(text: str) -> DecodedSystem:
    return document_to_system(parse_document(text))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _label(value: Hashable) -> Any:
    if isinstance(value, (bool, Fraction)):
        return str(value)
    if isinstance(value, int):
        return value
    return str(value)


def _rows(process: Optional[DiscreteProcess]) -> Optional[List[List[Any]]]:
    if process is None:
        return None
    return [[_label(v) for v in row] for row in process.rows]


def system_to_document(system: FiniteControlSystem) -> Dict[str, Any]:
    controls = []
    for record in system.controls:
        entry: Dict[str, Any] = {
            "id": record.id,
            "measure": [format_fraction(w) for w in record.measure.weights],
            "filtration": [[list(atom) for atom in stage.atoms] for stage in record.filtration.stages],
            "payoff": [format_fraction(v) for v in record.payoff.values],
        }
        if record.path is not None:
            entry["path"] = _rows(record.path)
        if record.observed is not None:
            entry["observed"] = _rows(record.observed)
        controls.append(entry)
    times = [
        {"id": ctime.id, "times": {cid: [format_time_value(v) for v in s.values] for cid, s in ctime.times}}
        for ctime in system.control_times
    ]
    classes: Dict[str, Dict[str, List[str]]] = {}
    for cid in system.control_ids:
        for tid in system.time_ids:
            if system.has_class(cid, tid):
                classes.setdefault(cid, {})[tid] = list(system.class_members(cid, tid)) + sorted(
                    system.class_of(cid, tid) - set(system.control_ids)
                )
    return {
        "format": FORMAT_NAME,
        "schema_version": SCHEMA_VERSION,
        "outcomes": list(system.space.outcomes),
        "controls": controls,
        "control_times": times,
        "classes": classes,
        "extend": False,
    }


def encode_system(system: FiniteControlSystem) -> str:
    return json.dumps(system_to_document(system), indent=2, ensure_ascii=False) + "\n"
