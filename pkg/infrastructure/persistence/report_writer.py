"""
Report Writer - Infrastructure Layer

Builds ReportDocument dictionaries from BellmanReports and simulation
results, and writes them as JSON.

Serialization is deterministic: keys are sorted, fractions are written as
exact strings and finite-engine reports carry no timestamp, so identical
inputs give byte-identical reports. Simulation reports add a generated_at
field and are identical up to it.
"""
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

from domain.entities import BellmanReport, LatticeVerdict, Verdict, Witness

TOOL_NAME = "bellman"
TOOL_VERSION = "1.0.0"
REPORT_SCHEMA_VERSION = 1


def provenance(digest: Optional[str] = None, seed: Optional[int] = None,
               timestamped: bool = False) -> Dict[str, Any]:
    record: Dict[str, Any] = {"tool": TOOL_NAME, "version": TOOL_VERSION}
    if digest is not None:
        record["input_digest"] = digest
    if seed is not None:
        record["seed"] = seed
    if timestamped:
        record["generated_at"] = datetime.now(tz=timezone.utc).isoformat(timespec="seconds")
    return record


def _fraction(value: Any) -> Optional[str]:
    return None if value is None else str(value)


def witness_to_dict(witness: Optional[Witness]) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    return {
        "control_ids": list(witness.control_ids),
        "time_ids": list(witness.time_ids),
        "outcome": witness.outcome,
        "event": None if witness.event is None else list(witness.event),
        "lhs": _fraction(witness.lhs),
        "rhs": _fraction(witness.rhs),
        "detail": witness.detail,
    }


def verdict_to_dict(verdict: Verdict) -> Dict[str, Any]:
    return {
        "name": verdict.name,
        "section": verdict.section.value,
        "passed": verdict.passed,
        "checked": verdict.checked,
        "note": verdict.note,
        "witness": witness_to_dict(verdict.witness),
    }


def lattice_to_dict(verdict: LatticeVerdict) -> Dict[str, Any]:
    return {
        "control_id": verdict.control_id,
        "time_id": verdict.time_id,
        "eps": str(verdict.eps),
        "cap": _fraction(verdict.cap),
        "c1": verdict_to_dict(verdict.c1),
        "c2": verdict_to_dict(verdict.c2),
        "c3": verdict_to_dict(verdict.c3),
        "chain_consistent": verdict.chain_consistent,
    }


def bellman_report_document(report: BellmanReport, origin: Dict[str, Any],
                            system: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "bellman",
        "provenance": origin,
        "system": system or {},
        "passed": report.passed,
        "chain_consistent": report.chain_consistent,
        "solution": {
            "solved": report.solved,
            "value": report.value_display,
            "optimal_ids": list(report.optimal_ids),
        },
        "verdicts": [verdict_to_dict(v) for v in report.verdicts],
        "lattice": [lattice_to_dict(v) for v in report.lattice],
        "notes": list(report.notes),
    }


def result_document(kind: str, origin: Dict[str, Any], passed: bool, body: Dict[str, Any]) -> Dict[str, Any]:
    """Envelope for campaign and simulation results."""
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": kind,
        "provenance": origin,
        "passed": passed,
        "result": body,
    }


def render_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=True, default=str) + "\n"


def write_document(document: Dict[str, Any], out: Optional[Union[str, Path]] = None) -> None:
    """Write to the given path, or to standard output when out is None."""
    text = render_json(document)
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8")
