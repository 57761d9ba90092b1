"""
Report Schemas - CLI Layer

Pydantic models for the ReportDocument the CLI writes. Every document is
validated against these models before it is written, so the JSON on stdout
always matches REPORT_SCHEMA_VERSION. Exact quantities are strict strings
("7/6", "-inf"); a float in a finite-engine field is a schema error.
"""
from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictStr


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ── Shared ────────────────────────────────────────────────────────────────────

class ProvenanceSchema(_Strict):
    tool: str
    version: str
    input_digest: Optional[str] = Field(None, pattern=r"^sha256:[0-9a-f]{64}$")
    seed: Optional[int] = Field(None, ge=0)
    generated_at: Optional[str] = None


# ── Finite engine ─────────────────────────────────────────────────────────────

class WitnessSchema(_Strict):
    control_ids: List[str]
    time_ids: List[str]
    outcome: Optional[int] = None
    event: Optional[List[int]] = None
    lhs: Optional[StrictStr] = None
    rhs: Optional[StrictStr] = None
    detail: str = ""


class VerdictSchema(_Strict):
    name: str
    section: str
    passed: bool
    checked: int = Field(..., ge=0)
    note: str = ""
    witness: Optional[WitnessSchema] = None


class LatticeVerdictSchema(_Strict):
    control_id: str
    time_id: str
    eps: StrictStr
    cap: Optional[StrictStr] = None
    c1: VerdictSchema
    c2: VerdictSchema
    c3: VerdictSchema
    chain_consistent: bool


class SolutionSchema(_Strict):
    solved: bool
    value: Optional[StrictStr] = None
    optimal_ids: List[str] = Field(default_factory=list)


class BellmanReportDocument(_Strict):
    schema_version: Literal[1]
    kind: Literal["bellman"]
    provenance: ProvenanceSchema
    system: Dict[str, Any] = Field(default_factory=dict)
    passed: bool
    chain_consistent: bool
    solution: SolutionSchema
    verdicts: List[VerdictSchema]
    lattice: List[LatticeVerdictSchema] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


# ── Campaigns and simulations ─────────────────────────────────────────────────

class ResultDocument(_Strict):
    schema_version: Literal[1]
    kind: str
    provenance: ProvenanceSchema
    passed: bool
    result: Dict[str, Any]


ReportDocument = Union[BellmanReportDocument, ResultDocument]


def validate_document(document: Dict[str, Any]) -> BaseModel:
    """Validate a writer document against the schema for its kind."""
    if document.get("kind") == "bellman":
        return BellmanReportDocument.model_validate(document)
    return ResultDocument.model_validate(document)
