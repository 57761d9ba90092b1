"""
Verify System Response DTO - Application Layer

Carries the merged BellmanReport of one verification run back to the CLI,
which maps it to a ReportDocument.
"""
from dataclasses import dataclass, field
from typing import Dict, List

from domain.entities import BellmanReport


@dataclass
class VerifySystemResponse:
    """Output DTO returned by VerifySystemUseCase."""

    source: str
    digest: str
    report: BellmanReport

    # Shape of the verified system (after the extremal times were added)
    outcomes: int = 0
    control_ids: List[str] = field(default_factory=list)
    time_ids: List[str] = field(default_factory=list)

    checks_run: List[str] = field(default_factory=list)
    duration_ms: float = 0.0
    stats: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.report.passed
