"""
verify - check a SystemFile

bellman verify SYSTEM.sys.json [--checks axioms,lattice,bellman,payoff]
                               [--eps 0] [--cap M] [--sequence 0,1,2]
                               [--out FILE] [--format json|tsv]

Exit 0 when every requested check passes, 2 when a check fails.
"""
from fractions import Fraction
from typing import Any, Dict, List, Optional

import click

from application.dto.verify_system_request import ALL_CHECKS, VerifySystemRequest
from application.dto.verify_system_response import VerifySystemResponse
from domain.entities import Verdict
from infrastructure.persistence.report_writer import bellman_report_document, provenance

from ..dependencies.settings import Settings
from ..dependencies.use_case_factory import command_logger, get_verify_system_use_case
from ..middleware.error_handler import EXIT_CHECK_FAILED, EXIT_OK
from ..presenters import emit, render_table, status_line
from .options import FRACTION, output_options

VERDICT_COLUMNS = ("check", "section", "passed", "checked", "witness")
SHOWN_FAILURES = 20


# ---------------------------------------------------------------------------
# Response converters (DTO → ReportDocument / table rows)
# ---------------------------------------------------------------------------

def verdict_rows(verdicts: List[Verdict]) -> List[List[Any]]:
    return [
        [v.name, v.section.value, v.passed, v.checked, "" if v.witness is None else repr(v.witness)]
        for v in verdicts
    ]


def response_to_document(response: VerifySystemResponse) -> Dict[str, Any]:
    system = {
        "source": response.source,
        "outcomes": response.outcomes,
        "control_ids": response.control_ids,
        "time_ids": response.time_ids,
        "checks": response.checks_run,
    }
    return bellman_report_document(response.report, provenance(digest=response.digest), system)


def present(response: VerifySystemResponse, fmt: str, out: Optional[str]) -> int:
    """Emit the report, show the human summary, return the exit code."""
    report = response.report
    rows = verdict_rows(report.verdicts)
    for lv in report.lattice:
        rows.extend(verdict_rows([lv.c1, lv.c2, lv.c3]))
    emit(response_to_document(response), fmt, out, VERDICT_COLUMNS, rows)

    failures = report.failures()
    if failures:
        render_table(f"Failed checks ({len(failures)})", VERDICT_COLUMNS, verdict_rows(failures[:SHOWN_FAILURES]))
    for message in report.notes:
        click.echo(f"note: {message}", err=True)
    optimal = ", ".join(report.optimal_ids) or "none"
    status_line(response.passed, f"{response.source}: v = {report.value_display} (optimal: {optimal})")
    return EXIT_OK if response.passed else EXIT_CHECK_FAILED


def _checks(raw: str) -> frozenset:
    return frozenset(item.strip() for item in raw.split(",") if item.strip())


# ---------------------------------------------------------------------------
# Command
# ---------------------------------------------------------------------------

@click.command("verify")
@click.argument("path")
@click.option("--checks", default=",".join(sorted(ALL_CHECKS)), show_default=True,
              help="Comma-separated check families; structure is always checked.")
@click.option("--eps", type=FRACTION, default="0", show_default=True, help="Lattice slack ε ≥ 0.")
@click.option("--cap", type=FRACTION, default=None, help="Lattice cap M (default +∞).")
@click.option("--sequence", default=None, help="Comma-separated control-time ids for the B5 certificate.")
@output_options
@click.pass_context
def verify(ctx: click.Context, path: str, checks: str, eps: Fraction, cap: Optional[Fraction],
           sequence: Optional[str], out: Optional[str], fmt: str) -> None:
    """Validate a SystemFile and check Bellman's principle on it ("-" reads stdin)."""
    settings: Settings = ctx.obj
    logger = command_logger(__name__, settings)
    try:
        request = VerifySystemRequest(
            source=path,
            checks=_checks(checks),
            eps=eps,
            cap=cap,
            sequence=[s.strip() for s in sequence.split(",")] if sequence else None,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc), ctx=ctx) from None

    response = get_verify_system_use_case(settings).execute(request)
    logger.log_verification_complete(response.source, response.passed, response.duration_ms)
    ctx.exit(present(response, fmt, out))
