"""
Presenters - CLI Layer

Output side of every command: validated ReportDocuments as JSON, estimate
tables as tab-separated text (csv excel-tab dialect), and human-readable
rich tables. Human output always goes to stderr; stdout (or --out) carries
exactly one machine-readable artifact.
"""
import csv
import io
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from rich.console import Console
from rich.table import Table

from infrastructure.persistence.report_writer import write_document

from .schemas.report_schemas import validate_document

FORMATS = ("json", "tsv")
Row = Sequence[Any]


def console() -> Console:
    return Console(stderr=True, highlight=False)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "pass" if value else "FAIL"
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return f"{value:.6g}"
    return str(value)


def render_table(title: str, columns: Sequence[str], rows: Sequence[Row]) -> None:
    table = Table(title=title, title_justify="left")
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(_cell(v) for v in row))
    console().print(table)


def tsv_text(columns: Sequence[str], rows: Sequence[Row]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, dialect="excel-tab", lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8")


def emit(
    document: Dict[str, Any],
    fmt: str = "json",
    out: Optional[str] = None,
    columns: Sequence[str] = (),
    rows: Sequence[Row] = (),
) -> None:
    """Validate the document; write it (json) or the table rows (tsv)."""
    validate_document(document)
    if fmt == "tsv":
        _write(tsv_text(columns, rows), out)
    else:
        write_document(document, out)


def status_line(passed: bool, summary: str) -> None:
    style = "green" if passed else "bold red"
    console().print(f"[{style}]{'PASS' if passed else 'FAIL'}[/{style}] {summary}")
