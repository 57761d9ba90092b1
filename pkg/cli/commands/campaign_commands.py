"""
galmarino / lattice - randomized campaigns

bellman galmarino --campaign N --max-outcomes K --max-horizon H --seed S [--allow-nonstopping]
bellman lattice   --campaign N --mutations M --seed S

Exit 0 when no instance violates a checked identity, 2 otherwise; the
report then carries every counterexample instance.
"""
from typing import Any, List, Optional

import click

from application.campaigns import (
    CampaignConfig,
    CampaignReport,
    run_galmarino_campaign,
    run_lattice_campaign,
)
from infrastructure.persistence.report_writer import provenance, result_document

from ..dependencies.settings import Settings
from ..dependencies.use_case_factory import command_logger
from ..middleware.error_handler import EXIT_CHECK_FAILED, EXIT_OK
from ..presenters import emit, render_table, status_line
from .options import output_options, seed_option

CAMPAIGN_COLUMNS = ("check", "runs", "skipped")
VIOLATION_COLUMNS = ("instance", "check", "detail")
SHOWN_VIOLATIONS = 10


def campaign_rows(report: CampaignReport) -> List[List[Any]]:
    names = sorted(set(report.checks) | set(report.skipped))
    return [[name, report.checks.get(name, 0), report.skipped.get(name, 0)] for name in names]


def present_campaign(report: CampaignReport, seed: int, fmt: str, out: Optional[str],
                     settings: Settings, name: str) -> int:
    command_logger(__name__, settings).log_campaign_complete(
        report.name, report.instances, len(report.violations), report.duration_ms
    )
    emit(
        result_document(report.name, provenance(seed=seed), report.passed, report.to_dict()),
        fmt, out, CAMPAIGN_COLUMNS, campaign_rows(report),
    )
    render_table(f"{name} campaign, seed {seed}", CAMPAIGN_COLUMNS, campaign_rows(report))
    if report.violations:
        render_table(
            f"Violations ({len(report.violations)})",
            VIOLATION_COLUMNS,
            [[v.index, v.check, v.detail] for v in report.violations[:SHOWN_VIOLATIONS]],
        )
    status_line(report.passed, f"{report.instances} instances, {len(report.violations)} violations")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


@click.command("galmarino")
@click.option("--campaign", "instances", type=click.IntRange(min=0), default=100, show_default=True,
              help="Number of randomized instances.")
@click.option("--max-outcomes", type=click.IntRange(1, 12), default=8, show_default=True)
@click.option("--max-horizon", type=click.IntRange(0, 8), default=5, show_default=True)
@seed_option()
@click.option("--allow-nonstopping", is_flag=True,
              help="Draw arbitrary random times; violations are then expected.")
@output_options
@click.pass_context
def galmarino(ctx: click.Context, instances: int, max_outcomes: int, max_horizon: int, seed: int,
              allow_nonstopping: bool, out: Optional[str], fmt: str) -> None:
    """Stopped-process σ-fields, Galmarino's test and the completion variants on random instances."""
    settings: Settings = ctx.obj
    config = CampaignConfig(
        instances=instances,
        max_outcomes=max_outcomes,
        max_horizon=max_horizon,
        seed=seed,
        allow_nonstopping=allow_nonstopping,
        workers=settings.threads,
    )
    report = run_galmarino_campaign(config)
    ctx.exit(present_campaign(report, seed, fmt, out, settings, "Galmarino"))


@click.command("lattice")
@click.option("--campaign", "instances", type=click.IntRange(min=0), default=50, show_default=True,
              help="Number of coherent random systems.")
@click.option("--mutations", type=click.IntRange(min=0), default=20, show_default=True,
              help="Mutated systems that must be caught.")
@click.option("--max-outcomes", type=click.IntRange(1, 12), default=6, show_default=True)
@click.option("--max-horizon", type=click.IntRange(0, 8), default=3, show_default=True)
@seed_option()
@output_options
@click.pass_context
def lattice(ctx: click.Context, instances: int, mutations: int, max_outcomes: int, max_horizon: int,
            seed: int, out: Optional[str], fmt: str) -> None:
    """Lattice chain, B1, esssup exchange and payoff axioms on random control systems."""
    settings: Settings = ctx.obj
    config = CampaignConfig(
        instances=instances,
        max_outcomes=max_outcomes,
        max_horizon=max_horizon,
        seed=seed,
        mutations=mutations,
        workers=settings.threads,
    )
    report = run_lattice_campaign(config)
    ctx.exit(present_campaign(report, seed, fmt, out, settings, "Lattice"))
