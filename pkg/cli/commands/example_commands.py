"""
example - the built-in finite examples

bellman example box-picking [--classical] [--emit-system FILE]
bellman example snell       [--campaign N --seed S]

Each example is verified through the same use case as `bellman verify`,
so the report and exit codes are identical to verifying the emitted file.
"""
from typing import Any, List, Optional

import click

from application.campaigns import CampaignConfig, run_snell_campaign
from application.dto.verify_system_request import SystemSnapshot, VerifySystemRequest
from application.examples.box_picking import (
    CLASSICAL_FIRST_STEP_MEAN,
    OPTIMAL_VALUE,
    bellman_process,
    box_picking_optimizer_id,
    build_box_picking,
    build_box_picking_classical,
)
from application.examples.optimal_stopping import coin_example, snell_crosscheck, snell_envelope
from domain.entities import FiniteControlSystem, Section, Verdict, Witness
from domain.value_objects import RandomVariable
from infrastructure.persistence.repositories import digest_bytes
from infrastructure.persistence.system_file_codec import encode_system

from ..dependencies.settings import Settings
from ..dependencies.use_case_factory import command_logger, get_system_repository, get_verify_system_use_case
from ..presenters import render_table
from .campaign_commands import present_campaign
from .options import output_options, seed_option
from .verify_command import present


def _snapshot(system: FiniteControlSystem, source: str) -> SystemSnapshot:
    return SystemSnapshot(system=system, source=source, digest=digest_bytes(encode_system(system).encode("utf-8")))


def process_rows(values: List[RandomVariable]) -> List[List[Any]]:
    return [[t] + [str(v) for v in column] for t, column in enumerate(values)]


@click.group("example")
def example() -> None:
    """Exact finite examples with known answers."""


# ---------------------------------------------------------------------------
# box-picking
# ---------------------------------------------------------------------------

@example.command("box-picking")
@click.option("--classical", is_flag=True, help="Common filtration F instead of each control's own.")
@click.option("--emit-system", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Also write the system as a SystemFile.")
@output_options
@click.pass_context
def box_picking(ctx: click.Context, classical: bool, emit_system: Optional[str], out: Optional[str],
                fmt: str) -> None:
    """Two boxes, eight predictable strategies; v = 7/6 (classical: E W*_1 = 4/3)."""
    settings: Settings = ctx.obj
    system = build_box_picking_classical() if classical else build_box_picking()
    source = "example:box-picking" + (":classical" if classical else "")
    if emit_system:
        get_system_repository(settings).save(system, emit_system)

    response = get_verify_system_use_case(settings).verify_snapshot(
        _snapshot(system, source), VerifySystemRequest(source=source)
    )
    command_logger(__name__, settings).log_verification_complete(source, response.passed, response.duration_ms)

    optimizer = box_picking_optimizer_id()
    process = bellman_process(system, optimizer)
    render_table(
        f"Bellman process along {optimizer}",
        ["t"] + list(system.space.outcomes),
        process_rows(process),
    )
    expected = CLASSICAL_FIRST_STEP_MEAN if classical else OPTIMAL_VALUE
    click.echo(f"expected: v = {OPTIMAL_VALUE}, mean of the time-1 value along c* = {expected}", err=True)
    ctx.exit(present(response, fmt, out))


# ---------------------------------------------------------------------------
# snell
# ---------------------------------------------------------------------------

@example.command("snell")
@click.option("--campaign", "instances", type=click.IntRange(min=0), default=None,
              help="Run N random optimal-stopping instances instead of the coin example.")
@seed_option()
@output_options
@click.pass_context
def snell(ctx: click.Context, instances: Optional[int], seed: int, out: Optional[str], fmt: str) -> None:
    """Optimal stopping: the Bellman value along the never-stopped time is the Snell envelope."""
    settings: Settings = ctx.obj
    if instances is not None:
        config = CampaignConfig.snell(instances=instances, seed=seed)
        config.workers = settings.threads
        ctx.exit(present_campaign(run_snell_campaign(config), seed, fmt, out, settings, "Snell"))

    instance = coin_example()
    source = "example:snell"
    response = get_verify_system_use_case(settings).verify_snapshot(
        _snapshot(instance.system, source), VerifySystemRequest(source=source)
    )
    envelope = snell_envelope(instance.process, instance.measure, instance.filtration)
    checked = instance.horizon + 1
    if snell_crosscheck(instance):
        verdict = Verdict.ok("snell-envelope", Section.ENVELOPE, checked=checked)
    else:
        verdict = Verdict.failed(
            "snell-envelope", Section.ENVELOPE,
            Witness(control_ids=(instance.never_stopped_id,), detail="Bellman value differs from the envelope"),
            checked=checked,
        )
    response.report.add(verdict)

    render_table("Snell envelope", ["t"] + list(instance.system.space.outcomes), process_rows(envelope))
    ctx.exit(present(response, fmt, out))
