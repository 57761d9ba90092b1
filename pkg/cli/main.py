"""
bellman - command-line entry point

Exact verification of Bellman's principle on finite control systems,
randomized campaigns over the process algebra, and Monte Carlo checks of
the continuous-time examples.

Exit codes: 0 all checks pass, 1 usage or configuration error,
2 a mathematical check failed.
"""
import logging
import sys
from typing import Optional

import click

from infrastructure.persistence.report_writer import TOOL_NAME, TOOL_VERSION

from .commands.campaign_commands import galmarino, lattice
from .commands.example_commands import example
from .commands.mc_commands import mc
from .commands.verify_command import verify
from .dependencies.settings import get_settings
from .middleware.error_handler import ErrorHandlingGroup

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@click.group(name=TOOL_NAME, cls=ErrorHandlingGroup)
@click.version_option(TOOL_VERSION, prog_name=TOOL_NAME)
@click.option("--threads", type=click.IntRange(min=1), default=None,
              help="Worker count (overrides BELLMAN_THREADS).")
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None,
              help="JSON log level on stderr (overrides BELLMAN_LOG_LEVEL).")
@click.pass_context
def cli(ctx: click.Context, threads: Optional[int], log_level: Optional[str]) -> None:
    """Verify Bellman's principle and the process-algebra identities."""
    settings = get_settings().override(threads=threads, log_level=log_level)
    # Application services log through stdlib loggers
    logging.basicConfig(
        level=settings.level,
        stream=sys.stderr,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )
    ctx.obj = settings


cli.add_command(verify)
cli.add_command(galmarino)
cli.add_command(lattice)
cli.add_command(mc)
cli.add_command(example)


if __name__ == "__main__":
    cli()
