"""Shared click parameter types and option groups."""
from fractions import Fraction
from typing import Any, Callable, List, Optional

import click

from ..presenters import FORMATS


class FractionParam(click.ParamType):
    """Exact rational from "1/6", "2" or "0.25"; decimals are read exactly."""

    name = "fraction"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> Fraction:
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not an exact fraction", param, ctx)


class FloatListParam(click.ParamType):
    """Comma-separated floats, e.g. "0.2,0.1,0.05"."""

    name = "floats"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> List[float]:
        if isinstance(value, list):
            return value
        try:
            return [float(item) for item in str(value).split(",") if item.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of numbers", param, ctx)


FRACTION = FractionParam()
FLOATS = FloatListParam()


def output_options(command: Callable) -> Callable:
    """--out and --format for commands that emit a report or table."""
    command = click.option(
        "--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True,
        help="json: ReportDocument; tsv: tab-separated table.",
    )(command)
    return click.option(
        "--out", type=click.Path(dir_okay=False, writable=True), default=None,
        help="Write the report here instead of standard output.",
    )(command)


def seed_option(default: int = 0) -> Callable:
    return click.option(
        "--seed", type=click.IntRange(min=0, max=2**64 - 1), default=default, show_default=True,
        help="Root seed; runs are reproducible for a fixed seed.",
    )
