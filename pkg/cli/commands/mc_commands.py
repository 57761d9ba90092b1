"""
mc - Monte Carlo checks of the continuous-time examples

bellman mc switching    --case a|b [--x --alpha --epsilon --dt --t-max --paths --seed
                                    --strategy threshold|never --boundary --antithetic --tolerance]
bellman mc poisson      [--alpha --t --t-max --paths --seed --tolerance --t-grid 0.1,0.5,1]
bellman mc verify-lemma --case a|b [--alpha --boundary --perturbation]
bellman mc convergence  --case a|b [--eps-grid 0.2,0.1,0.05 ...]

Estimates are judged against the closed forms with max(3 SE, tolerance).
Exit 0 on agreement, 2 on a failed comparison, 1 on an invalid configuration.
"""
from dataclasses import fields
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np

from infrastructure.persistence.report_writer import provenance, result_document
from infrastructure.simulation import (
    ConvergenceTable,
    NeverSwitch,
    PoissonDriftConfig,
    SwitchingConfig,
    SwitchingResult,
    ThresholdStrategy,
    VerificationInput,
    check_verification_conditions,
    poisson_gap_trend,
    simulate_poisson_drift,
    simulate_switching,
    value_convergence_study,
)

from ..dependencies.settings import Settings
from ..dependencies.use_case_factory import command_logger
from ..middleware.error_handler import EXIT_CHECK_FAILED, EXIT_OK
from ..presenters import emit, render_table, status_line
from .options import FLOATS, output_options, seed_option

CASES = ("a", "b")
ESTIMATE_COLUMNS = ("quantity", "mean", "std_error", "n", "target", "band", "passed")


def _scalars(config: Any, skip: tuple = ()) -> Dict[str, Any]:
    """JSON-ready scalar fields of a config dataclass."""
    out = {}
    for f in fields(config):
        value = getattr(config, f.name)
        if f.name in skip or callable(value):
            continue
        out[f.name] = list(map(float, value)) if isinstance(value, (tuple, list, np.ndarray)) else value
    return out


def _exit(ctx: click.Context, passed: bool) -> None:
    ctx.exit(EXIT_OK if passed else EXIT_CHECK_FAILED)


def switching_config(case: str, x: float, alpha: Optional[float], epsilon: Optional[float],
                     dt: Optional[float], t_max: Optional[float], paths: int, seed: int,
                     boundary: float, tolerance: Optional[float], antithetic: bool) -> SwitchingConfig:
    overrides: Dict[str, Any] = {"n_paths": paths, "seed": seed, "boundary": boundary, "antithetic": antithetic}
    if dt is not None:
        overrides["dt"] = dt
    elif epsilon is not None:
        overrides["dt"] = epsilon / 10
    if t_max is not None:
        overrides["t_max"] = t_max
    if tolerance is not None:
        overrides["tolerance"] = tolerance
    if case == "a":
        if epsilon is not None:
            overrides["epsilon"] = epsilon
        return SwitchingConfig.case_a(x=x, alpha=1.0 if alpha is None else alpha, **overrides)
    return SwitchingConfig.case_b(
        x=x, alpha=0.5 if alpha is None else alpha, epsilon=0.05 if epsilon is None else epsilon, **overrides
    )


def switching_options(command: Callable) -> Callable:
    """Model flags shared by `mc switching` and `mc convergence`."""
    for decorator in reversed([
        click.option("--case", type=click.Choice(CASES), default="a", show_default=True,
                     help="a: K = −2z/α; b: K from ψ with L ≡ 0."),
        click.option("--x", type=float, default=0.0, show_default=True, help="Initial offset Z_0."),
        click.option("--alpha", type=float, default=None, help="Discount rate (a: 1, b: 0.5)."),
        click.option("--t-max", type=float, default=None, help="Truncation horizon."),
        click.option("--paths", type=click.IntRange(min=1), default=100_000, show_default=True),
        seed_option(),
        click.option("--boundary", type=float, default=0.0, show_default=True,
                     help="Threshold strategy jumps when Z ≤ −boundary."),
        click.option("--antithetic", is_flag=True, help="Antithetic normal draws."),
        click.option("--tolerance", type=float, default=None, help="Absolute tolerance (a: 0.02, b: 0.05)."),
    ]):
        command = decorator(command)
    return command


@click.group("mc")
def mc() -> None:
    """Monte Carlo simulations against closed-form targets."""


# ---------------------------------------------------------------------------
# switching
# ---------------------------------------------------------------------------

def switching_rows(result: SwitchingResult) -> List[List[Any]]:
    e = result.estimate
    band = e.band(result.tolerance)
    return [[f"E J({result.strategy})", e.mean, e.std_error, e.n, result.target, band, result.passed]]


@mc.command("switching")
@switching_options
@click.option("--epsilon", type=float, default=None, help="Minimum gap between jumps (a: 0.2, b: 0.05).")
@click.option("--dt", type=float, default=None, help="Euler step; at most epsilon/10.")
@click.option("--strategy", type=click.Choice(("threshold", "never")), default="threshold", show_default=True)
@output_options
@click.pass_context
def switching(ctx: click.Context, case: str, x: float, alpha: Optional[float], t_max: Optional[float],
              paths: int, seed: int, boundary: float, antithetic: bool, tolerance: Optional[float],
              epsilon: Optional[float], dt: Optional[float], strategy: str, out: Optional[str], fmt: str) -> None:
    """Expected payoff of a switching strategy in the two-observer game."""
    settings: Settings = ctx.obj
    cfg = switching_config(case, x, alpha, epsilon, dt, t_max, paths, seed, boundary, tolerance, antithetic)
    chosen = NeverSwitch() if strategy == "never" else ThresholdStrategy(cfg.epsilon, cfg.boundary)
    result = simulate_switching(cfg, chosen, threads=settings.threads, logger=command_logger(__name__, settings))

    passed = result.passed is not False
    body = {
        "config": _scalars(cfg),
        "strategy": result.strategy,
        "estimate": result.estimate.to_dict(result.target, result.tolerance),
        "mean_jumps": result.mean_jumps,
        "tail_bound": result.tail_bound,
    }
    rows = switching_rows(result)
    emit(result_document("mc-switching", provenance(seed=seed, timestamped=True), passed, body),
         fmt, out, ESTIMATE_COLUMNS, rows)
    render_table(f"Switching game, case {case}, ε = {cfg.epsilon:g}", ESTIMATE_COLUMNS, rows)
    status_line(passed, f"mean jumps {result.mean_jumps:.3f}, tail bound {result.tail_bound:.2e}")
    _exit(ctx, passed)


# ---------------------------------------------------------------------------
# poisson
# ---------------------------------------------------------------------------

TREND_COLUMNS = ("t", "mean", "std_error", "closed_form", "within_3se")


@mc.command("poisson")
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--t", "t", type=float, default=None, help="Probe time of the deviating control (default ln 2).")
@click.option("--t-max", type=float, default=40.0, show_default=True)
@click.option("--paths", type=click.IntRange(min=1), default=200_000, show_default=True)
@seed_option()
@click.option("--tolerance", type=float, default=0.005, show_default=True)
@click.option("--t-grid", type=FLOATS, default=None,
              help="Comma-separated deviation times; reports the gap trend instead.")
@output_options
@click.pass_context
def poisson(ctx: click.Context, alpha: float, t: Optional[float], t_max: float, paths: int, seed: int,
            tolerance: float, t_grid: Optional[List[float]], out: Optional[str], fmt: str) -> None:
    """Poisson-drift example: the Bellman process is not mean non-decreasing."""
    settings: Settings = ctx.obj
    logger = command_logger(__name__, settings)
    params: Dict[str, Any] = dict(alpha=alpha, t_max=t_max, n_paths=paths, seed=seed, tolerance=tolerance)
    if t is not None:
        params["t"] = t
    cfg = PoissonDriftConfig(**params)
    origin = provenance(seed=seed, timestamped=True)

    if t_grid:
        trend = poisson_gap_trend(cfg, t_grid, threads=settings.threads, logger=logger)
        rows = [[r.t, r.estimate.mean, r.estimate.std_error, r.closed_form, r.within] for r in trend]
        passed = all(r.within for r in trend)
        body = {"config": _scalars(cfg), "limit": -1.0 / (3.0 * (1.0 + alpha)),
                "trend": [dict(zip(TREND_COLUMNS, row)) for row in rows]}
        emit(result_document("mc-poisson-trend", origin, passed, body), fmt, out, TREND_COLUMNS, rows)
        render_table(f"Gap trend, α = {alpha:g}", TREND_COLUMNS, rows)
        status_line(passed, f"gap → {body['limit']:.6f} as t ↓ 0")
        _exit(ctx, passed)

    report = simulate_poisson_drift(cfg, threads=settings.threads, logger=logger)
    rows = [
        [name, e.mean, e.std_error, e.n, target, e.band(tolerance), e.agrees_with(target, tolerance)]
        for name, e, target in report.rows()
    ]
    body = {
        "config": _scalars(cfg),
        "estimates": {name: e.to_dict(target, tolerance) for name, e, target in report.rows()},
        "bound_below_value": report.bound_below_value,
        "tail_bound": report.tail_bound,
    }
    emit(result_document("mc-poisson", origin, report.passed, body), fmt, out, ESTIMATE_COLUMNS, rows)
    render_table(f"Poisson drift, α = {alpha:g}, t = {cfg.t:g}", ESTIMATE_COLUMNS, rows)
    status_line(report.passed, f"bound {report.bound_target:.6f} < v = {report.tracker_target:.6f}: "
                               f"{report.bound_below_value}")
    _exit(ctx, report.passed)


# ---------------------------------------------------------------------------
# verify-lemma
# ---------------------------------------------------------------------------

CONDITION_COLUMNS = ("condition", "kind", "points", "max_residual", "max_abs", "strict_points", "passed")


@mc.command("verify-lemma")
@click.option("--case", type=click.Choice(CASES), default="b", show_default=True)
@click.option("--alpha", type=float, default=None, help="Discount rate (a: 1, b: 0.5).")
@click.option("--boundary", type=float, default=0.0, show_default=True, help="l of the equality regions.")
@click.option("--perturbation", type=float, default=0.0, show_default=True,
              help="Add perturbation·z² to the candidate; a nonzero value must fail.")
@output_options
@click.pass_context
def verify_lemma(ctx: click.Context, case: str, alpha: Optional[float], boundary: float, perturbation: float,
                 out: Optional[str], fmt: str) -> None:
    """Grid check of the verification conditions for the closed-form candidate."""
    settings: Settings = ctx.obj
    if case == "a":
        vin = VerificationInput.case_a(alpha=1.0 if alpha is None else alpha, boundary=boundary,
                                       perturbation=perturbation)
    else:
        vin = VerificationInput.case_b(alpha=0.5 if alpha is None else alpha, boundary=boundary,
                                       perturbation=perturbation)
    report = check_verification_conditions(vin, logger=command_logger(__name__, settings))
    rows = [
        [c.name, c.kind, c.points, c.max_residual, c.max_abs, c.strict_points, c.passed]
        for c in report.conditions
    ]
    body = dict(report.to_dict(), config=_scalars(vin, skip=("table", "h", "custom_cost")))
    emit(result_document("mc-verify-lemma", provenance(timestamped=True), report.passed, body),
         fmt, out, CONDITION_COLUMNS, rows)
    render_table(f"Verification conditions, case {case}", CONDITION_COLUMNS, rows)
    worst = report.worst_violations()
    if worst:
        render_table("Worst residuals", ("condition", "z", "t", "residual"),
                     [[name, r.z, r.t, r.value] for name, r in worst[:10]])
    status_line(report.passed, f"{sum(c.points for c in report.conditions)} grid points")
    _exit(ctx, report.passed)


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------

CONVERGENCE_COLUMNS = ("epsilon", "dt", "mean", "std_error", "mean_jumps")


def convergence_body(cfg: SwitchingConfig, table: ConvergenceTable) -> Dict[str, Any]:
    return {
        "config": _scalars(cfg),
        "rows": [dict(zip(CONVERGENCE_COLUMNS, (r.epsilon, r.dt, r.mean, r.std_error, r.mean_jumps)))
                 for r in table.rows],
        "target": table.target,
        "extrapolated": table.extrapolated,
        "extrapolated_std_error": table.extrapolated_se,
        "nondecreasing": table.nondecreasing,
        "below_value": table.below_value,
        "finest_within": table.finest_within,
        "extrapolation_within": table.extrapolation_within,
    }


@mc.command("convergence")
@switching_options
@click.option("--eps-grid", type=FLOATS, default="0.2,0.1,0.05", show_default=True,
              help="Strictly decreasing ε values; dt = ε/10.")
@output_options
@click.pass_context
def convergence(ctx: click.Context, case: str, x: float, alpha: Optional[float], t_max: Optional[float],
                paths: int, seed: int, boundary: float, antithetic: bool, tolerance: Optional[float],
                eps_grid: List[float], out: Optional[str], fmt: str) -> None:
    """E J(c^ε) along a shrinking ε grid, extrapolated to ε → 0."""
    settings: Settings = ctx.obj
    if not eps_grid:
        raise click.UsageError("--eps-grid must name at least one ε", ctx=ctx)
    cfg = switching_config(case, x, alpha, eps_grid[0], None, t_max, paths, seed, boundary, tolerance, antithetic)
    table = value_convergence_study(cfg, eps_grid, threads=settings.threads,
                                    logger=command_logger(__name__, settings))
    rows = [[r.epsilon, r.dt, r.mean, r.std_error, r.mean_jumps] for r in table.rows]
    emit(result_document("mc-convergence", provenance(seed=seed, timestamped=True), table.passed,
                         convergence_body(cfg, table)),
         fmt, out, CONVERGENCE_COLUMNS, rows)
    render_table(f"Convergence in ε, case {case}", CONVERGENCE_COLUMNS, rows)
    status_line(table.passed, f"extrapolated {table.extrapolated:.4f} ± {table.extrapolated_se:.4f}"
                              f" vs V = {table.target}")
    _exit(ctx, table.passed)
