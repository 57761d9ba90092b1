"""
Snell Campaign - optimal stopping against backward induction

Random rational processes with X_0 constant on their natural filtration;
the Bellman value along the never-stopped control must equal the Snell
envelope at every time, and v must equal the envelope at time 0.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from domain.value_objects import DiscreteProcess

from application.campaigns.campaign_models import CampaignConfig, CampaignReport, Violation
from application.campaigns.random_instances import describe, random_measure
from application.examples.optimal_stopping import build_optimal_stopping, snell_crosscheck, snell_envelope
from application.services.bellman_calculator import BellmanCalculator

logger = logging.getLogger(__name__)

NAME = "snell"


def _random_rational_process(rng: np.random.Generator, n: int, horizon: int) -> DiscreteProcess:
    start = Fraction(int(rng.integers(0, 5)), 2)
    rows = []
    for _ in range(n):
        tail = [Fraction(int(v), 2) for v in rng.integers(0, 7, size=horizon)]
        rows.append(tuple([start] + tail))
    return DiscreteProcess(tuple(rows))


def run_snell_instance(config: CampaignConfig, index: int) -> CampaignReport:
    rng = config.rng(index)
    report = CampaignReport(NAME, instances=1)
    n = int(rng.integers(1, config.max_outcomes + 1))
    horizon = int(rng.integers(0, config.max_horizon + 1))
    x = _random_rational_process(rng, n, horizon)
    p = random_measure(rng, n)
    instance = describe(x=[[str(v) for v in row] for row in x.rows], weights=p)

    stopping = build_optimal_stopping(x, p)
    report.count("snell")
    if not snell_crosscheck(stopping):
        report.fail(Violation(index, "snell", instance))

    value, _ = BellmanCalculator(stopping.system).solve()
    expected = snell_envelope(x, p)[0][0]
    report.count("value")
    if value != expected:
        report.fail(Violation(index, "value", instance, f"v = {value}, envelope = {expected}"))
    return report


def run_snell_campaign(config: CampaignConfig) -> CampaignReport:
    started = time.perf_counter()
    report = CampaignReport(NAME)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        for partial in pool.map(lambda k: run_snell_instance(config, k), range(config.instances)):
            report.absorb(partial)
    report.duration_ms = (time.perf_counter() - started) * 1000
    logger.info(
        "Snell campaign: %d instances, %d violations in %.0f ms",
        report.instances, len(report.violations), report.duration_ms,
    )
    return report
