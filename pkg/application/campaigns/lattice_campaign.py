"""
Lattice Campaign - randomized checks of the control engine

Coherent systems must pass validation, keep C1 ⇒ C2 ⇒ C3 at every (c,S),
satisfy B1, the esssup exchange on random sub-σ-fields and the payoff-system
axioms. Every mutated system must then be caught by validation, by a lattice
failure or by a B1 witness.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor

from domain.entities import FiniteControlSystem
from domain.exceptions import PreconditionViolation

from application.campaigns.campaign_models import CampaignConfig, CampaignReport, Violation
from application.campaigns.random_instances import random_coarsening
from application.campaigns.system_generator import (
    GeneratorLimits,
    generate_coherent_system,
    mutate_system,
    summarize,
)
from application.services.axiom_validator import validate
from application.services.bellman_verifier import BellmanVerifierService
from application.services.lattice_checker import LatticeCheckerService
from application.services.payoff_system_checker import payoff_system_check

logger = logging.getLogger(__name__)

NAME = "lattice"
MUTATION_STREAM = 1


def _limits(config: CampaignConfig) -> GeneratorLimits:
    return GeneratorLimits(max_outcomes=config.max_outcomes, max_horizon=config.max_horizon)


def run_coherent_instance(config: CampaignConfig, index: int) -> CampaignReport:
    rng = config.rng(index)
    report = CampaignReport(NAME, instances=1)
    system = generate_coherent_system(rng, _limits(config))
    instance = summarize(system)

    validation = validate(system)
    report.count("validate")
    if not validation.passed:
        failed = ", ".join(v.name for v in validation.failures())
        report.fail(Violation(index, "validate", instance, failed))
        return report

    verifier = BellmanVerifierService(system)
    lattice = LatticeCheckerService(verifier.system, verifier.calculator)
    for verdict in lattice.check_all():
        report.count("chain")
        if not verdict.chain_consistent:
            report.fail(Violation(index, "chain", instance, f"({verdict.control_id}, {verdict.time_id})"))

    bellman = verifier.verify()
    report.count("B1")
    if not bellman.verdict("B1").passed:
        report.fail(Violation(index, "B1", instance, repr(bellman.verdict("B1").witness)))

    ids, times = verifier.system.control_ids, verifier.system.time_ids
    for _ in range(config.sub_fields):
        cid = ids[int(rng.integers(0, len(ids)))]
        tid = times[int(rng.integers(0, len(times)))]
        sub_field = random_coarsening(rng, verifier.calculator.sigma(cid, tid))
        try:
            holds = verifier.consistency_theorem_check(cid, tid, sub_field)
        except PreconditionViolation as exc:
            logger.debug("Exchange skipped at (%s, %s): %s", cid, tid, exc)
            report.skip("exchange")
            continue
        report.count("exchange")
        if not holds:
            report.fail(Violation(index, "exchange", instance, f"({cid}, {tid}) atoms {sub_field.atoms}"))

    report.count("payoff-system")
    if not payoff_system_check(verifier.system):
        report.fail(Violation(index, "payoff-system", instance))
    return report


def run_mutation_instance(config: CampaignConfig, index: int) -> CampaignReport:
    rng = config.rng(index, stream=MUTATION_STREAM)
    report = CampaignReport(NAME)
    kind, mutated = mutate_system(rng, generate_coherent_system(rng, _limits(config)))
    report.count(f"mutation-{kind}")
    if not _caught(mutated):
        report.fail(Violation(index, "mutation-undetected", summarize(mutated), kind))
    return report


def _caught(system: FiniteControlSystem) -> bool:
    if not validate(system).passed:
        return True
    verifier = BellmanVerifierService(system)
    lattice = LatticeCheckerService(verifier.system, verifier.calculator)
    if not all(v.passed for v in lattice.check_all()):
        return True
    return not verifier.verify().verdict("B1").passed


def run_lattice_campaign(config: CampaignConfig) -> CampaignReport:
    started = time.perf_counter()
    report = CampaignReport(NAME)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        for partial in pool.map(lambda k: run_coherent_instance(config, k), range(config.instances)):
            report.absorb(partial)
        for partial in pool.map(lambda k: run_mutation_instance(config, k), range(config.mutations)):
            report.absorb(partial)
    report.duration_ms = (time.perf_counter() - started) * 1000
    logger.info(
        "Lattice campaign: %d systems, %d mutations, %d violations in %.0f ms",
        report.instances, config.mutations, len(report.violations), report.duration_ms,
    )
    return report
