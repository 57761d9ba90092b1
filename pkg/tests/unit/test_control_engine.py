"""
Unit Tests - Control Engine
BellmanCalculator, AxiomValidatorService, LatticeCheckerService,
BellmanVerifierService, PayoffSystemCheckerService and class derivation,
on the two-control gamble system from conftest.

Every check is exercised on the passing system and on a variant that breaks
exactly one property, which must show up as a failed verdict with a witness.
"""
from fractions import Fraction

import pytest

from application.services.axiom_validator import AxiomValidatorService, validate
from application.services.bellman_calculator import BellmanCalculator, solve
from application.services.bellman_verifier import (
    FINITE_SPACE_NOTES,
    BellmanVerifierService,
    deterministic_sequence,
    envelope_minimality,
    verify_bellman,
)
from application.services.class_derivation import derive_prefix_classes, with_prefix_classes
from application.services.lattice_checker import LatticeCheckerService, lattice_check
from application.services.payoff_system_checker import (
    AgreementCase,
    PayoffSystemCheckerService,
    payoff_system_check,
)
from domain.entities import ControlRecord, ControlTime, FiniteControlSystem, Section
from domain.exceptions import NotAStoppingTimeError, PreconditionViolation
from domain.value_objects import (
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
    SigmaField,
)
from domain.value_objects.sigma_field import MAX_ENUMERABLE_ATOMS
from tests.conftest import coin_filtration, gamble_classes, make_gamble_system


# ===========================================================================
# Helpers / Factories
# ===========================================================================

def with_classes(**overrides):
    classes = dict(gamble_classes())
    for key, members in overrides.items():
        cid, tid = key.rsplit("_", 1)
        classes[(cid, tid)] = frozenset(members)
    return make_gamble_system(classes)


def with_peeking_time(system: FiniteControlSystem) -> FiniteControlSystem:
    """Adds a control time that stops at 0 on tails only, which G_0 cannot see."""
    peek = ControlTime.uniform("peek", system.control_ids, RandomTime.from_values([0, 1]))
    classes = dict(system.classes)
    for cid in system.control_ids:
        classes[(cid, "peek")] = frozenset({cid})
    return FiniteControlSystem(system.space, system.controls, system.control_times + (peek,), classes)


def failed_names(report):
    return [v.name for v in report.failures()]


def make_wide_system(payoffs, shared: bool = False) -> FiniteControlSystem:
    """Equally likely outcomes revealed at time 1; classes are singletons unless shared."""
    n = len(next(iter(payoffs.values())))
    revealed = Filtration((SigmaField.trivial(n), SigmaField.discrete(n)))
    records = [
        ControlRecord(
            id=cid, filtration=revealed, measure=ProbMeasure.uniform(n),
            payoff=RandomVariable.from_values(values),
            path=DiscreteProcess(tuple((0, k) for k in range(n))),
        )
        for cid, values in payoffs.items()
    ]
    ids = list(payoffs)
    times = [ControlTime.uniform(str(t), ids, RandomTime.constant(n, t)) for t in (0, 1)]
    everyone = frozenset(ids)
    classes = {(cid, str(t)): everyone if shared else frozenset({cid}) for cid in ids for t in (0, 1)}
    return FiniteControlSystem.build(SampleSpace.from_labels([f"w{k}" for k in range(n)]), records, times, classes)


def gluing_closed_by_enumeration(system: FiniteControlSystem, control_id: str, time_id: str) -> bool:
    calc = BellmanCalculator(system)
    mu, field = calc.measure(control_id), calc.sigma(control_id, time_id)
    payoffs = [system.control(d).payoff for d in system.class_members(control_id, time_id)]
    for event in field.events():
        if not event or len(event) == field.n:
            continue
        for i, x in enumerate(payoffs):
            for j, y in enumerate(payoffs):
                if i != j and not any(z.dominates(mu, x.glue(event, y)) for z in payoffs):
                    return False
    return True


# ===========================================================================
# BellmanCalculator
# ===========================================================================

class TestBellmanCalculator:
    def test_solve_finds_risky(self, gamble_system):
        assert BellmanCalculator(gamble_system).solve() == (Fraction(1), ("risky",))

    def test_solve_reports_ties_in_id_order(self):
        system = make_gamble_system()
        even = ControlRecord("even", coin_filtration(), ProbMeasure.uniform(2), RandomVariable.from_values([1, 1]))
        ids = ["safe", "risky", "even"]
        times = [ControlTime.uniform(str(t), ids, RandomTime.constant(2, t)) for t in (0, 1)]
        tied = FiniteControlSystem.build(system.space, system.controls + (even,), times, {})
        assert solve(tied) == (Fraction(1), ("even", "risky"))

    def test_empty_control_set_gives_minus_infinity(self):
        system = FiniteControlSystem.build(SampleSpace.of_size(2), [], [], {})
        assert BellmanCalculator(system).solve() == (None, ())

    def test_conditional_payoff_at_zero_is_mean(self, gamble_system):
        calc = BellmanCalculator(gamble_system)
        assert calc.conditional_payoff("risky", "0").values == (1, 1)
        assert calc.conditional_payoff("risky", "1").values == (0, 2)

    def test_bellman_value_is_class_maximum(self, gamble_system):
        calc = BellmanCalculator(gamble_system)
        assert calc.bellman_value("safe", "0").values == (1, 1)
        assert calc.bellman_value("safe", "1").values == (Fraction(1, 2), Fraction(1, 2))

    def test_conditional_optimality(self, gamble_system):
        calc = BellmanCalculator(gamble_system)
        assert calc.conditionally_optimal("risky", "0")
        assert not calc.conditionally_optimal("safe", "0")
        assert calc.conditionally_optimal("safe", "1")

    def test_sigma_rejects_non_stopping_time(self, gamble_system):
        calc = BellmanCalculator(with_peeking_time(gamble_system))
        with pytest.raises(NotAStoppingTimeError):
            calc.sigma("safe", "peek")

    def test_empty_class_rejected(self):
        system = with_classes(safe_1=[])
        with pytest.raises(PreconditionViolation):
            BellmanCalculator(system).bellman_value("safe", "1")


# ===========================================================================
# AxiomValidatorService
# ===========================================================================

class TestAxiomValidator:
    def test_gamble_system_passes_everything(self, gamble_system):
        report = validate(gamble_system)
        assert report.passed
        names = [v.name for v in report.verdicts]
        assert names == [
            "structure", "initial-info", "axiom-1", "axiom-2", "axiom-3",
            "axiom-4", "axiom-5", "axiom-6", "axiom-7", "stability",
        ]

    def test_missing_class_fails_structure_only(self):
        classes = gamble_classes()
        del classes[("risky", "1")]
        report = AxiomValidatorService().validate(make_gamble_system(classes))
        assert failed_names(report) == ["structure"]
        assert len(report.verdicts) == 1
        assert report.verdict("structure").witness.control_ids == ("risky",)

    def test_unknown_member_fails_structure(self):
        report = validate(with_classes(safe_1=["safe", "ghost"]))
        assert failed_names(report) == ["structure"]

    def test_control_outside_its_class(self):
        report = validate(with_classes(safe_1=["risky"]))
        assert "axiom-2" in failed_names(report)

    def test_overlapping_classes(self):
        report = validate(with_classes(safe_1=["safe", "risky"]))
        assert "axiom-6" in failed_names(report)

    def test_infinite_time_needs_singletons(self, gamble_system):
        report = validate(gamble_system.with_class("safe", "inf", ["safe", "risky"]))
        assert "axiom-7" in failed_names(report)
        witness = report.verdict("axiom-7").witness
        assert witness.time_ids == ("inf",)

    def test_non_stopping_time_skips_stability(self, gamble_system):
        report = validate(with_peeking_time(gamble_system))
        assert "axiom-1" in failed_names(report)
        assert "stability" not in [v.name for v in report.verdicts]
        assert any("stability check skipped" in note for note in report.notes)

    def test_stability_needs_equal_information(self):
        blind = Filtration.constant(SigmaField.trivial(2), 1)
        classes = gamble_classes()
        classes[("safe", "1")] = classes[("risky", "1")] = frozenset({"safe", "risky"})
        report = validate(make_gamble_system(classes, safe_filtration=blind))
        assert failed_names(report) == ["stability"]
        assert set(report.verdict("stability").witness.control_ids) == {"safe", "risky"}

    def test_initial_information_must_be_trivial(self):
        seeing = Filtration.constant(SigmaField.discrete(2), 1)
        report = validate(make_gamble_system(safe_filtration=seeing))
        assert "initial-info" in failed_names(report)


# ===========================================================================
# LatticeCheckerService
# ===========================================================================

class TestLatticeChecker:
    def test_all_points_pass_on_gamble(self, gamble_system):
        verdicts = LatticeCheckerService(gamble_system).check_all()
        assert [(v.control_id, v.time_id) for v in verdicts][:3] == [
            ("risky", "0"), ("risky", "1"), ("risky", "inf"),
        ]
        assert all(v.passed and v.chain_consistent for v in verdicts)

    def test_parameters_are_recorded(self, gamble_system):
        verdict = lattice_check(gamble_system, "safe", "0", Fraction(1, 10), Fraction(3))
        assert verdict.eps == Fraction(1, 10)
        assert verdict.cap == Fraction(3)

    def test_c1_fails_when_laws_differ(self):
        system = make_gamble_system()
        skewed = ControlRecord(
            "risky", coin_filtration(), ProbMeasure.from_values(["1/4", "3/4"]),
            RandomVariable.from_values([0, 2]), system.control("risky").path,
        )
        changed = FiniteControlSystem(system.space, (system.controls[0], skewed), system.control_times, system.classes)
        verdict = LatticeCheckerService(changed).check("safe", "0")
        assert not verdict.c1.passed
        assert verdict.c1.witness.detail == "P^d != P^c"
        assert verdict.chain_consistent

    def test_chain_consistent_on_box_picking(self, box_picking, box_picking_classical):
        for system in (box_picking, box_picking_classical):
            verdicts = LatticeCheckerService(system).check_all()
            assert len(verdicts) == 8 * 4
            assert all(v.chain_consistent for v in verdicts)


    def test_singleton_classes_beyond_enumeration_limit(self):
        system = make_wide_system({"c": list(range(MAX_ENUMERABLE_ATOMS + 1))})
        verdict = lattice_check(system, "c", "1")
        assert verdict.passed
        assert verdict.c1.checked == 0

    def test_dominated_glue_beyond_enumeration_limit(self):
        n = MAX_ENUMERABLE_ATOMS + 4
        system = make_wide_system({"high": [1] * n, "low": [0] * n}, shared=True)
        verdict = lattice_check(system, "low", "1")
        assert verdict.passed and verdict.chain_consistent

    def test_crossing_payoffs_beyond_enumeration_limit(self):
        n = MAX_ENUMERABLE_ATOMS + 4
        a = [1, 0] + [0] * (n - 2)
        b = [0, 1] + [0] * (n - 2)
        system = make_wide_system({"a": a, "b": b}, shared=True)
        verdict = lattice_check(system, "a", "1")
        assert not verdict.c1.passed
        event = set(verdict.c1.witness.event)
        assert event and len(event) < n
        glued = [
            RandomVariable.from_values(a).glue(event, RandomVariable.from_values(b)),
            RandomVariable.from_values(b).glue(event, RandomVariable.from_values(a)),
        ]
        mu = ProbMeasure.uniform(n)
        assert any(
            not any(RandomVariable.from_values(z).dominates(mu, g) for z in (a, b)) for g in glued
        )

    @pytest.mark.parametrize("payoffs", [
        ([3, 3, 3, 3, 3], [0, 1, 2, 3, 4], [4, 3, 2, 1, 0]),
        ([4, 4, 4, 4, 4], [0, 1, 2, 3, 4], [4, 3, 2, 1, 0]),
        ([1, 0, 1, 0, 1], [0, 1, 0, 1, 0], [1, 1, 1, 1, 1]),
        ([1, 0, 1, 0, 1], [0, 1, 0, 1, 0], [1, 1, 1, 1, 0]),
        ([2, 0, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 2, 0, 0]),
    ])
    def test_gluing_search_matches_event_enumeration(self, payoffs):
        system = make_wide_system(dict(zip("xyz", payoffs)), shared=True)
        verdict = lattice_check(system, "x", "1")
        assert verdict.c1.passed == gluing_closed_by_enumeration(system, "x", "1")


# ===========================================================================
# BellmanVerifierService
# ===========================================================================

class TestBellmanVerifier:
    def test_gamble_passes_principle(self, gamble_system):
        report = verify_bellman(gamble_system)
        assert report.passed
        assert report.value == Fraction(1)
        assert report.optimal_ids == ("risky",)
        names = [v.name for v in report.verdicts]
        assert names == ["B1-measurable", "B1-agreement", "B1", "V>=J", "B2", "B3", "B4", "B5"]
        for note in FINITE_SPACE_NOTES:
            assert note in report.notes

    def test_deterministic_sequence_orders_times(self, gamble_system):
        assert deterministic_sequence(gamble_system) == ["0", "1", "inf"]

    def test_sequence_not_starting_at_zero(self, gamble_system):
        report = BellmanVerifierService(gamble_system).verify(["1", "inf"])
        assert report.verdict("B5").note == "not applicable"

    def test_empty_control_set(self):
        system = FiniteControlSystem.build(SampleSpace.of_size(3), [], [], {})
        report = verify_bellman(system)
        assert report.passed
        assert report.value is None
        assert report.value_display == "-inf"

    def test_classical_box_picking_breaks_supermartingale(self, box_picking_classical):
        report = verify_bellman(box_picking_classical)
        assert not report.verdict("B1").passed
        witness = report.verdict("B1").witness
        assert witness.lhs > witness.rhs

    def test_envelope_of_value_system(self, gamble_system):
        service = BellmanVerifierService(gamble_system)
        result = service.envelope_minimality(service.value_system())
        assert result.passed

    def test_envelope_rejects_candidate_below_value(self, gamble_system):
        service = BellmanVerifierService(gamble_system)
        w = dict(service.value_system())
        w[("risky", "1")] = RandomVariable.from_values([0, 1])
        result = envelope_minimality(gamble_system, w)
        assert not result.dominates
        assert not result.passed

    def test_large_constant_candidate_dominates(self, gamble_system):
        service = BellmanVerifierService(gamble_system)
        w = {key: RandomVariable.constant(2, 5) for key in service.value_system()}
        result = service.envelope_minimality(w)
        assert result.candidate_valid
        assert result.dominates

    def test_incomplete_candidate_rejected(self, gamble_system):
        with pytest.raises(PreconditionViolation):
            envelope_minimality(gamble_system, {})

    def test_consistency_theorem(self, gamble_system):
        service = BellmanVerifierService(gamble_system)
        assert service.consistency_theorem_check("safe", "0", SigmaField.trivial(2))

    def test_consistency_theorem_needs_sub_field(self, gamble_system):
        service = BellmanVerifierService(gamble_system)
        with pytest.raises(PreconditionViolation):
            service.consistency_theorem_check("safe", "0", SigmaField.discrete(2))


# ===========================================================================
# PayoffSystemCheckerService
# ===========================================================================

class TestPayoffSystemChecker:
    def test_gamble_is_a_payoff_system(self, gamble_system):
        verdicts = PayoffSystemCheckerService(gamble_system).check()
        assert [v.name for v in verdicts] == ["payoff-measurable", "payoff-consistency"]
        assert all(v.passed and v.section is Section.PAYOFF for v in verdicts)

    def test_agreement_case_for_a_control_with_itself(self, gamble_system):
        case = AgreementCase("risky", "risky", "0", frozenset({0, 1}), ["0", "1", "inf"])
        assert payoff_system_check(gamble_system, [case])

    def test_agreement_requires_equivalence(self, gamble_system):
        case = AgreementCase("safe", "risky", "1", frozenset({0, 1}), ["1", "inf"])
        with pytest.raises(PreconditionViolation) as exc:
            PayoffSystemCheckerService(gamble_system).check([case])
        assert exc.value.rule == "c ~_S d"

    def test_agreement_requires_access_to_infinity(self, gamble_system):
        case = AgreementCase("safe", "risky", "0", frozenset({0, 1}), ["0"])
        with pytest.raises(PreconditionViolation) as exc:
            PayoffSystemCheckerService(gamble_system).check([case])
        assert exc.value.rule == "accesses infinity"


# ===========================================================================
# Class derivation
# ===========================================================================

class TestClassDerivation:
    def test_prefix_classes_of_gamble(self, gamble_system):
        classes = derive_prefix_classes(gamble_system)
        assert classes[("safe", "0")] == frozenset({"safe", "risky"})
        assert classes[("safe", "1")] == frozenset({"safe"})
        assert classes[("risky", "inf")] == frozenset({"risky"})

    def test_with_prefix_classes_replaces_table(self):
        system = make_gamble_system(classes={}, extend=False).with_extremal_times()
        derived = with_prefix_classes(system)
        assert derived.class_members("risky", "0") == ("safe", "risky")
        assert validate(derived).passed

    def test_control_without_any_process(self):
        bare = ControlRecord("bare", coin_filtration(), ProbMeasure.uniform(2), RandomVariable.constant(2, 0))
        system = FiniteControlSystem(SampleSpace.of_size(2), (bare,), (), {})
        with pytest.raises(PreconditionViolation):
            derive_prefix_classes(system)
