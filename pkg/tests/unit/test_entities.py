"""
Unit Tests - Domain Entities
Tests for FiniteControlSystem, ControlRecord, ControlTime and BellmanReport.

  1 happy path per entity
  sad/error paths: structural defects raise, mathematical ones do not
  boundary cases: empty control sets, the extremal control times
"""
from fractions import Fraction

import pytest

from domain.entities import (
    INFINITY_TIME_ID,
    ZERO_TIME_ID,
    BellmanReport,
    ControlRecord,
    ControlTime,
    FiniteControlSystem,
    LatticeVerdict,
    Section,
    Verdict,
    Witness,
)
from domain.exceptions import (
    DimensionMismatchError,
    DuplicateEntityError,
    EntityNotFoundError,
    ValidationError,
)
from domain.value_objects import (
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
    SigmaField,
)
from tests.conftest import coin_filtration, make_gamble_system


# ===========================================================================
# Helpers / Factories
# ===========================================================================

def make_record(cid="c", n=2, payoff=None) -> ControlRecord:
    return ControlRecord(
        id=cid,
        filtration=Filtration((SigmaField.trivial(n), SigmaField.discrete(n))),
        measure=ProbMeasure.uniform(n),
        payoff=payoff or RandomVariable.constant(n, 1),
    )


def failing(name="B1") -> Verdict:
    return Verdict.failed(name, Section.BELLMAN, Witness(("c",), ("0", "1"), outcome=0, detail="x"))


# ===========================================================================
# ControlRecord / ControlTime
# ===========================================================================

class TestControlRecord:
    def test_creation_happy_path(self):
        record = make_record()
        assert record.horizon == 1

    def test_empty_id_rejected(self):
        with pytest.raises(ValidationError):
            make_record(cid=" ")

    def test_payoff_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            make_record(payoff=RandomVariable.constant(3, 0))

    def test_path_horizon_must_match(self):
        with pytest.raises(ValidationError):
            ControlRecord(
                "c", coin_filtration(), ProbMeasure.uniform(2), RandomVariable.constant(2, 0),
                path=DiscreteProcess(((0, 0, 0), (0, 0, 0))),
            )


class TestControlTime:
    def test_uniform_and_lookup(self):
        s = RandomTime.constant(2, 1)
        ctime = ControlTime.uniform("1", ["a", "b"], s)
        assert ctime.of("b") == s
        assert ctime.is_identically(1)
        assert not ctime.is_identically(0)

    def test_unknown_control(self):
        with pytest.raises(EntityNotFoundError):
            ControlTime.uniform("1", ["a"], RandomTime.constant(2, 1)).of("z")

    def test_control_listed_twice(self):
        s = RandomTime.constant(2, 1)
        with pytest.raises(ValidationError):
            ControlTime("1", (("a", s), ("a", s)))


# ===========================================================================
# FiniteControlSystem
# ===========================================================================

class TestFiniteControlSystem:
    def test_build_adds_infinity_time(self, gamble_system):
        assert gamble_system.time_ids == ("0", "1", INFINITY_TIME_ID)
        assert gamble_system.class_of("safe", INFINITY_TIME_ID) == frozenset({"safe"})

    def test_extremal_times_added_when_missing(self):
        system = FiniteControlSystem.build(SampleSpace.of_size(2), [make_record("a"), make_record("b")], [], {})
        assert system.time_ids == (ZERO_TIME_ID, INFINITY_TIME_ID)
        assert system.class_of("a", ZERO_TIME_ID) == frozenset({"a", "b"})

    def test_existing_zero_time_is_not_duplicated(self, gamble_system):
        assert gamble_system.with_extremal_times().time_ids == gamble_system.time_ids

    def test_fresh_id_avoids_collisions(self):
        ids = ["a"]
        named_zero = ControlTime.uniform("0", ids, RandomTime.constant(2, 1))
        system = FiniteControlSystem.build(SampleSpace.of_size(2), [make_record("a")], [named_zero], {})
        assert system.time_ids == ("0'", "0", INFINITY_TIME_ID)

    def test_duplicate_control_rejected(self):
        with pytest.raises(DuplicateEntityError):
            FiniteControlSystem(SampleSpace.of_size(2), (make_record("a"), make_record("a")), (), {})

    def test_duplicate_time_rejected(self):
        s = ControlTime.uniform("1", ["a"], RandomTime.constant(2, 1))
        with pytest.raises(DuplicateEntityError):
            FiniteControlSystem(SampleSpace.of_size(2), (make_record("a"),), (s, s), {})

    def test_time_must_cover_every_control(self):
        s = ControlTime.uniform("1", ["a"], RandomTime.constant(2, 1))
        with pytest.raises(ValidationError):
            FiniteControlSystem(SampleSpace.of_size(2), (make_record("a"), make_record("b")), (s,), {})

    def test_space_size_checked(self):
        with pytest.raises(DimensionMismatchError):
            FiniteControlSystem(SampleSpace.of_size(3), (make_record("a"),), (), {})

    def test_lookups(self, gamble_system):
        assert gamble_system.control("risky").payoff.values == (0, 2)
        assert gamble_system.time_of("1", "safe") == RandomTime.constant(2, 1)
        assert gamble_system.class_members("risky", "0") == ("safe", "risky")
        with pytest.raises(EntityNotFoundError):
            gamble_system.control("nope")
        with pytest.raises(EntityNotFoundError):
            gamble_system.class_of("safe", "7")

    def test_without_control_drops_it_everywhere(self, gamble_system):
        reduced = gamble_system.without_control("risky")
        assert reduced.control_ids == ("safe",)
        assert reduced.class_of("safe", "0") == frozenset({"safe"})
        assert all(cid == "safe" for t in reduced.control_times for cid, _ in t.times)

    def test_missing_classes_are_allowed(self):
        system = make_gamble_system(classes={})
        assert not system.has_class("safe", "1")


# ===========================================================================
# Verdicts and BellmanReport
# ===========================================================================

class TestVerdict:
    def test_failed_verdict_needs_witness(self):
        with pytest.raises(ValidationError):
            Verdict("B1", False, Section.BELLMAN)

    def test_empty_name_rejected(self):
        with pytest.raises(ValidationError):
            Verdict.ok("", Section.AXIOMS)

    def test_lattice_chain(self):
        ok = Verdict.ok("C", Section.LATTICE)
        bad = Verdict.failed("C", Section.LATTICE, Witness(detail="x"))
        assert LatticeVerdict("c", "0", Fraction(0), None, ok, ok, ok).chain_consistent
        assert LatticeVerdict("c", "0", Fraction(0), None, bad, ok, ok).chain_consistent
        assert not LatticeVerdict("c", "0", Fraction(0), None, ok, bad, ok).chain_consistent
        assert not LatticeVerdict("c", "0", Fraction(0), None, ok, ok, bad).chain_consistent


class TestBellmanReport:
    def test_empty_report_passes(self):
        report = BellmanReport()
        assert report.passed
        assert report.value_display == "-inf"

    def test_failures_include_lattice_conditions(self):
        report = BellmanReport()
        ok = Verdict.ok("C1", Section.LATTICE)
        bad = Verdict.failed("C3", Section.LATTICE, Witness(detail="x"))
        report.add_lattice(LatticeVerdict("c", "0", Fraction(0), None, ok, ok, bad))
        assert [v.name for v in report.failures()] == ["C3"]
        assert not report.passed

    def test_notes_are_deduplicated(self):
        report = BellmanReport()
        report.note("a")
        report.note("a")
        assert report.notes == ["a"]

    def test_merge_keeps_solution_of_other(self):
        left = BellmanReport()
        left.add(Verdict.ok("axiom-1", Section.AXIOMS))
        right = BellmanReport()
        right.add(failing())
        right.set_solution(Fraction(7, 6), ("c*",))
        merged = left.merge(right)
        assert [v.name for v in merged.verdicts] == ["axiom-1", "B1"]
        assert merged.value_display == "7/6"
        assert merged.solved
        assert not merged.section_passed(Section.BELLMAN)
        assert merged.section_passed(Section.AXIOMS)

    def test_verdict_lookup(self):
        report = BellmanReport()
        report.add(failing("B3"))
        assert report.verdict("B3").witness.outcome == 0
        with pytest.raises(KeyError):
            report.verdict("B9")
