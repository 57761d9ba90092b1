"""
Unit Tests - Domain Value Objects
Tests for SigmaField, ProbMeasure, RandomVariable, RandomTime, Filtration,
DiscreteProcess and SampleSpace.

  happy paths on small hand-checked spaces
  sad paths: every constructor rejects malformed input with ValidationError
  boundary cases: one-outcome spaces, null outcomes, the ∞ sentinel
"""
import math
from fractions import Fraction

import pytest

from domain.exceptions import DimensionMismatchError, EntityNotFoundError, ValidationError
from domain.value_objects import (
    INFINITY,
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    RandomVariable,
    SampleSpace,
    SigmaField,
    format_fraction,
    format_time_value,
    parse_time_value,
    to_fraction,
)
from domain.value_objects.sigma_field import MAX_ENUMERABLE_ATOMS


# ===========================================================================
# Helpers / Factories
# ===========================================================================

def make_field(*blocks, n=None) -> SigmaField:
    size = n if n is not None else sum(len(b) for b in blocks)
    return SigmaField(size, tuple(tuple(b) for b in blocks))


def rv(*values) -> RandomVariable:
    return RandomVariable.from_values(values)


# ===========================================================================
# Rational coercion
# ===========================================================================

class TestRational:
    def test_accepts_int_fraction_and_strings(self):
        assert to_fraction(3, "x") == Fraction(3)
        assert to_fraction(Fraction(1, 6), "x") == Fraction(1, 6)
        assert to_fraction(" 7/6 ", "x") == Fraction(7, 6)
        assert to_fraction("0.25", "x") == Fraction(1, 4)

    @pytest.mark.parametrize("bad", [0.5, True, "abc", "1/0", None])
    def test_rejects_inexact_or_garbage(self, bad):
        with pytest.raises(ValidationError) as exc:
            to_fraction(bad, "weights")
        assert exc.value.field == "weights"

    def test_format_fraction_is_parseable(self):
        assert format_fraction(Fraction(-1, 3)) == "-1/3"
        assert to_fraction(format_fraction(Fraction(-1, 3)), "x") == Fraction(-1, 3)


# ===========================================================================
# SampleSpace
# ===========================================================================

class TestSampleSpace:
    def test_of_size_generates_labels(self):
        space = SampleSpace.of_size(3)
        assert space.outcomes == ("w0", "w1", "w2")
        assert space.size == 3
        assert space.index("w2") == 2

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValidationError):
            SampleSpace.from_labels(["a", "a"])

    def test_empty_space_rejected(self):
        with pytest.raises(ValidationError):
            SampleSpace.of_size(0)

    def test_unknown_label_lookup(self):
        with pytest.raises(EntityNotFoundError):
            SampleSpace.of_size(2).index("nope")


# ===========================================================================
# SigmaField
# ===========================================================================

class TestSigmaField:
    def test_atoms_are_canonicalized(self):
        g = SigmaField(4, ((3, 1), (2, 0)))
        assert g.atoms == ((0, 2), (1, 3))
        assert g.labels() == (0, 1, 0, 1)

    def test_overlapping_atoms_rejected(self):
        with pytest.raises(ValidationError):
            SigmaField(3, ((0, 1), (1, 2)))

    def test_uncovered_outcome_rejected(self):
        with pytest.raises(ValidationError):
            SigmaField(3, ((0, 1),))

    def test_out_of_range_outcome_rejected(self):
        with pytest.raises(ValidationError):
            SigmaField(2, ((0, 1, 2),))

    def test_trivial_and_discrete(self):
        assert SigmaField.trivial(3).is_trivial
        assert SigmaField.discrete(3).is_discrete
        assert SigmaField.trivial(1).is_discrete

    def test_from_labels_groups_level_sets(self):
        g = SigmaField.from_labels(["x", "y", "x", "z"])
        assert g.atoms == ((0, 2), (1,), (3,))

    def test_contains_only_unions_of_atoms(self):
        g = make_field((0, 1), (2,), (3,))
        assert g.contains(frozenset({0, 1, 3}))
        assert g.contains(frozenset())
        assert not g.contains(frozenset({0, 2}))

    def test_is_measurable(self):
        g = make_field((0, 1), (2, 3))
        assert g.is_measurable([5, 5, 7, 7])
        assert not g.is_measurable([5, 6, 7, 7])

    def test_measurable_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            make_field((0, 1)).is_measurable([1, 2, 3])

    def test_coarser_than_and_refine(self):
        coarse = make_field((0, 1), (2, 3))
        other = make_field((0, 2), (1, 3))
        joined = coarse.refine(other)
        assert joined.is_discrete
        assert coarse.is_coarser_than(joined)
        assert other.is_coarser_than(joined)
        assert not coarse.is_coarser_than(other)

    def test_trace_keeps_nonempty_intersections(self):
        g = make_field((0, 1), (2, 3))
        assert g.trace(frozenset({1, 2, 3})) == ((1,), (2, 3))

    def test_complete_splits_off_null_outcomes(self):
        g = make_field((0, 1, 2), (3,))
        assert g.complete(frozenset({1})).atoms == ((0, 2), (1,), (3,))

    def test_events_enumerates_all_unions(self):
        events = list(make_field((0, 1), (2,)).events())
        assert len(events) == 4
        assert frozenset() in events
        assert frozenset({0, 1, 2}) in events

    def test_events_refuses_large_fields(self):
        g = SigmaField.discrete(MAX_ENUMERABLE_ATOMS + 1)
        with pytest.raises(ValidationError):
            list(g.events())


# ===========================================================================
# ProbMeasure
# ===========================================================================

class TestProbMeasure:
    def test_uniform(self):
        mu = ProbMeasure.uniform(4)
        assert mu.weights == (Fraction(1, 4),) * 4
        assert mu.support == (0, 1, 2, 3)
        assert mu.null_outcomes == frozenset()

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            ProbMeasure.from_values(["1/2", "1/3"])

    def test_negative_weight_rejected(self):
        with pytest.raises(ValidationError):
            ProbMeasure.from_values(["3/2", "-1/2"])

    def test_float_weights_rejected(self):
        with pytest.raises(ValidationError):
            ProbMeasure.from_values([0.5, 0.5])

    def test_null_outcomes_and_support(self):
        mu = ProbMeasure.from_values(["1/2", "0", "1/2"])
        assert mu.null_outcomes == frozenset({1})
        assert mu.support == (0, 2)
        assert mu.is_null(1)

    def test_mass_and_expect(self):
        mu = ProbMeasure.from_values(["1/6", "1/3", "1/3", "1/6"])
        assert mu.mass({0, 3}) == Fraction(1, 3)
        assert mu.expect([Fraction(v) for v in (0, 1, 2, 3)]) == Fraction(3, 2)

    def test_expect_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            ProbMeasure.uniform(2).expect([Fraction(1)])

    def test_agrees_on(self):
        mu = ProbMeasure.from_values(["1/4", "1/4", "1/2", "0"])
        nu = ProbMeasure.from_values(["1/2", "0", "1/4", "1/4"])
        assert mu.agrees_on(nu, make_field((0, 1), (2, 3)))
        assert not mu.agrees_on(nu, SigmaField.discrete(4))

    def test_is_trivial_on_ignores_null_atoms(self):
        mu = ProbMeasure.from_values(["1/2", "1/2", "0"])
        assert mu.is_trivial_on(make_field((0, 1), (2,)))
        assert not mu.is_trivial_on(SigmaField.discrete(3))


# ===========================================================================
# RandomVariable
# ===========================================================================

class TestRandomVariable:
    def test_factories(self):
        assert RandomVariable.constant(3, "1/2").values == (Fraction(1, 2),) * 3
        assert RandomVariable.indicator(3, {1}).values == (0, 1, 0)

    def test_float_values_rejected(self):
        with pytest.raises(ValidationError):
            RandomVariable.from_values([0.1, 1])

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            RandomVariable(())

    def test_pointwise_arithmetic(self):
        x, y = rv(1, 5, 2), rv(3, 4, 2)
        assert (x + y).values == (4, 9, 4)
        assert (x - y).values == (-2, 1, 0)
        assert x.maximum(y).values == (3, 5, 2)
        assert x.shift("-1/2").values == (Fraction(1, 2), Fraction(9, 2), Fraction(3, 2))

    def test_truncate_none_is_identity(self):
        x = rv(1, 5)
        assert x.truncate(None) is x
        assert x.truncate(Fraction(2)).values == (1, 2)

    def test_glue(self):
        assert rv(1, 2, 3).glue({0, 2}, rv(7, 8, 9)).values == (1, 8, 3)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            rv(1, 2).maximum(rv(1, 2, 3))

    def test_dominates_ignores_null_outcomes(self):
        mu = ProbMeasure.from_values(["1/2", "1/2", "0"])
        assert rv(2, 2, 0).dominates(mu, rv(1, 2, 100))
        assert not rv(2, 2, 0).dominates(ProbMeasure.uniform(3), rv(1, 2, 100))

    def test_expectation_and_measurability(self):
        x = rv(2, 2, 5)
        assert x.expectation(ProbMeasure.uniform(3)) == Fraction(3)
        assert x.is_measurable(make_field((0, 1), (2,)))
        assert not x.is_measurable(SigmaField.trivial(3))


# ===========================================================================
# RandomTime
# ===========================================================================

class TestRandomTime:
    def test_parses_inf_sentinel(self):
        s = RandomTime.from_values([0, "inf", "2"])
        assert s.values == (0, INFINITY, 2)
        assert math.isinf(s[1])

    @pytest.mark.parametrize("bad", [-1, 1.5, True, "soon"])
    def test_rejects_invalid_values(self, bad):
        with pytest.raises(ValidationError):
            parse_time_value(bad)

    def test_format_time_value(self):
        assert format_time_value(INFINITY) == "inf"
        assert format_time_value(3) == 3

    def test_events(self):
        s = RandomTime.from_values([0, 2, "inf", 1])
        assert s.event_le(1) == frozenset({0, 3})
        assert s.event_le(INFINITY) == frozenset({0, 1, 2, 3})
        assert s.event_eq(2) == frozenset({1})

    def test_order_and_minimum(self):
        s = RandomTime.from_values([0, 2, "inf"])
        t = RandomTime.from_values([1, 2, 3])
        assert not s.le(t)
        assert s.le(t, support={0, 1})
        assert s.minimum(t).values == (0, 2, 3)

    def test_constant_value(self):
        s = RandomTime.from_values([1, 1, 4])
        assert s.constant_value() is None
        assert s.constant_value({0, 1}) == 1
        assert RandomTime.infinite(2).is_deterministic

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            RandomTime.constant(2, 0).le(RandomTime.constant(3, 0))


# ===========================================================================
# Filtration and DiscreteProcess
# ===========================================================================

class TestFiltration:
    def test_at_maps_late_times_to_terminal(self):
        f = Filtration((SigmaField.trivial(2), SigmaField.discrete(2)))
        assert f.horizon == 1
        assert f.at(0).is_trivial
        assert f.at(5) == f.terminal
        assert f.at(INFINITY) == f.terminal

    def test_shrinking_information_rejected(self):
        with pytest.raises(ValidationError):
            Filtration((SigmaField.discrete(2), SigmaField.trivial(2)))

    def test_stage_sizes_must_agree(self):
        with pytest.raises(DimensionMismatchError):
            Filtration((SigmaField.trivial(2), SigmaField.discrete(3)))

    def test_constant(self):
        f = Filtration.constant(SigmaField.trivial(3), 2)
        assert f.horizon == 2
        assert all(stage.is_trivial for stage in f.stages)


class TestDiscreteProcess:
    def test_columns_and_prefix(self):
        x = DiscreteProcess.from_columns([(0, 0, 0), (1, 1, -1)])
        assert x.n == 3
        assert x.horizon == 1
        assert x.column(1) == (1, 1, -1)
        assert x.prefix(2, 1) == (0, -1)

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValidationError):
            DiscreteProcess(((0, 1), (0,)))

    def test_float_values_rejected(self):
        with pytest.raises(ValidationError):
            DiscreteProcess(((0, 0.5),))
