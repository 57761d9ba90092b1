"""
Unit Tests - Finite Core
σ-field generation, conditional expectation, essential suprema and the
appendix facts (lattice property, sup/conditioning exchange, conditioning
on agreeing σ-fields) on small spaces with hand-computed answers.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from application.services.finite_core import (
    as_equal,
    complete,
    cond_exp,
    conditioning_lemma_holds,
    ess_sup,
    esssup_exchange_holds,
    first_difference,
    first_excess,
    has_lattice_property,
    sigma_generated,
)
from domain.exceptions import (
    DimensionMismatchError,
    EmptyFamilyError,
    PreconditionViolation,
    ValidationError,
)
from domain.value_objects import ProbMeasure, RandomVariable, SampleSpace, SigmaField


# ===========================================================================
# Helpers / Factories
# ===========================================================================

def rv(*values) -> RandomVariable:
    return RandomVariable.from_values(values)


def halves(n=4) -> SigmaField:
    half = n // 2
    return SigmaField(n, (tuple(range(half)), tuple(range(half, n))))


@st.composite
def measure_and_rv(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    raw = draw(st.lists(st.integers(min_value=0, max_value=5), min_size=n, max_size=n))
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    mu = ProbMeasure(tuple(Fraction(w, total) for w in raw))
    x = RandomVariable(tuple(
        Fraction(v) for v in draw(st.lists(st.integers(-9, 9), min_size=n, max_size=n))
    ))
    labels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return mu, x, SigmaField.from_labels(labels)


# ===========================================================================
# σ-fields
# ===========================================================================

class TestSigmaGeneration:
    def test_generated_by_two_variables(self):
        space = SampleSpace.of_size(4)
        g = sigma_generated(space, [rv(0, 0, 1, 1), rv(5, 6, 5, 5)])
        assert g.atoms == ((0,), (1,), (2, 3))

    def test_no_variables_gives_trivial_field(self):
        assert sigma_generated(SampleSpace.of_size(3), []).is_trivial

    def test_wrong_length_rejected(self):
        with pytest.raises(DimensionMismatchError):
            sigma_generated(SampleSpace.of_size(3), [rv(1, 2)])

    def test_complete_against_measure(self):
        mu = ProbMeasure.from_values(["1/2", "0", "1/2", "0"])
        assert complete(halves(), mu).atoms == ((0,), (1,), (2,), (3,))


# ===========================================================================
# Conditional expectation and essential supremum
# ===========================================================================

class TestCondExp:
    def test_atom_averages(self):
        mu = ProbMeasure.from_values(["1/6", "1/3", "1/3", "1/6"])
        y = cond_exp(mu, rv(0, 3, 6, 0), halves())
        assert y.values == (Fraction(2), Fraction(2), Fraction(4), Fraction(4))

    def test_null_atom_reads_zero(self):
        mu = ProbMeasure.from_values(["1", "0"])
        y = cond_exp(mu, rv(4, 9), SigmaField.discrete(2))
        assert y.values == (4, 0)

    def test_trivial_field_gives_expectation(self):
        mu = ProbMeasure.uniform(3)
        assert cond_exp(mu, rv(1, 2, 6), SigmaField.trivial(3)).values == (3, 3, 3)

    @settings(max_examples=60, deadline=None)
    @given(measure_and_rv())
    def test_tower_property(self, data):
        mu, x, g = data
        assert cond_exp(mu, x, g).expectation(mu) == x.expectation(mu)

    @settings(max_examples=60, deadline=None)
    @given(measure_and_rv())
    def test_result_is_measurable(self, data):
        mu, x, g = data
        assert cond_exp(mu, x, g).is_measurable(g)


class TestEssSup:
    def test_pointwise_maximum(self):
        mu = ProbMeasure.uniform(3)
        assert ess_sup(mu, [rv(1, 5, 0), rv(2, 1, 0), rv(0, 0, 3)]).values == (2, 5, 3)

    def test_empty_family_rejected(self):
        with pytest.raises(EmptyFamilyError):
            ess_sup(ProbMeasure.uniform(2), [])


class TestAlmostSureComparisons:
    def test_as_equal_ignores_null_outcomes(self):
        mu = ProbMeasure.from_values(["1/2", "1/2", "0"])
        assert as_equal(mu, rv(1, 2, 3), rv(1, 2, 99))
        assert not as_equal(mu, rv(1, 2, 3), rv(1, 0, 3))

    def test_first_difference_and_excess(self):
        mu = ProbMeasure.from_values(["0", "1/2", "1/2"])
        assert first_difference(mu, rv(0, 1, 2), rv(9, 1, 3)) == 2
        assert first_excess(mu, rv(0, 1, 2), rv(9, 1, 3)) is None
        assert first_excess(mu, rv(0, 2, 2), rv(9, 1, 3)) == 1


# ===========================================================================
# Appendix facts
# ===========================================================================

class TestLatticeProperty:
    def test_family_closed_under_max(self):
        mu = ProbMeasure.uniform(2)
        family = [rv(1, 0), rv(0, 1), rv(1, 1)]
        assert has_lattice_property(mu, family)

    def test_antichain_fails_at_eps_zero(self):
        mu = ProbMeasure.uniform(2)
        assert not has_lattice_property(mu, [rv(1, 0), rv(0, 1)])

    def test_eps_slack_repairs_antichain(self):
        mu = ProbMeasure.uniform(2)
        assert has_lattice_property(mu, [rv(1, 0), rv(0, 1)], eps=Fraction(1))

    def test_cap_truncates_before_comparison(self):
        mu = ProbMeasure.uniform(2)
        family = [rv(5, 0), rv(0, 5), rv(1, 1)]
        assert not has_lattice_property(mu, family)
        assert has_lattice_property(mu, family, m=Fraction(1))

    def test_parameter_validation(self):
        mu = ProbMeasure.uniform(2)
        with pytest.raises(ValidationError):
            has_lattice_property(mu, [rv(1, 1)], eps=Fraction(-1))
        with pytest.raises(ValidationError):
            has_lattice_property(mu, [rv(1, 1)], m=Fraction(0))


class TestEssSupExchange:
    def test_holds_for_lattice_family(self):
        mu = ProbMeasure.uniform(4)
        family = [rv(1, 0, 2, 0), rv(0, 3, 0, 1), rv(1, 3, 2, 1)]
        assert esssup_exchange_holds(mu, family, halves())

    def test_fails_without_lattice_property(self):
        mu = ProbMeasure.uniform(2)
        assert not esssup_exchange_holds(mu, [rv(1, 0), rv(0, 1)], SigmaField.trivial(2))


class TestConditioningLemma:
    def test_agreeing_fields_give_equal_conditionals(self):
        mu = ProbMeasure.uniform(4)
        g1 = SigmaField(4, ((0, 1), (2,), (3,)))
        g2 = SigmaField(4, ((0, 1), (2, 3)))
        assert conditioning_lemma_holds(mu, rv(1, 5, 2, 8), g1, g2, frozenset({0, 1}))

    def test_event_outside_a_field(self):
        mu = ProbMeasure.uniform(4)
        g1 = SigmaField.discrete(4)
        g2 = halves()
        with pytest.raises(PreconditionViolation):
            conditioning_lemma_holds(mu, rv(1, 2, 3, 4), g1, g2, frozenset({0}))

    def test_traces_must_agree(self):
        mu = ProbMeasure.uniform(4)
        g1 = SigmaField.discrete(4)
        g2 = halves()
        with pytest.raises(PreconditionViolation) as exc:
            conditioning_lemma_holds(mu, rv(1, 2, 3, 4), g1, g2, frozenset({0, 1}))
        assert exc.value.rule == "g1|A = g2|A"
