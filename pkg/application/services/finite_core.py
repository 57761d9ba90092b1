"""
Finite Core Service - Application Layer

Exact measure-theoretic primitives on finite sample spaces: generated
σ-fields, common refinement, conditional expectation, essential supremum and
almost-sure equality, plus the appendix facts about conditioning and the
exchange of conditional expectation with the essential supremum.

All arithmetic is exact (fractions.Fraction). Every function is pure.
"""
import logging
from fractions import Fraction
from typing import AbstractSet, Hashable, Optional, Sequence, Tuple

from domain.exceptions import (
    DimensionMismatchError,
    EmptyFamilyError,
    PreconditionViolation,
    ValidationError,
)
from domain.value_objects import ProbMeasure, RandomVariable, SampleSpace, SigmaField

logger = logging.getLogger(__name__)


def _check(n: int, actual: int, what: str) -> None:
    if actual != n:
        raise DimensionMismatchError(what, expected=n, actual=actual)


# ---------------------------------------------------------------------------
# σ-fields
# ---------------------------------------------------------------------------


def sigma_generated(space: SampleSpace, rvs: Sequence[Sequence[Hashable]]) -> SigmaField:
    """
    Coarsest σ-field making every rv measurable.

    Atoms are the classes of outcomes with equal value tuples. Accepts
    RandomVariables or any outcome-indexed sequence (process columns).
    """
    n = space.size
    for rv in rvs:
        _check(n, len(rv), "random variable")
    return SigmaField.from_labels(tuple(tuple(rv[i] for rv in rvs) for i in range(n)))


def refine(a: SigmaField, b: SigmaField) -> SigmaField:
    return a.refine(b)


def trace(g: SigmaField, event: AbstractSet[int]) -> Tuple[Tuple[int, ...], ...]:
    return g.trace(event)


def complete(g: SigmaField, mu: ProbMeasure) -> SigmaField:
    _check(g.n, mu.n, "measure")
    return g.complete(mu.null_outcomes)


# ---------------------------------------------------------------------------
# Conditioning and suprema
# ---------------------------------------------------------------------------


def cond_exp(mu: ProbMeasure, x: RandomVariable, g: SigmaField) -> RandomVariable:
    """
    E[x | g] computed atom by atom.

    On an atom A with mu(A) > 0 the value is the mu-weighted average of x over
    A; on null atoms the value is 0. Downstream comparisons use as_equal, so
    the null-atom convention is never observable.
    """
    _check(g.n, mu.n, "measure")
    _check(g.n, x.n, "random variable")
    values = [Fraction(0)] * g.n
    for block in g.atoms:
        mass = mu.mass(block)
        if mass == 0:
            continue
        average = sum((mu.weights[i] * x[i] for i in block), Fraction(0)) / mass
        for i in block:
            values[i] = average
    return RandomVariable(tuple(values))


def ess_sup(mu: ProbMeasure, family: Sequence[RandomVariable]) -> RandomVariable:
    """Pointwise maximum over a nonempty finite family (one version of the ess sup)."""
    if not family:
        raise EmptyFamilyError("ess_sup")
    for member in family:
        _check(mu.n, member.n, "random variable")
    result = family[0]
    for member in family[1:]:
        result = result.maximum(member)
    return result


def as_equal(mu: ProbMeasure, x: RandomVariable, y: RandomVariable) -> bool:
    """x = y on every outcome of positive weight."""
    _check(mu.n, x.n, "random variable")
    _check(mu.n, y.n, "random variable")
    return all(x[i] == y[i] for i in mu.support)


def first_difference(mu: ProbMeasure, x: RandomVariable, y: RandomVariable) -> Optional[int]:
    """Smallest positive-weight outcome where x and y differ, if any."""
    for i in mu.support:
        if x[i] != y[i]:
            return i
    return None


def first_excess(mu: ProbMeasure, x: RandomVariable, y: RandomVariable) -> Optional[int]:
    """Smallest positive-weight outcome where x > y, if any (a.s. x <= y otherwise)."""
    for i in mu.support:
        if x[i] > y[i]:
            return i
    return None


# ---------------------------------------------------------------------------
# Appendix facts as decidable checks
# ---------------------------------------------------------------------------


def _validate_lattice_parameters(eps: Fraction, m: Optional[Fraction]) -> None:
    if eps < 0:
        raise ValidationError("eps", f"eps must be >= 0, got {eps}")
    if m is not None and m <= 0:
        raise ValidationError("m", f"M must be > 0, got {m}")


def has_lattice_property(
    mu: ProbMeasure,
    family: Sequence[RandomVariable],
    eps: Fraction = Fraction(0),
    m: Optional[Fraction] = None,
) -> bool:
    """
    (ε,M)-upwards-lattice property of a finite family.

    For every pair (x, y) some member z satisfies
    z >= (M ∧ x) ∨ (M ∧ y) - ε almost surely. m None stands for M = +∞.
    """
    _validate_lattice_parameters(eps, m)
    for x in family:
        for y in family:
            bound = x.truncate(m).maximum(y.truncate(m)).shift(-eps)
            if not any(z.dominates(mu, bound) for z in family):
                return False
    return True


def esssup_exchange_holds(
    mu: ProbMeasure,
    family: Sequence[RandomVariable],
    g: SigmaField,
    eps: Fraction = Fraction(0),
    m: Optional[Fraction] = None,
) -> bool:
    """
    E[ess sup x_λ | g] = ess sup E[x_λ | g] almost surely.

    The identity is guaranteed for families with the upwards-lattice property;
    callers confirm that hypothesis first. Without it the comparison is still
    computed and the missing hypothesis is logged.
    """
    _validate_lattice_parameters(eps, m)
    if not has_lattice_property(mu, family, eps, m):
        logger.info("esssup exchange evaluated on a family without the lattice property")
    lhs = cond_exp(mu, ess_sup(mu, family), g)
    rhs = ess_sup(mu, [cond_exp(mu, x, g) for x in family])
    return as_equal(mu, lhs, rhs)


def conditioning_lemma_holds(
    mu: ProbMeasure,
    x: RandomVariable,
    g1: SigmaField,
    g2: SigmaField,
    event: AbstractSet[int],
) -> bool:
    """
    If g1 and g2 agree when traced on A ∈ g1 ∩ g2, E[x|g1] = E[x|g2] on A a.s.

    Raises PreconditionViolation when A is not in both fields or the traces differ.
    """
    if not (g1.contains(event) and g2.contains(event)):
        raise PreconditionViolation(
            "conditioning_lemma_holds", "event must belong to both σ-fields", rule="A in g1∩g2"
        )
    if g1.trace(event) != g2.trace(event):
        raise PreconditionViolation(
            "conditioning_lemma_holds", "σ-fields differ when traced on the event", rule="g1|A = g2|A"
        )
    left = cond_exp(mu, x, g1)
    right = cond_exp(mu, x, g2)
    return all(left[i] == right[i] for i in mu.support if i in event)
