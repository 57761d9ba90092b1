"""
Process Algebra Service - Application Layer

Discrete-time processes on finite sample spaces: natural filtrations, stopped
processes, the stopping-time test, the σ-field at a stopping time and the
informational-consistency results (Galmarino's test, observational
consistency, monotonicity of information and their almost-sure variants).

Times at or beyond the horizon, including ∞, read the terminal stage of a
filtration, which plays the role of G_∞.
"""
import logging
from dataclasses import dataclass
from typing import AbstractSet, Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from domain.exceptions import (
    DimensionMismatchError,
    NotAStoppingTimeError,
    PreconditionViolation,
)
from domain.value_objects import (
    INFINITY,
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    SigmaField,
)
from domain.value_objects.sigma_field import MAX_ENUMERABLE_ATOMS, canonical_blocks

logger = logging.getLogger(__name__)

SIDE_CONDITIONS_NOTE = (
    "Hausdorff and separability side conditions hold automatically on a finite sample space"
)

# Above this many terminal atoms Galmarino's membership equivalence is tested
# on the atoms of the compared fields instead of on every event.
_FULL_EVENT_SCAN_ATOMS = 12


def _check(n: int, actual: int, what: str) -> None:
    if actual != n:
        raise DimensionMismatchError(what, expected=n, actual=actual)


# ---------------------------------------------------------------------------
# Filtrations and stopped processes
# ---------------------------------------------------------------------------


def sigma_of_process(x: DiscreteProcess) -> SigmaField:
    """σ(X): atoms are outcomes with identical whole paths."""
    return SigmaField.from_labels(x.rows)


def natural_filtration(x: DiscreteProcess) -> Filtration:
    """F^X_t = σ(X_s : s <= t)."""
    return Filtration(
        tuple(
            SigmaField.from_labels(tuple(x.prefix(i, t) for i in range(x.n)))
            for t in range(x.horizon + 1)
        )
    )


def stop_process(x: DiscreteProcess, s: RandomTime) -> DiscreteProcess:
    """X^S_t(ω) = X_{S(ω) ∧ t}(ω)."""
    _check(x.n, s.n, "random time")
    return DiscreteProcess(
        tuple(
            tuple(row[int(min(s[i], t))] for t in range(x.horizon + 1))
            for i, row in enumerate(x.rows)
        )
    )


def _thresholds(s: RandomTime, f: Filtration) -> List[int]:
    extra = sorted({int(v) for v in s.values if v != INFINITY and v > f.horizon})
    return list(range(f.horizon + 1)) + extra


def first_non_adapted_stage(s: RandomTime, f: Filtration) -> Optional[int]:
    """Smallest t with {S <= t} not an event of G_t, or None for a stopping time."""
    _check(f.n, s.n, "random time")
    for t in _thresholds(s, f):
        if not f.at(t).contains(s.event_le(t)):
            return t
    return None


def is_stopping_time(s: RandomTime, f: Filtration) -> bool:
    return first_non_adapted_stage(s, f) is None


def require_stopping_time(s: RandomTime, f: Filtration, operation: str, label: str = "s") -> None:
    stage = first_non_adapted_stage(s, f)
    if stage is not None:
        raise NotAStoppingTimeError(operation, label, stage)


def sigma_at(f: Filtration, s: RandomTime) -> SigmaField:
    """
    G_S = {A ∈ G_∞ : A ∩ {S <= t} ∈ G_t for all t}.

    For a stopping time the atom of ω in G_S is the atom of ω in G_{S(ω)}:
    outcomes are merged exactly when they stop at the same time and are
    inseparable by the information available at that time.
    """
    require_stopping_time(s, f, "sigma_at")
    labels: List[Tuple[object, int]] = []
    for i in range(f.n):
        stage = f.at(s[i])
        labels.append((min(s[i], f.horizon), stage.labels()[i]))
    return SigmaField.from_labels(labels)


def sigma_at_bruteforce(f: Filtration, s: RandomTime) -> SigmaField:
    """
    Definitional G_S by enumerating every event of G_∞.

    Works for any random time: the result is the σ-field generated by the
    admissible events, so for a stopping time it coincides with sigma_at.
    Exponential in the number of terminal atoms.
    """
    _check(f.n, s.n, "random time")
    thresholds = _thresholds(s, f)
    cuts = [(f.at(t), s.event_le(t)) for t in thresholds]
    admissible = [
        event
        for event in f.terminal.events()
        if all(stage.contains(event & before) for stage, before in cuts)
    ]
    return SigmaField.from_labels(
        tuple(tuple(i in event for event in admissible) for i in range(f.n))
    )


# ---------------------------------------------------------------------------
# Informational-consistency results
# ---------------------------------------------------------------------------


def stopping_time_equivalence(x: DiscreteProcess, s: RandomTime) -> Tuple[bool, bool]:
    """(S is an F^X stopping time, S is an F^{X^S} stopping time); these always agree."""
    a = is_stopping_time(s, natural_filtration(x))
    b = is_stopping_time(s, natural_filtration(stop_process(x, s)))
    return a, b


@dataclass(frozen=True)
class GalmarinoReport:
    """Result of Galmarino's test for one (process, stopping time) pair."""

    generated: SigmaField
    at_time: SigmaField
    equivalence_holds: bool
    events_checked: int
    counterexample_event: Optional[Tuple[int, ...]] = None
    side_conditions_note: str = SIDE_CONDITIONS_NOTE

    @property
    def fields_equal(self) -> bool:
        return self.generated == self.at_time

    @property
    def passed(self) -> bool:
        return self.fields_equal and self.equivalence_holds


def _constant_on_level_sets(
    event: AbstractSet[int], rows: Sequence[Tuple[Hashable, ...]]
) -> bool:
    """1_A is constant wherever the stopped path is constant."""
    inside: Dict[Tuple[Hashable, ...], bool] = {}
    for i, row in enumerate(rows):
        flag = i in event
        if inside.setdefault(row, flag) != flag:
            return False
    return True


def _events_to_scan(fields: Sequence[SigmaField]) -> List[FrozenSet[int]]:
    terminal = fields[0]
    if terminal.atom_count <= _FULL_EVENT_SCAN_ATOMS:
        return list(terminal.events())
    return [frozenset(block) for g in fields for block in g.atoms]


def galmarino_check(x: DiscreteProcess, s: RandomTime) -> GalmarinoReport:
    """
    σ(X^S) = F^X_S, plus the membership equivalence for every event A:
    (i) A ∈ F^X_S, (ii) 1_A is constant on the level sets of X^S and A ∈ F^X_∞,
    (iii) A ∈ σ(X^S).
    """
    f = natural_filtration(x)
    require_stopping_time(s, f, "galmarino_check")
    stopped = stop_process(x, s)
    generated = sigma_of_process(stopped)
    at_time = sigma_at(f, s)
    return _galmarino_report(f, stopped, generated, at_time)


def _galmarino_report(
    f: Filtration, stopped: DiscreteProcess, generated: SigmaField, at_time: SigmaField
) -> GalmarinoReport:
    events = _events_to_scan([f.terminal, generated, at_time])
    for event in events:
        first = at_time.contains(event)
        second = _constant_on_level_sets(event, stopped.rows) and f.terminal.contains(event)
        third = generated.contains(event)
        if not first == second == third:
            return GalmarinoReport(
                generated, at_time, False, len(events), tuple(sorted(event))
            )
    return GalmarinoReport(generated, at_time, True, len(events))


def galmarino_check_unchecked(x: DiscreteProcess, s: RandomTime) -> GalmarinoReport:
    """Galmarino's test with the stopping hypothesis dropped (definitional G_S)."""
    f = natural_filtration(x)
    stopped = stop_process(x, s)
    generated = sigma_of_process(stopped)
    return _galmarino_report(f, stopped, generated, sigma_at_bruteforce(f, s))


def observational_consistency(x: DiscreteProcess, y: DiscreteProcess, s: RandomTime) -> bool:
    """
    X^S = Y^S implies F^X_S = F^Y_S; recomputes both fields and compares.

    A False return signals a defect in the engine, not in the inputs.
    """
    _check(x.n, y.n, "process")
    if x.horizon != y.horizon:
        raise PreconditionViolation("observational_consistency", "processes need a common horizon")
    if stop_process(x, s) != stop_process(y, s):
        raise PreconditionViolation(
            "observational_consistency", "stopped processes differ", rule="X^S = Y^S"
        )
    fx, fy = natural_filtration(x), natural_filtration(y)
    x_ok, y_ok = is_stopping_time(s, fx), is_stopping_time(s, fy)
    if not (x_ok or y_ok):
        require_stopping_time(s, fx, "observational_consistency")
    if not (x_ok and y_ok):
        logger.error(
            "Engine defect: S is a stopping time of %s only although X^S = Y^S", "F^X" if x_ok else "F^Y"
        )
        return False
    return sigma_at(fx, s) == sigma_at(fy, s)


def information_monotone(z: DiscreteProcess, u: RandomTime, v: RandomTime) -> bool:
    """U <= V stopping times of F^Z imply σ(Z^U) ⊂ σ(Z^V)."""
    if not u.le(v):
        raise PreconditionViolation("information_monotone", "u must not exceed v pointwise", rule="u<=v")
    f = natural_filtration(z)
    require_stopping_time(u, f, "information_monotone", "u")
    require_stopping_time(v, f, "information_monotone", "v")
    return sigma_of_process(stop_process(z, u)).is_coarser_than(
        sigma_of_process(stop_process(z, v))
    )


# ---------------------------------------------------------------------------
# Almost-sure variants (null outcomes)
# ---------------------------------------------------------------------------


def stopping_time_on_completion(mu: ProbMeasure, f: Filtration, s: RandomTime) -> RandomTime:
    """
    A stopping time S′ of f with S′ = S mu-a.s.

    S′ = v on A_v, ∞ elsewhere, where A_v is the union of the atoms of G_v
    whose non-null part is a nonempty subset of {S = v}. Raises
    PreconditionViolation when {S = v} is not an event of the completed G_v.
    """
    _check(f.n, s.n, "random time")
    _check(f.n, mu.n, "measure")
    support = frozenset(mu.support)
    values: List[object] = [INFINITY] * f.n
    finite_levels = sorted({int(s[i]) for i in support if s[i] != INFINITY})
    for v in finite_levels:
        target = s.event_eq(v) & support
        chosen = [
            block
            for block in f.at(v).atoms
            if support.intersection(block) and support.intersection(block) <= target
        ]
        covered = frozenset(i for block in chosen for i in block)
        if covered & support != target:
            raise PreconditionViolation(
                "stopping_time_on_completion",
                f"{{S = {v}}} is not an event of the completed stage {min(v, f.horizon)}",
                rule="S a.s. equal to a stopping time",
            )
        for i in covered:
            values[i] = v
    return RandomTime(tuple(values))


def as_variants_check(
    mu: ProbMeasure, x: DiscreteProcess, y: DiscreteProcess, s: RandomTime
) -> bool:
    """
    With X^S = Y^S mu-a.s., the completions of F^X_S, σ(X^S), σ(Y^S) and F^Y_S coincide.

    F^X_S is evaluated at the stopping time S′ constructed from the a.s. atoms.
    """
    _check(x.n, y.n, "process")
    _check(x.n, mu.n, "measure")
    stopped_x, stopped_y = stop_process(x, s), stop_process(y, s)
    if any(stopped_x.rows[i] != stopped_y.rows[i] for i in mu.support):
        raise PreconditionViolation(
            "as_variants_check", "stopped processes differ on a positive-weight outcome",
            rule="X^S = Y^S a.s.",
        )
    fx, fy = natural_filtration(x), natural_filtration(y)
    sx = stopping_time_on_completion(mu, fx, s)
    sy = stopping_time_on_completion(mu, fy, s)
    null = mu.null_outcomes
    fields = [
        sigma_at(fx, sx).complete(null),
        sigma_of_process(stopped_x).complete(null),
        sigma_of_process(stopped_y).complete(null),
        sigma_at(fy, sy).complete(null),
    ]
    return all(g == fields[0] for g in fields[1:])


# ---------------------------------------------------------------------------
# End of time
# ---------------------------------------------------------------------------


def accesses_infinity_check(
    f: Filtration, times: Sequence[RandomTime], event: AbstractSet[int]
) -> bool:
    """
    For stopping times whose maximum reaches the horizon at every ω ∈ A,
    the trace of G_∞ on A equals the join of the traces of the G_{S_n} on A.
    A must belong to every G_{S_n}.
    """
    if not times:
        raise PreconditionViolation("accesses_infinity_check", "need at least one time")
    for k, s in enumerate(times):
        require_stopping_time(s, f, "accesses_infinity_check", f"S_{k}")
    late = [i for i in event if max(s[i] for s in times) < f.horizon]
    if late:
        raise PreconditionViolation(
            "accesses_infinity_check",
            f"the times never reach the horizon on outcomes {sorted(late)}",
            rule="accesses infinity on A",
        )
    fields = [sigma_at(f, s) for s in times]
    for k, g in enumerate(fields):
        if not g.contains(event):
            raise PreconditionViolation(
                "accesses_infinity_check", f"event is not in the σ-field at S_{k}", rule="A in G_{S_n}"
            )
    members = sorted(event)
    join = canonical_blocks(
        _group(members, lambda i: tuple(g.labels()[i] for g in fields))
    )
    return f.terminal.trace(event) == join


def _group(members: Sequence[int], key) -> List[List[int]]:
    groups: Dict[object, List[int]] = {}
    for i in members:
        groups.setdefault(key(i), []).append(i)
    return list(groups.values())


__all__ = [
    "MAX_ENUMERABLE_ATOMS",
    "GalmarinoReport",
    "natural_filtration",
    "stop_process",
    "sigma_of_process",
    "is_stopping_time",
    "first_non_adapted_stage",
    "require_stopping_time",
    "sigma_at",
    "sigma_at_bruteforce",
    "stopping_time_equivalence",
    "galmarino_check",
    "galmarino_check_unchecked",
    "observational_consistency",
    "information_monotone",
    "stopping_time_on_completion",
    "as_variants_check",
    "accesses_infinity_check",
]
