"""
Lattice Checker Service - Application Layer

Decides the three sufficient conditions for the (ε,M)-upwards-lattice
property of a class D(c,S), by exhaustive search over the class and over
every event G of G^c_{S^c} (a pruned search over its atoms):

  C1  all members share P^c, and for d, d′ and G some d″ has
      J(d″) >= M ∧ [1_G J(d) + 1_{Ω∖G} J(d′)] - ε  P^c-a.s.
  C2  the same with the conditional payoffs J(·,S) in place of J(·)
  C3  the family (J(d,S))_d has the (ε,M)-upwards-lattice property

C1 ⇒ C2 ⇒ C3 always holds; a computed verdict triple that breaks the chain
is logged as an engine defect.
"""
import logging
from fractions import Fraction
from typing import Callable, FrozenSet, List, Optional, Sequence, Tuple

from domain.entities import FiniteControlSystem, LatticeVerdict, Section, Verdict, Witness
from domain.value_objects import ProbMeasure, RandomVariable, to_fraction

from application.services.bellman_calculator import BellmanCalculator
from application.services.finite_core import has_lattice_property

logger = logging.getLogger(__name__)


class LatticeCheckerService:
    """Lattice verdicts for one system; reuse one instance to share the calculator cache."""

    def __init__(self, system: FiniteControlSystem, calculator: Optional[BellmanCalculator] = None) -> None:
        self._system = system
        self._calc = calculator or BellmanCalculator(system)

    def check(
        self,
        control_id: str,
        time_id: str,
        eps: Fraction = Fraction(0),
        cap: Optional[Fraction] = None,
    ) -> LatticeVerdict:
        eps = to_fraction(eps, "eps")
        cap = None if cap is None else to_fraction(cap, "M")
        members = self._system.class_members(control_id, time_id)
        mu = self._calc.measure(control_id)
        ctx = (control_id, time_id)

        c1 = self._measures_agree(ctx, members, mu)
        if c1 is None:
            c1 = self._gluing_closed(
                "C1", ctx, members, mu, eps, cap, lambda d: self._system.control(d).payoff
            )
        c2 = self._gluing_closed(
            "C2", ctx, members, mu, eps, cap, lambda d: self._calc.conditional_payoff(d, time_id)
        )
        family = [self._calc.conditional_payoff(d, time_id) for d in members]
        if has_lattice_property(mu, family, eps, cap):
            c3 = Verdict.ok("C3", Section.LATTICE, len(family) ** 2)
        else:
            c3 = Verdict.failed("C3", Section.LATTICE, self._lattice_witness(ctx, members, mu, eps, cap))

        verdict = LatticeVerdict(control_id, time_id, eps, cap, c1, c2, c3)
        if not verdict.chain_consistent:
            logger.error(
                "Lattice chain broken at (%s, %s): C1=%s C2=%s C3=%s",
                control_id, time_id, c1.passed, c2.passed, c3.passed,
            )
        return verdict

    def check_all(self, eps: Fraction = Fraction(0), cap: Optional[Fraction] = None) -> List[LatticeVerdict]:
        """One verdict triple per (c,S), ordered by (control id, time id)."""
        return [
            self.check(cid, tid, eps, cap)
            for cid in sorted(self._system.control_ids)
            for tid in sorted(self._system.time_ids)
        ]

    # ------------------------------------------------------------------
    # Conditions
    # ------------------------------------------------------------------

    def _measures_agree(self, ctx, members: Sequence[str], mu: ProbMeasure) -> Optional[Verdict]:
        for d in members:
            if self._calc.measure(d) != mu:
                return Verdict.failed(
                    "C1", Section.LATTICE,
                    Witness((ctx[0], d), (ctx[1],), detail="P^d != P^c"),
                )
        return None

    def _gluing_closed(
        self,
        name: str,
        ctx,
        members: Sequence[str],
        mu: ProbMeasure,
        eps: Fraction,
        cap: Optional[Fraction],
        payoff: Callable[[str], RandomVariable],
    ) -> Verdict:
        control_id, time_id = ctx
        if len(members) < 2:
            return Verdict.ok(name, Section.LATTICE, 0)
        atoms = self._calc.sigma(control_id, time_id).atoms
        candidates = [payoff(d) for d in members]
        bounds = [x.truncate(cap).shift(-eps) for x in candidates]
        # cover[z][i][k]: candidate z dominates bound i on atom k
        support = set(mu.support)
        cover = [
            [
                [all(z[k] >= bound[k] for k in atom if k in support) for atom in atoms]
                for bound in bounds
            ]
            for z in candidates
        ]
        checked = 0
        for i, d in enumerate(members):
            for j, d_prime in enumerate(members):
                if i == j:
                    continue
                event, nodes = _uncovered_event(atoms, cover, i, j)
                checked += nodes
                if event is not None:
                    return Verdict.failed(
                        name, Section.LATTICE,
                        Witness((control_id, d, d_prime), (time_id,), event=tuple(sorted(event)),
                                detail="no member dominates the glued payoff"),
                        checked,
                    )
        return Verdict.ok(name, Section.LATTICE, checked)

    def _lattice_witness(self, ctx, members, mu, eps, cap) -> Witness:
        control_id, time_id = ctx
        family = [self._calc.conditional_payoff(d, time_id) for d in members]
        for i, x in enumerate(family):
            for j, y in enumerate(family):
                bound = x.truncate(cap).maximum(y.truncate(cap)).shift(-eps)
                if not any(z.dominates(mu, bound) for z in family):
                    return Witness(
                        (control_id, members[i], members[j]), (time_id,),
                        detail="no member dominates the pointwise maximum",
                    )
        return Witness((control_id,), (time_id,), detail="lattice property fails")


def _uncovered_event(
    atoms: Sequence[Tuple[int, ...]],
    cover: Sequence[Sequence[Sequence[bool]]],
    inside: int,
    outside: int,
) -> Tuple[Optional[FrozenSet[int]], int]:
    """
    An event G other than ∅ and Ω on which no candidate dominates the payoff
    glued from bound `inside` on G and bound `outside` off G, or None.

    Candidate z handles G iff it covers `inside` on every atom of G and
    `outside` on every other atom, so atoms are decided one at a time and a
    candidate is dropped once the partial event rules it out. Returns the
    event and the number of search nodes visited.
    """
    count = len(atoms)
    free = []
    for z in cover:
        suffix = [True] * (count + 1)
        for k in range(count - 1, -1, -1):
            suffix[k] = suffix[k + 1] and z[inside][k] and z[outside][k]
        free.append(suffix)

    nodes = 0
    stack: List[Tuple[int, Tuple[int, ...], Tuple[int, ...]]] = [(0, (), tuple(range(len(cover))))]
    while stack:
        index, chosen, live = stack.pop()
        nodes += 1
        if not live:
            completion = _nontrivial_completion(chosen, index, count)
            if completion is not None:
                return frozenset(i for k in completion for i in atoms[k]), nodes
            continue
        if any(free[z][index] for z in live):
            continue
        stack.append((index + 1, chosen, tuple(z for z in live if cover[z][outside][index])))
        stack.append((index + 1, chosen + (index,), tuple(z for z in live if cover[z][inside][index])))
    return None, nodes


def _nontrivial_completion(chosen: Tuple[int, ...], index: int, count: int) -> Optional[Tuple[int, ...]]:
    """Atoms of an event that extends the decided prefix and is neither ∅ nor Ω."""
    excluded = index - len(chosen)
    remaining = count - index
    if chosen:
        return chosen if excluded or remaining else None
    if remaining and (excluded or remaining >= 2):
        return (index,)
    return None


def lattice_check(
    system: FiniteControlSystem,
    control_id: str,
    time_id: str,
    eps: Fraction = Fraction(0),
    cap: Optional[Fraction] = None,
) -> LatticeVerdict:
    return LatticeCheckerService(system).check(control_id, time_id, eps, cap)
