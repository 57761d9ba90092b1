"""
Axiom Validator Service - Application Layer

Checks a FiniteControlSystem against the adaptive-dynamics axioms and
stability under stopping, exhaustively over controls and control times.

Verdict names:
  structure       every (c,S) has a class whose members are known controls
  initial-info    G^c_0 is P^c-trivial and common to all controls with a common law on it
  axiom-1 .. 7    the adaptive-dynamics axioms, in order:
                    1 each S^c is a stopping time of G^c
                    2 c ∈ D(c,S)
                    3 d ∈ D(c,S) implies S^c = S^d a.s. under P^c and P^d
                    4 S^c = T^c P^c-a.s. implies D(c,S) = D(c,T)
                    5 S^d <= T^d a.s. on D(c,T) implies D(c,T) ⊂ D(c,S)
                    6 {D(c,S) : c} partitions the control set
                    7 S^c ≡ ∞ gives D(c,S) = {c}, S^c ≡ 0 gives D(c,S) = C
  stability       c ~_S d implies G^c_{S^c} = G^d_{S^d} with equal laws on it

Structural defects are verdicts, never exceptions.
"""
import logging
from typing import Dict, FrozenSet, List, Optional

from domain.entities import BellmanReport, FiniteControlSystem, Section, Verdict, Witness
from domain.value_objects import INFINITY, SigmaField

from application.services.bellman_calculator import BellmanCalculator, times_as_equal, times_as_le
from application.services.process_algebra import first_non_adapted_stage

logger = logging.getLogger(__name__)


class AxiomValidatorService:
    """
    Exhaustive axiom checks. Each check stops at its first counterexample,
    which becomes the witness of the failed verdict.
    """

    def validate(self, system: FiniteControlSystem) -> BellmanReport:
        report = BellmanReport()
        structure = self._check_structure(system)
        report.add(structure)
        if not structure.passed:
            report.note("axiom checks skipped: class table is incomplete")
            return report
        calc = BellmanCalculator(system)
        report.add(self._check_initial_information(system))
        axiom_1 = self._check_stopping_times(system)
        report.add(axiom_1)
        report.add(self._check_membership(system))
        report.add(self._check_class_times(system))
        report.add(self._check_time_invariance(system))
        report.add(self._check_nesting(system))
        report.add(self._check_partition(system))
        report.add(self._check_extremal_times(system))
        if axiom_1.passed:
            report.add(self._check_stability(system, calc))
        else:
            report.note("stability check skipped: some S^c is not a stopping time")
        failed = [v.name for v in report.verdicts if not v.passed]
        if failed:
            logger.info("Validation found %d failing checks: %s", len(failed), failed)
        return report

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------

    def _check_structure(self, system: FiniteControlSystem) -> Verdict:
        known = set(system.control_ids)
        checked = 0
        for ctime in system.control_times:
            for cid in system.control_ids:
                checked += 1
                if not system.has_class(cid, ctime.id):
                    return Verdict.failed(
                        "structure", Section.STRUCTURE,
                        Witness((cid,), (ctime.id,), detail="missing class D(c,S)"), checked,
                    )
                unknown = sorted(system.class_of(cid, ctime.id) - known)
                if unknown:
                    return Verdict.failed(
                        "structure", Section.STRUCTURE,
                        Witness((cid,) + tuple(unknown), (ctime.id,), detail="class lists unknown controls"),
                        checked,
                    )
        return Verdict.ok("structure", Section.STRUCTURE, checked)

    def _check_initial_information(self, system: FiniteControlSystem) -> Verdict:
        if not system.controls:
            return Verdict.ok("initial-info", Section.AXIOMS)
        first = system.controls[0]
        g0 = first.filtration.at(0)
        for record in system.controls:
            stage = record.filtration.at(0)
            if not record.measure.is_trivial_on(stage):
                return Verdict.failed(
                    "initial-info", Section.AXIOMS,
                    Witness((record.id,), ("0",), detail="G^c_0 is not P^c-trivial"),
                )
            if stage != g0 or not record.measure.agrees_on(first.measure, g0):
                return Verdict.failed(
                    "initial-info", Section.AXIOMS,
                    Witness((first.id, record.id), ("0",), detail="initial information or its law differs"),
                )
        return Verdict.ok("initial-info", Section.AXIOMS, len(system.controls))

    # ------------------------------------------------------------------
    # Adaptive dynamics
    # ------------------------------------------------------------------

    def _check_stopping_times(self, system: FiniteControlSystem) -> Verdict:
        checked = 0
        for ctime in system.control_times:
            for record in system.controls:
                checked += 1
                stage = first_non_adapted_stage(ctime.of(record.id), record.filtration)
                if stage is not None:
                    return Verdict.failed(
                        "axiom-1", Section.AXIOMS,
                        Witness((record.id,), (ctime.id,), detail=f"{{S <= {stage}}} is not in G_{stage}"),
                        checked,
                    )
        return Verdict.ok("axiom-1", Section.AXIOMS, checked)

    def _check_membership(self, system: FiniteControlSystem) -> Verdict:
        checked = 0
        for ctime in system.control_times:
            for cid in system.control_ids:
                checked += 1
                if cid not in system.class_of(cid, ctime.id):
                    return Verdict.failed(
                        "axiom-2", Section.AXIOMS,
                        Witness((cid,), (ctime.id,), detail="c is not in D(c,S)"), checked,
                    )
        return Verdict.ok("axiom-2", Section.AXIOMS, checked)

    def _check_class_times(self, system: FiniteControlSystem) -> Verdict:
        checked = 0
        for ctime in system.control_times:
            for cid in system.control_ids:
                s_c = ctime.of(cid)
                mu_c = system.control(cid).measure
                for did in system.class_members(cid, ctime.id):
                    checked += 1
                    s_d = ctime.of(did)
                    mu_d = system.control(did).measure
                    for mu in (mu_c, mu_d):
                        if not times_as_equal(mu, s_c, s_d):
                            outcome = next(i for i in mu.support if s_c[i] != s_d[i])
                            return Verdict.failed(
                                "axiom-3", Section.AXIOMS,
                                Witness((cid, did), (ctime.id,), outcome=outcome,
                                        detail=f"S^c={s_c[outcome]} but S^d={s_d[outcome]}"),
                                checked,
                            )
        return Verdict.ok("axiom-3", Section.AXIOMS, checked)

    def _check_time_invariance(self, system: FiniteControlSystem) -> Verdict:
        checked = 0
        times = system.control_times
        for record in system.controls:
            for k, s in enumerate(times):
                for t in times[k + 1:]:
                    checked += 1
                    if not times_as_equal(record.measure, s.of(record.id), t.of(record.id)):
                        continue
                    if system.class_of(record.id, s.id) != system.class_of(record.id, t.id):
                        return Verdict.failed(
                            "axiom-4", Section.AXIOMS,
                            Witness((record.id,), (s.id, t.id), detail="S^c = T^c a.s. but D(c,S) != D(c,T)"),
                            checked,
                        )
        return Verdict.ok("axiom-4", Section.AXIOMS, checked)

    def _check_nesting(self, system: FiniteControlSystem) -> Verdict:
        checked = 0
        for t in system.control_times:
            for cls in _distinct_classes(system, t.id):
                for s in system.control_times:
                    if s.id == t.id:
                        continue
                    checked += 1
                    ordered = all(
                        times_as_le(system.control(d).measure, s.of(d), t.of(d)) for d in cls
                    )
                    if not ordered:
                        continue
                    for cid in sorted(cls):
                        outside = sorted(cls - system.class_of(cid, s.id))
                        if outside:
                            return Verdict.failed(
                                "axiom-5", Section.AXIOMS,
                                Witness((cid, outside[0]), (s.id, t.id),
                                        detail="S <= T on D(c,T) but D(c,T) is not inside D(c,S)"),
                                checked,
                            )
        return Verdict.ok("axiom-5", Section.AXIOMS, checked)

    def _check_partition(self, system: FiniteControlSystem) -> Verdict:
        total = len(system.control_ids)
        checked = 0
        for ctime in system.control_times:
            checked += 1
            classes = _distinct_classes(system, ctime.id)
            if sum(len(cls) for cls in classes) == total:
                continue
            for a in classes:
                for b in classes:
                    if a is not b and a & b:
                        shared = sorted(a & b)[0]
                        return Verdict.failed(
                            "axiom-6", Section.AXIOMS,
                            Witness(tuple(sorted(a | b)), (ctime.id,), detail=f"classes overlap in {shared}"),
                            checked,
                        )
            missing = sorted(set(system.control_ids) - set().union(*classes))
            return Verdict.failed(
                "axiom-6", Section.AXIOMS,
                Witness(tuple(missing), (ctime.id,), detail="classes do not cover C"), checked,
            )
        return Verdict.ok("axiom-6", Section.AXIOMS, checked)

    def _check_extremal_times(self, system: FiniteControlSystem) -> Verdict:
        everyone = frozenset(system.control_ids)
        checked = 0
        for ctime in system.control_times:
            for record in system.controls:
                value = ctime.of(record.id).constant_value(frozenset(record.measure.support))
                expected: Optional[FrozenSet[str]] = None
                if value == INFINITY:
                    expected = frozenset({record.id})
                elif value == 0:
                    expected = everyone
                if expected is None:
                    continue
                checked += 1
                actual = system.class_of(record.id, ctime.id)
                if actual != expected:
                    return Verdict.failed(
                        "axiom-7", Section.AXIOMS,
                        Witness((record.id,), (ctime.id,),
                                detail=f"S^c ≡ {'inf' if value == INFINITY else 0} but |D(c,S)| = {len(actual)}"),
                        checked,
                    )
        return Verdict.ok("axiom-7", Section.AXIOMS, checked)

    # ------------------------------------------------------------------
    # Stability under stopping
    # ------------------------------------------------------------------

    def _check_stability(self, system: FiniteControlSystem, calc: BellmanCalculator) -> Verdict:
        checked = 0
        for ctime in system.control_times:
            for cls in _distinct_classes(system, ctime.id):
                members = [cid for cid in system.control_ids if cid in cls]
                anchor = members[0]
                g_anchor = calc.sigma(anchor, ctime.id)
                mu_anchor = calc.measure(anchor)
                for did in members[1:]:
                    checked += 1
                    g_d = calc.sigma(did, ctime.id)
                    mu_d = calc.measure(did)
                    if not _same_information(g_anchor, g_d, mu_anchor.null_outcomes | mu_d.null_outcomes):
                        return Verdict.failed(
                            "stability", Section.AXIOMS,
                            Witness((anchor, did), (ctime.id,), detail="G^c_{S^c} != G^d_{S^d}"), checked,
                        )
                    if not mu_anchor.agrees_on(mu_d, g_anchor):
                        return Verdict.failed(
                            "stability", Section.AXIOMS,
                            Witness((anchor, did), (ctime.id,), detail="P^c != P^d on G^c_{S^c}"), checked,
                        )
        return Verdict.ok("stability", Section.AXIOMS, checked)


def _distinct_classes(system: FiniteControlSystem, time_id: str) -> List[FrozenSet[str]]:
    seen: Dict[FrozenSet[str], None] = {}
    for cid in system.control_ids:
        seen.setdefault(system.class_of(cid, time_id), None)
    return list(seen)


def _same_information(a: SigmaField, b: SigmaField, null: FrozenSet[int]) -> bool:
    return a == b or a.complete(null) == b.complete(null)


def validate(system: FiniteControlSystem) -> BellmanReport:
    """Axiom section of a BellmanReport."""
    return AxiomValidatorService().validate(system)


__all__ = ["AxiomValidatorService", "validate"]
