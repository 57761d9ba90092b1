"""
Bellman Report Entity - Clean Architecture Domain Layer
Aggregate of verdicts produced by the axiom validator, the lattice checker,
the Bellman-principle verifier and the payoff-system checker, together with
the optimal value and the optimizing controls.

Business rule: every failed verdict carries a concrete witness.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from ..exceptions.domain_exceptions import ValidationError


class Section(Enum):
    """Report section a verdict belongs to"""
    STRUCTURE = "structure"
    AXIOMS = "axioms"
    LATTICE = "lattice"
    BELLMAN = "bellman"
    PAYOFF = "payoff"
    ENVELOPE = "envelope"


@dataclass(frozen=True)
class Witness:
    """Counterexample location: which controls, which times, which outcome or event."""

    control_ids: Tuple[str, ...] = ()
    time_ids: Tuple[str, ...] = ()
    outcome: Optional[int] = None
    event: Optional[Tuple[int, ...]] = None
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None
    detail: str = ""

    def __repr__(self) -> str:
        parts = []
        if self.control_ids:
            parts.append(f"controls={list(self.control_ids)}")
        if self.time_ids:
            parts.append(f"times={list(self.time_ids)}")
        if self.outcome is not None:
            parts.append(f"outcome={self.outcome}")
        if self.lhs is not None or self.rhs is not None:
            parts.append(f"lhs={self.lhs} rhs={self.rhs}")
        if self.detail:
            parts.append(self.detail)
        return "Witness(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one named check, e.g. 'axiom-3' or 'B1'."""

    name: str
    passed: bool
    section: Section
    witness: Optional[Witness] = None
    checked: int = 0
    note: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("verdict.name", "Verdict name cannot be empty")
        if not self.passed and self.witness is None:
            raise ValidationError("verdict.witness", f"failed verdict '{self.name}' needs a witness")

    @classmethod
    def ok(cls, name: str, section: Section, checked: int = 0, note: str = "") -> "Verdict":
        return cls(name, True, section, None, checked, note)

    @classmethod
    def failed(cls, name: str, section: Section, witness: Witness, checked: int = 0) -> "Verdict":
        return cls(name, False, section, witness, checked)


@dataclass(frozen=True)
class LatticeVerdict:
    """C1, C2, C3 at one (c, S, ε, M); cap None stands for M = +∞."""

    control_id: str
    time_id: str
    eps: Fraction
    cap: Optional[Fraction]
    c1: Verdict
    c2: Verdict
    c3: Verdict

    @property
    def chain_consistent(self) -> bool:
        """C1 ⇒ C2 ⇒ C3 as implications between the computed verdicts."""
        return (not self.c1.passed or self.c2.passed) and (not self.c2.passed or self.c3.passed)

    @property
    def passed(self) -> bool:
        return self.c1.passed and self.c2.passed and self.c3.passed


@dataclass
class BellmanReport:
    """
    Aggregate root for one verification run over a FiniteControlSystem.

    value None means v = -∞ (supremum over an empty control set).
    """

    verdicts: List[Verdict] = field(default_factory=list)
    lattice: List[LatticeVerdict] = field(default_factory=list)
    value: Optional[Fraction] = None
    optimal_ids: Tuple[str, ...] = ()
    solved: bool = False
    notes: List[str] = field(default_factory=list)

    def add(self, verdict: Verdict) -> None:
        self.verdicts.append(verdict)

    def add_lattice(self, verdict: LatticeVerdict) -> None:
        self.lattice.append(verdict)

    def note(self, message: str) -> None:
        if message not in self.notes:
            self.notes.append(message)

    def set_solution(self, value: Optional[Fraction], optimal_ids: Tuple[str, ...]) -> None:
        self.value = value
        self.optimal_ids = tuple(optimal_ids)
        self.solved = True

    def merge(self, other: "BellmanReport") -> "BellmanReport":
        """Concatenate sections; the solution of other wins when it has one."""
        merged = BellmanReport(
            verdicts=self.verdicts + other.verdicts,
            lattice=self.lattice + other.lattice,
            value=self.value,
            optimal_ids=self.optimal_ids,
            solved=self.solved,
            notes=list(self.notes),
        )
        for message in other.notes:
            merged.note(message)
        if other.solved:
            merged.set_solution(other.value, other.optimal_ids)
        return merged

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def section(self, section: Section) -> List[Verdict]:
        return [v for v in self.verdicts if v.section is section]

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def failures(self) -> List[Verdict]:
        failed = [v for v in self.verdicts if not v.passed]
        for lv in self.lattice:
            failed.extend(v for v in (lv.c1, lv.c2, lv.c3) if not v.passed)
        return failed

    def section_passed(self, section: Section) -> bool:
        return all(v.passed for v in self.section(section))

    @property
    def passed(self) -> bool:
        return not self.failures()

    @property
    def chain_consistent(self) -> bool:
        return all(lv.chain_consistent for lv in self.lattice)

    @property
    def value_display(self) -> str:
        return "-inf" if self.value is None else str(self.value)
