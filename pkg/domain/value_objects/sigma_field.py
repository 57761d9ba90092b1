"""
Sigma Field Value Object - Clean Architecture Domain Layer

A σ-field on a finite sample space {0..n-1}, stored as its atom partition.

Canonical form: every block is sorted ascending and blocks are ordered by
their least element. Two σ-fields are equal iff their canonical partitions
are equal, so dataclass equality decides equality of σ-fields.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import (
    AbstractSet,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    Iterator,
    List,
    Sequence,
    Tuple,
)

from domain.exceptions import DimensionMismatchError, ValidationError

Atom = Tuple[int, ...]
Event = FrozenSet[int]

# Upper bound on atoms for exhaustive event enumeration (2^16 unions).
MAX_ENUMERABLE_ATOMS = 16


def canonical_blocks(blocks: Iterable[Iterable[int]]) -> Tuple[Atom, ...]:
    """Sort each block and order blocks by their least element; drop empty blocks."""
    normalized = [tuple(sorted(block)) for block in blocks]
    normalized = [block for block in normalized if block]
    return tuple(sorted(normalized, key=lambda block: block[0]))


@dataclass(frozen=True)
class SigmaField:
    """
    Immutable σ-field on n outcomes, represented by its atoms.

    Construction canonicalizes the given blocks, then checks that they form a
    partition of {0..n-1}.
    """

    n: int
    atoms: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", canonical_blocks(self.atoms))
        self._validate_partition()

    def _validate_partition(self) -> None:
        if self.n < 1:
            raise ValidationError("n", f"sample space size must be >= 1, got {self.n}")
        seen = [False] * self.n
        for block in self.atoms:
            for i in block:
                if not 0 <= i < self.n:
                    raise ValidationError("atoms", f"outcome index {i} outside 0..{self.n - 1}")
                if seen[i]:
                    raise ValidationError("atoms", f"outcome {i} appears in two atoms")
                seen[i] = True
        if not all(seen):
            missing = [i for i, hit in enumerate(seen) if not hit]
            raise ValidationError("atoms", f"atoms do not cover outcomes {missing}")

    # ------------------------------------------------------------------
    # Factories
    # ------------------------------------------------------------------

    @classmethod
    def trivial(cls, n: int) -> "SigmaField":
        return cls(n, (tuple(range(n)),))

    @classmethod
    def discrete(cls, n: int) -> "SigmaField":
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable]) -> "SigmaField":
        """σ-field whose atoms are the level sets of an outcome -> label map."""
        groups: Dict[Hashable, List[int]] = {}
        for i, label in enumerate(labels):
            groups.setdefault(label, []).append(i)
        return cls(len(labels), tuple(tuple(block) for block in groups.values()))

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @cached_property
    def _atom_index(self) -> Tuple[int, ...]:
        index = [0] * self.n
        for k, block in enumerate(self.atoms):
            for i in block:
                index[i] = k
        return tuple(index)

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    @property
    def is_trivial(self) -> bool:
        return len(self.atoms) == 1

    @property
    def is_discrete(self) -> bool:
        return len(self.atoms) == self.n

    def labels(self) -> Tuple[int, ...]:
        """Atom number of each outcome (0-based, canonical order)."""
        return self._atom_index

    def atom_of(self, outcome: int) -> Atom:
        return self.atoms[self._atom_index[outcome]]

    def contains(self, event: AbstractSet[int]) -> bool:
        """True iff the event is a union of atoms."""
        return all(
            all(j in event for j in self.atom_of(i)) for i in event
        )

    def is_measurable(self, values: Sequence[Hashable]) -> bool:
        """True iff an outcome -> value map is constant on every atom."""
        self._check_size(len(values), "values")
        return all(len({values[i] for i in block}) == 1 for block in self.atoms)

    def is_coarser_than(self, other: "SigmaField") -> bool:
        """True iff self ⊂ other, i.e. every atom of other lies inside one atom of self."""
        self._check_size(other.n, "sigma field")
        return all(
            len({self._atom_index[i] for i in block}) == 1 for block in other.atoms
        )

    # ------------------------------------------------------------------
    # Constructions
    # ------------------------------------------------------------------

    def refine(self, other: "SigmaField") -> "SigmaField":
        """Common refinement: the coarsest σ-field containing both."""
        self._check_size(other.n, "sigma field")
        return SigmaField.from_labels(
            tuple(zip(self._atom_index, other.labels()))
        )

    def trace(self, event: AbstractSet[int]) -> Tuple[Atom, ...]:
        """Partition restriction g|_A: nonempty intersections of atoms with the event."""
        return canonical_blocks(
            tuple(i for i in block if i in event) for block in self.atoms
        )

    def complete(self, null_outcomes: AbstractSet[int]) -> "SigmaField":
        """
        Completion with respect to a measure whose null set is null_outcomes.

        Null outcomes become singleton atoms and every atom keeps its non-null
        part, so two σ-fields agree up to null sets iff their completions are equal.
        """
        blocks: List[Tuple[int, ...]] = []
        for block in self.atoms:
            blocks.append(tuple(i for i in block if i not in null_outcomes))
        blocks.extend((i,) for i in sorted(null_outcomes))
        return SigmaField(self.n, canonical_blocks(blocks))

    def events(self) -> Iterator[Event]:
        """Every event of the σ-field (all unions of atoms), smallest first."""
        if self.atom_count > MAX_ENUMERABLE_ATOMS:
            raise ValidationError(
                "atoms",
                f"{self.atom_count} atoms exceed the enumeration limit {MAX_ENUMERABLE_ATOMS}",
            )
        for size in range(self.atom_count + 1):
            for chosen in combinations(self.atoms, size):
                yield frozenset(i for block in chosen for i in block)

    def _check_size(self, actual: int, what: str) -> None:
        if actual != self.n:
            raise DimensionMismatchError(what, expected=self.n, actual=actual)

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, block)) + "}" for block in self.atoms)
        return f"SigmaField[{body}]"
