"""
Random finite objects for the campaigns.

All draws go through a numpy Generator and are converted to plain Python
ints and Fractions before they reach the domain layer.
"""
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from domain.value_objects import (
    INFINITY,
    DiscreteProcess,
    Filtration,
    ProbMeasure,
    RandomTime,
    SigmaField,
    format_time_value,
)


def random_process(rng: np.random.Generator, n: int, horizon: int, alphabet: int = 3,
                   constant_start: bool = False) -> DiscreteProcess:
    table = rng.integers(0, alphabet, size=(n, horizon + 1))
    if constant_start:
        table[:, 0] = 0
    return DiscreteProcess(tuple(tuple(int(v) for v in row) for row in table))


def random_measure(rng: np.random.Generator, n: int, null_outcome: Optional[int] = None) -> ProbMeasure:
    """Positive integer weights normalized to 1; null_outcome, if given, gets weight 0."""
    weights = [int(w) for w in rng.integers(1, 6, size=n)]
    if null_outcome is not None:
        weights[null_outcome] = 0
    total = sum(weights)
    return ProbMeasure.from_values([Fraction(w, total) for w in weights])


def random_stopping_time(rng: np.random.Generator, f: Filtration, stop_probability: float = 0.4,
                         allow_infinite: bool = True) -> RandomTime:
    """
    Walks the atoms of f forward and stops each surviving atom with a fixed
    probability. Atoms alive after the horizon get ∞ (or the horizon).
    """
    values: List[Any] = [None] * f.n
    alive = set(range(f.n))
    for t in range(f.horizon + 1):
        for atom in f.at(t).atoms:
            if atom[0] in alive and rng.random() < stop_probability:
                for i in atom:
                    values[i] = t
                alive.difference_update(atom)
    tail = INFINITY if allow_infinite and rng.random() < 0.5 else f.horizon
    for i in alive:
        values[i] = tail
    return RandomTime(tuple(values))


def random_time(rng: np.random.Generator, n: int, horizon: int) -> RandomTime:
    """Any map into {0..horizon, ∞}; usually not a stopping time."""
    draws = rng.integers(0, horizon + 2, size=n)
    return RandomTime(tuple(INFINITY if int(v) > horizon else int(v) for v in draws))


def glued_process(rng: np.random.Generator, x: DiscreteProcess, s: RandomTime, alphabet: int = 3) -> DiscreteProcess:
    """A process equal to x up to s and redrawn strictly after s."""
    rows = []
    for i, row in enumerate(x.rows):
        rows.append(tuple(
            v if t <= s[i] else int(rng.integers(0, alphabet)) for t, v in enumerate(row)
        ))
    return DiscreteProcess(tuple(rows))


def redraw_outcome(rng: np.random.Generator, x: DiscreteProcess, outcome: int, alphabet: int = 3) -> DiscreteProcess:
    rows = list(x.rows)
    rows[outcome] = tuple(int(v) for v in rng.integers(0, alphabet, size=x.horizon + 1))
    return DiscreteProcess(tuple(rows))


def random_coarsening(rng: np.random.Generator, g: SigmaField) -> SigmaField:
    """Merges the atoms of g into randomly chosen groups."""
    groups = rng.integers(0, max(1, g.atom_count), size=g.atom_count)
    labels = [0] * g.n
    for group, atom in zip(groups, g.atoms):
        for i in atom:
            labels[i] = int(group)
    return SigmaField.from_labels(labels)


def describe(**objects: Any) -> Dict[str, Any]:
    """JSON-ready dump of a counterexample."""
    out: Dict[str, Any] = {}
    for key, value in objects.items():
        if isinstance(value, DiscreteProcess):
            out[key] = [list(row) for row in value.rows]
        elif isinstance(value, RandomTime):
            out[key] = [format_time_value(v) for v in value.values]
        elif isinstance(value, ProbMeasure):
            out[key] = [str(w) for w in value.weights]
        else:
            out[key] = value
    return out
