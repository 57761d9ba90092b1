"""Domain Entities - Clean Architecture Domain Layer"""
from .bellman_report import BellmanReport, LatticeVerdict, Section, Verdict, Witness
from .control_system import (
    INFINITY_TIME_ID,
    ZERO_TIME_ID,
    ClassKey,
    ControlRecord,
    ControlTime,
    FiniteControlSystem,
)

__all__ = [
    "FiniteControlSystem",
    "ControlRecord",
    "ControlTime",
    "ClassKey",
    "ZERO_TIME_ID",
    "INFINITY_TIME_ID",
    "BellmanReport",
    "Verdict",
    "LatticeVerdict",
    "Witness",
    "Section",
]
