"""Domain Value Objects - Clean Architecture Domain Layer"""
from .discrete_process import DiscreteProcess
from .filtration import Filtration
from .prob_measure import ProbMeasure
from .random_time import INFINITY, RandomTime, format_time_value, parse_time_value
from .random_variable import RandomVariable
from .rational import format_fraction, to_fraction
from .sample_space import SampleSpace
from .sigma_field import SigmaField

__all__ = [
    "SampleSpace",
    "SigmaField",
    "ProbMeasure",
    "RandomVariable",
    "Filtration",
    "RandomTime",
    "DiscreteProcess",
    "INFINITY",
    "parse_time_value",
    "format_time_value",
    "to_fraction",
    "format_fraction",
]
