"""Infrastructure Simulation - Monte Carlo engines and the verification-lemma checker"""
from .convergence_study import ConvergenceRow, ConvergenceTable, value_convergence_study
from .cost_kernels import CaseACost, CaseBCost, CustomCost, gaussian_expectation, hermite_rule
from .estimate import Estimate
from .poisson_drift import GapTrendRow, PoissonDriftReport, poisson_gap_trend, simulate_poisson_drift
from .simulation_config import PoissonDriftConfig, SwitchingConfig, VerificationInput
from .switching_engine import (
    CallbackStrategy,
    NeverSwitch,
    ObservedState,
    SwitchingResult,
    ThresholdStrategy,
    simulate_switching,
    tail_bound,
    value_case_a,
    value_case_b,
)
from .verification_lemma import ConditionResult, VerificationReport, check_verification_conditions

__all__ = [
    "CallbackStrategy",
    "CaseACost",
    "CaseBCost",
    "ConditionResult",
    "ConvergenceRow",
    "ConvergenceTable",
    "CustomCost",
    "Estimate",
    "GapTrendRow",
    "NeverSwitch",
    "ObservedState",
    "PoissonDriftConfig",
    "PoissonDriftReport",
    "SwitchingConfig",
    "SwitchingResult",
    "ThresholdStrategy",
    "VerificationInput",
    "VerificationReport",
    "check_verification_conditions",
    "gaussian_expectation",
    "hermite_rule",
    "poisson_gap_trend",
    "simulate_poisson_drift",
    "simulate_switching",
    "tail_bound",
    "value_case_a",
    "value_case_b",
    "value_convergence_study",
]
