"""
Integration Tests - Monte Carlo
Seeded runs against the closed-form targets. The default runs use a few
thousand paths; the acceptance-sized runs are marked slow.
"""
import math
from dataclasses import replace

import pytest

from infrastructure.simulation import (
    NeverSwitch,
    PoissonDriftConfig,
    SwitchingConfig,
    ThresholdStrategy,
    poisson_gap_trend,
    simulate_poisson_drift,
    simulate_switching,
    value_case_b,
    value_convergence_study,
)


class TestSwitchingCaseA:
    @pytest.mark.parametrize("x", [0.0, 1.0])
    def test_every_strategy_earns_x_over_alpha(self, x):
        cfg = replace(SwitchingConfig.for_testing(), x=x)
        for strategy in (NeverSwitch(), ThresholdStrategy(cfg.epsilon, cfg.boundary)):
            result = simulate_switching(cfg, strategy)
            assert result.passed, (strategy.name, result.estimate)

    def test_antithetic_run(self):
        cfg = replace(SwitchingConfig.for_testing(), antithetic=True)
        result = simulate_switching(cfg)
        assert result.estimate.n == cfg.n_paths // 2
        assert result.passed

    @pytest.mark.slow
    def test_acceptance_size(self):
        for x in (0.0, 1.0):
            cfg = SwitchingConfig.case_a(x=x, seed=1)
            assert simulate_switching(cfg, NeverSwitch()).passed
            assert simulate_switching(cfg).passed


class TestSwitchingCaseB:
    def test_threshold_strategy_does_not_beat_value(self):
        cfg = SwitchingConfig.case_b(n_paths=2_000, block_size=512, epsilon=0.1, dt=0.01)
        result = simulate_switching(cfg)
        assert result.target == pytest.approx(value_case_b(0.0, 0.5))
        assert result.estimate.mean <= result.target + 3 * result.estimate.std_error
        assert result.mean_jumps > 0

    def test_threshold_beats_never_switching(self):
        cfg = SwitchingConfig.case_b(n_paths=2_000, block_size=512, epsilon=0.1, dt=0.01)
        never = simulate_switching(cfg, NeverSwitch())
        threshold = simulate_switching(cfg)
        assert threshold.estimate.mean > never.estimate.mean

    @pytest.mark.slow
    def test_convergence_towards_value(self):
        cfg = SwitchingConfig.case_b(n_paths=20_000, block_size=2048)
        table = value_convergence_study(cfg.with_epsilon(0.2), [0.2, 0.1, 0.05])
        assert table.nondecreasing
        assert table.below_value


class TestPoissonDrift:
    def test_estimates_match_closed_forms(self):
        report = simulate_poisson_drift(PoissonDriftConfig.for_testing())
        assert report.passed, [(name, e.mean, target) for name, e, target in report.rows()]
        assert report.bound_below_value
        assert report.tail_bound < 1e-15

    def test_gap_shrinks_with_deviation_time(self):
        cfg = replace(PoissonDriftConfig.for_testing(), n_paths=5_000)
        early, late = poisson_gap_trend(cfg, [0.1, 1.0])
        assert early.estimate.mean < late.estimate.mean
        for row in (early, late):
            assert abs(row.estimate.mean - row.closed_form) <= max(3 * row.estimate.std_error, 0.02)

    def test_seeded_runs_repeat(self):
        cfg = replace(PoissonDriftConfig.for_testing(), n_paths=3_000)
        assert simulate_poisson_drift(cfg).gap == simulate_poisson_drift(cfg, threads=2).gap

    @pytest.mark.slow
    def test_acceptance_size(self):
        report = simulate_poisson_drift(PoissonDriftConfig(seed=3))
        assert report.passed
        assert report.gap_target == pytest.approx(-math.exp(-math.log(2.0)) / 6.0)
