"""Tests for kingbound.csim module."""

from __future__ import annotations

import numpy as np
import pytest

from kingbound.bounds import UnstableQueueError
from kingbound.csim import (
    SupremumConfig,
    estimate_count_moment,
    estimate_partial_sum_moment,
    estimate_pooled_moment,
    renewal_counts,
    simulate_supremum,
    sspd_comparison,
    sup_tail_estimate,
)
from kingbound.dists import InfiniteMomentError, RngStream, make_distribution
from kingbound.estimators import SimulationError


def _close(estimate, exact, slack=0.0):
    return abs(estimate.point - exact) <= 3 * estimate.ci_half_width + slack


class TestSupremumConfig:
    @pytest.mark.parametrize("kwargs,match", [
        ({"n_prime": 0}, "n_prime"),
        ({"n_prime": 2, "reps": 999}, "reps"),
        ({"n_prime": 2, "horizon_multiplier": 4}, "horizon_multiplier"),
        ({"n_prime": 2, "max_level": 0}, "max_level"),
        ({"n_prime": 2, "workers": 0}, "workers"),
    ])
    def test_validation(self, kwargs, match):
        with pytest.raises(SimulationError, match=match):
            SupremumConfig(**kwargs)


class TestRenewalCounts:
    def test_deterministic_ordinary(self, det1):
        counts = renewal_counts(det1, RngStream(1), 10, 3.5, equilibrium=False)
        assert counts.tolist() == [3] * 10

    def test_renewal_at_t_is_counted(self, det1):
        assert renewal_counts(det1, RngStream(1), 4, 3.0, equilibrium=False).tolist() == [3] * 4

    def test_equilibrium_mean_is_linear(self):
        d = make_distribution("erlang", k=3, mean=1.0)
        counts = renewal_counts(d, RngStream(2), 40_000, 2.5, equilibrium=True)
        assert abs(counts.mean() - 2.5) <= 4 * counts.std() / np.sqrt(counts.size)

    def test_poisson_count(self, exp1):
        counts = renewal_counts(exp1, RngStream(3), 40_000, 5.0, equilibrium=False)
        assert abs(counts.mean() - 5.0) <= 4 * np.sqrt(5.0 / counts.size)


class TestSupremum:
    def test_birth_death_geometric_tail(self, exp1):
        # Poisson(1) up against Poisson(2) down: P(sup >= k) = 2^-k
        cfg = SupremumConfig(n_prime=2, reps=2000, horizon_multiplier=10.0, max_level=6.0, master_seed=4)
        samples = simulate_supremum(exp1, exp1, cfg)
        curve = sup_tail_estimate(samples, [0, 1, 2, 3])
        assert curve.survival[0] == 1.0
        for k in (1, 2, 3):
            surv, ci = curve.at(k)
            assert abs(surv - 0.5 ** k) <= 3 * ci + 0.01
        assert curve.weighting == "replication-average"
        assert curve.extra["horizon"] == samples.horizon
        assert 0.0 <= curve.extra["truncation_diag"] < 0.01

    def test_deterministic_phases(self, det1):
        # arrivals every 2 and departures every 1, both from uniform phases: P(sup >= 1) = 1/4
        arrival = make_distribution("deterministic", value=2.0)
        cfg = SupremumConfig(n_prime=1, reps=20_000, horizon_multiplier=10.0, max_level=2.0, master_seed=11)
        samples = simulate_supremum(arrival, det1, cfg)
        curve = sup_tail_estimate(samples, [0, 1, 2])
        assert curve.survival[0] == 1.0
        surv, ci = curve.at(1)
        assert abs(surv - 0.25) <= 3 * ci + 0.005
        assert curve.survival[2] == 0.0

    def test_worker_count_does_not_change_samples(self, exp1):
        base = dict(n_prime=2, reps=1000, horizon_multiplier=5.0, max_level=4.0, master_seed=8)
        one = simulate_supremum(exp1, exp1, SupremumConfig(**base, workers=1))
        three = simulate_supremum(exp1, exp1, SupremumConfig(**base, workers=3))
        assert np.array_equal(one.values, three.values)
        assert one.horizon == three.horizon

    def test_nonnegative_drift(self, exp1):
        with pytest.raises(SimulationError, match="nonnegative drift"):
            simulate_supremum(exp1, exp1, SupremumConfig(n_prime=1))

    def test_values_are_nonnegative(self, exp1, det1):
        cfg = SupremumConfig(n_prime=3, reps=1000, horizon_multiplier=5.0, max_level=2.0)
        samples = simulate_supremum(exp1, det1, cfg)
        assert samples.values.min() >= 0
        assert samples.values.size == 1000


class TestSspdComparison:
    def test_vacuous(self, exp1):
        arrival = make_distribution("exponential", mean=1.0 / 9.0)
        params, samples = sspd_comparison(arrival, exp1, 10, SupremumConfig(n_prime=1))
        assert params == (10, 0, True)
        assert samples is None

    def test_runs_sub_queue(self, exp1):
        arrival = make_distribution("exponential", mean=1.0 / 16.0)
        cfg = SupremumConfig(n_prime=1, reps=1000, horizon_multiplier=5.0)
        params, samples = sspd_comparison(arrival, exp1, 20, cfg)
        assert params == (18, 2, False)
        assert samples is not None and samples.values.size == 1000

    def test_unstable(self, exp1):
        with pytest.raises(UnstableQueueError):
            sspd_comparison(exp1, exp1, 1, SupremumConfig(n_prime=1))


class TestMomentEstimators:
    def test_partial_sum_deterministic_is_zero(self, det1):
        est = estimate_partial_sum_moment(det1, k=5, r=3.0, reps=100, seed=1)
        assert est.point == 0.0

    def test_partial_sum_variance(self, exp1):
        est = estimate_partial_sum_moment(exp1, k=10, r=2.0, reps=20_000, seed=2)
        assert _close(est, 10.0, slack=0.2)

    def test_pooled_poisson_variance(self, exp1):
        # three Poisson(2) counts pooled: variance 6
        est = estimate_pooled_moment(exp1, k=3, t=2.0, r=2.0, equilibrium=True, reps=20_000, seed=3)
        assert _close(est, 6.0, slack=0.1)

    def test_count_centered(self, exp1):
        est = estimate_count_moment(exp1, t=4.0, p=2.0, centered=True, reps=20_000, seed=4, equilibrium=True)
        assert _close(est, 4.0, slack=0.1)

    def test_count_offset(self, exp1):
        est = estimate_count_moment(exp1, t=3.0, p=1.0, centered=False, reps=20_000, seed=5, offset=1.0)
        assert _close(est, 4.0, slack=0.05)

    def test_infinite_order(self):
        d = make_distribution("pareto", shape=2.5, mean=1.0)
        with pytest.raises(InfiniteMomentError):
            estimate_pooled_moment(d, k=2, t=1.0, r=3.0, equilibrium=True, reps=100, seed=1)

    @pytest.mark.parametrize("kwargs", [{"k": 0}, {"t": 0.0}, {"reps": 1}])
    def test_argument_checks(self, exp1, kwargs):
        args = dict(k=2, t=1.0, r=2.0, equilibrium=False, reps=100, seed=1)
        args.update(kwargs)
        with pytest.raises(SimulationError):
            estimate_pooled_moment(exp1, **args)
