"""Tests for kingbound.estimators module."""

from __future__ import annotations

import numpy as np
import pytest

from kingbound.estimators import (
    SimulationError,
    StationaryEstimate,
    TailCurve,
    batch_means,
    estimate_tail,
)


class TestBatchMeans:
    def test_constant_series(self):
        est = batch_means(np.full(300, 2.5), batches=30)
        assert est.point == 2.5
        assert est.ci_half_width == 0.0
        assert est.batches == 30
        assert est.effective_samples == 300

    def test_weighted_point(self):
        est = batch_means([1.0, 3.0], weights=[3.0, 1.0], batches=2)
        assert est.point == pytest.approx(1.5)

    def test_ci_covers_iid_mean(self):
        rng = np.random.default_rng(3)
        est = batch_means(rng.exponential(2.0, 60_000), batches=30)
        assert abs(est.point - 2.0) <= 2 * est.ci_half_width + 0.02
        assert est.upper == pytest.approx(est.point + est.ci_half_width)

    def test_explicit_groups(self):
        est = batch_means([1.0, 1.0, 5.0, 5.0], groups=[0, 0, 1, 1])
        assert est.batches == 2
        assert est.point == 3.0
        assert est.ci_half_width > 0

    def test_empty(self):
        with pytest.raises(SimulationError, match="empty"):
            batch_means([])

    def test_zero_weights(self):
        with pytest.raises(SimulationError, match="sum to zero"):
            batch_means([1.0, 2.0], weights=[0.0, 0.0])

    def test_to_dict(self):
        assert StationaryEstimate(1.0, 0.1, 30, 100).to_dict() == {
            "point": 1.0, "ci_half_width": 0.1, "batches": 30, "effective_samples": 100,
        }


class TestEstimateTail:
    def test_counts_are_inclusive(self):
        curve = estimate_tail([0, 1, 1, 2], [0, 1, 2, 3])
        assert curve.survival == (1.0, 0.75, 0.25, 0.0)

    def test_nonincreasing(self):
        rng = np.random.default_rng(5)
        curve = estimate_tail(rng.poisson(3.0, 10_000), list(range(12)))
        assert all(a >= b for a, b in zip(curve.survival, curve.survival[1:]))

    def test_time_weighted(self):
        # level 0 held for 3 time units, level 2 for 1
        curve = estimate_tail([0, 2], [1], weighting="time-average", weights=[3.0, 1.0])
        assert curve.survival == (0.25,)
        assert curve.effective_samples == round(16 / 10)

    def test_binomial_ci(self):
        curve = estimate_tail(np.arange(100), [50])
        surv, ci = curve.at(50)
        assert surv == 0.5
        assert ci == pytest.approx(1.959964 * np.sqrt(0.25 / 100), rel=1e-5)

    def test_batched_ci(self):
        rng = np.random.default_rng(8)
        curve = estimate_tail(rng.exponential(1.0, 30_000), [1.0], batches=30)
        surv, ci = curve.at(1.0)
        assert abs(surv - np.exp(-1.0)) <= 3 * ci

    def test_replication_groups(self):
        curve = estimate_tail([0, 5, 0, 0], [1], weighting="replication-average", groups=[0, 0, 1, 1])
        assert curve.survival == (0.25,)
        assert curve.ci_half_widths[0] > 0

    def test_unknown_weighting(self):
        with pytest.raises(SimulationError, match="unknown weighting"):
            estimate_tail([1.0], [0], weighting="median")

    def test_unsorted_grid(self):
        with pytest.raises(SimulationError, match="sorted"):
            estimate_tail([1.0], [2, 1])

    def test_level_off_grid(self):
        curve = estimate_tail([1.0, 2.0], [0, 1])
        with pytest.raises(SimulationError, match="not on the grid"):
            curve.at(0.5)

    def test_curve_length_mismatch(self):
        with pytest.raises(SimulationError):
            TailCurve((0.0, 1.0), (1.0,), (0.0,), "customer-average")
