"""Tests for kingbound.qsim module."""

from __future__ import annotations

import numpy as np
import pytest

from kingbound.bounds import UnstableQueueError
from kingbound.dists import make_distribution
from kingbound.qsim import (
    QueueSpec,
    SimConfig,
    SimulationError,
    erlang_c,
    halfin_whitt_queue,
    kw_step,
    kw_waits,
    pk_formula,
    run_event_sim,
    run_kw,
)


def _within(estimate, exact, rel=0.05):
    return abs(estimate.point - exact) <= max(rel * exact, 3 * estimate.ci_half_width)


class TestQueueSpec:
    def test_from_literal_with_rho(self, mm2):
        assert mm2.rho == pytest.approx(0.5)
        assert mm2.arrival.mean == pytest.approx(1.0)
        assert mm2.offered_load == pytest.approx(1.0)

    def test_unstable(self, exp1):
        with pytest.raises(UnstableQueueError, match="must be < 1"):
            QueueSpec(arrival=exp1, service=exp1, n=1)

    def test_bad_server_count(self, exp1):
        with pytest.raises(SimulationError):
            QueueSpec(arrival=exp1, service=exp1, n=0)

    def test_missing_keys(self):
        with pytest.raises(SimulationError, match="missing service, n"):
            QueueSpec.from_literal({"arrival": {"family": "exponential", "mean": 1.0}})

    def test_with_rho(self, mm1):
        assert mm1.with_rho(0.9).rho == pytest.approx(0.9)
        with pytest.raises(UnstableQueueError):
            mm1.with_rho(1.2)

    def test_moment_summary(self, mm2):
        m = mm2.moment_summary(3.0)
        assert m.mS == pytest.approx(6.0)
        assert m.n == 2
        assert m.rho == pytest.approx(0.5)

    def test_literal_round_trip(self, mm2):
        assert QueueSpec.from_literal(mm2.to_literal()) == mm2


class TestSimConfig:
    @pytest.mark.parametrize("kwargs,match", [
        ({"batch_count": 10}, "batch_count"),
        ({"total_arrivals": 100}, "10 \\* batch_count"),
        ({"warmup_fraction": 0.7}, "warmup_fraction"),
        ({"tail_grid": (2.0, 1.0)}, "tail_grid"),
    ])
    def test_validation(self, kwargs, match):
        with pytest.raises(SimulationError, match=match):
            SimConfig(**kwargs)

    def test_from_mapping(self):
        cfg = SimConfig.from_mapping({"total_arrivals": "5000", "tail_grid": [0, 1]}, master_seed=3, batch_count=None)
        assert cfg.total_arrivals == 5000
        assert cfg.master_seed == 3
        assert cfg.batch_count == 30
        assert cfg.tail_grid == (0.0, 1.0)
        assert cfg.warmup_arrivals == 1000

    def test_from_mapping_unknown(self):
        with pytest.raises(SimulationError, match="unknown simulation setting"):
            SimConfig.from_mapping({"reps": 10})


class TestKieferWolfowitz:
    def test_step(self):
        assert kw_step([0.0, 0.0], 3.0, 1.0) == [0.0, 2.0]
        assert kw_step([2.0, 5.0], 1.0, 0.5) == [2.5, 4.5]

    def test_heap_matches_step(self):
        rng = np.random.default_rng(1)
        inter = rng.exponential(1.0, 500)
        serv = rng.exponential(2.5, 500)
        workload = [0.0, 0.0, 0.0]
        expected = []
        for a, s in zip(inter, serv):
            # drain by the interarrival time, then join the least-loaded server
            workload = sorted(max(v - a, 0.0) for v in workload)
            expected.append(workload[0])
            workload[0] += s
        assert np.allclose(kw_waits(inter, serv, 3), expected)

    def test_single_server_lindley(self):
        waits = kw_waits([1.0, 1.0, 1.0], [3.0, 3.0, 3.0], 1)
        assert waits.tolist() == [0.0, 2.0, 4.0]

    def test_mm1_wait(self, mm1, small_sim):
        run = run_kw(mm1, small_sim)
        # E[W] = rho / (mu_S - mu_A) = 0.5 / 0.5
        assert _within(run.wait_mean, 1.0)
        assert _within(run.delay_prob, 0.5)

    def test_mg1_wait(self, small_sim):
        q = QueueSpec.from_literal({"arrival": {"family": "exponential", "mean": 1.0},
                                    "service": {"family": "deterministic", "value": 1.0}, "n": 1, "rho": 0.5})
        wait, _queue = pk_formula(q.mu_A, 1.0, 1.0)
        assert _within(run_kw(q, small_sim).wait_mean, wait)

    def test_wait_tail_nonincreasing(self, mm1, small_sim):
        curve = run_kw(mm1, small_sim).wait_tail
        assert curve.weighting == "customer-average"
        assert all(a >= b for a, b in zip(curve.survival, curve.survival[1:]))

    def test_deterministic_replay(self, mm2):
        cfg = SimConfig(total_arrivals=20_000, master_seed=99)
        assert run_kw(mm2, cfg) == run_kw(mm2, cfg)
        other = run_kw(mm2, SimConfig(total_arrivals=20_000, master_seed=100))
        assert other.wait_mean.point != run_kw(mm2, cfg).wait_mean.point


class TestEventSim:
    def test_mm2_against_erlang_c(self, mm2, small_sim):
        delay, queue = erlang_c(2, mm2.offered_load)
        run = run_event_sim(mm2, small_sim)
        assert _within(run.sspd, delay)
        assert _within(run.queue_mean, queue)

    def test_littles_law(self, mm2, small_sim):
        kw = run_kw(mm2, small_sim)
        ev = run_event_sim(mm2, small_sim)
        expected = mm2.mu_A * kw.wait_mean.point
        slack = 3 * (ev.queue_mean.ci_half_width + mm2.mu_A * kw.wait_mean.ci_half_width)
        assert abs(ev.queue_mean.point - expected) <= slack + 0.01

    def test_deterministic_queue(self):
        q = QueueSpec.from_literal({"arrival": {"family": "deterministic", "value": 1.0},
                                    "service": {"family": "deterministic", "value": 1.0}, "n": 1, "rho": 0.5})
        cfg = SimConfig(total_arrivals=3000, warmup_fraction=0.1)
        run = run_event_sim(q, cfg)
        assert run.queue_mean.point == 0.0
        # the single server is busy half the time
        assert run.sspd.point == pytest.approx(0.5)
        assert run.queue_tail.at(1.0) == (0.0, 0.0)
        assert run_kw(q, cfg).wait_mean.point == 0.0

    def test_time_average_tail(self, mm1, small_sim):
        curve = run_event_sim(mm1, small_sim).queue_tail
        assert curve.weighting == "time-average"
        assert curve.survival[0] == 1.0
        # P(L >= 1) = P(Q >= 2) = rho^2 for M/M/1
        surv, ci = curve.at(1.0)
        assert abs(surv - 0.25) <= max(0.0125, 3 * ci)


class TestOracles:
    def test_erlang_c_single_server(self):
        delay, queue = erlang_c(1, 0.5)
        assert delay == pytest.approx(0.5)
        assert queue == pytest.approx(0.5)

    def test_erlang_c_two_servers(self):
        delay, queue = erlang_c(2, 1.0)
        assert delay == pytest.approx(1.0 / 3.0)
        assert queue == pytest.approx(1.0 / 3.0)

    def test_erlang_c_idle(self):
        assert erlang_c(3, 0.0) == (0.0, 0.0)

    def test_erlang_c_unstable(self):
        with pytest.raises(UnstableQueueError):
            erlang_c(2, 2.0)

    def test_pk(self):
        assert pk_formula(0.5, 1.0, 2.0) == pytest.approx((1.0, 0.5))
        with pytest.raises(UnstableQueueError):
            pk_formula(1.0, 1.0, 2.0)

    def test_halfin_whitt_queue(self, exp1):
        q = halfin_whitt_queue(exp1, exp1, 16, 1.0)
        assert q.rho == pytest.approx(0.75)
        with pytest.raises(SimulationError):
            halfin_whitt_queue(exp1, exp1, 4, 2.0)
        assert make_distribution("exponential", mean=1.0) == q.service
