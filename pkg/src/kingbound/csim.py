"""Monte Carlo for the bounding process and for renewal/partial-sum moments.

The bounding process is ``A(t) - sum_{i<=n'} N_i(t)`` where ``A`` and every
``N_i`` are equilibrium renewal counting processes.  It moves by +1 at
arrivals and -1 at pooled renewals, so its supremum over ``[0, T]`` is the
maximum over event epochs (and 0 at ``t = 0``).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from kingbound import dists
from kingbound.bounds import UnstableQueueError, sspd_comparison_params
from kingbound.dists import DistributionSpec, RngStream
from kingbound.estimators import SimulationError, StationaryEstimate, TailCurve, batch_means, estimate_tail

logger = logging.getLogger(__name__)

TRUNCATION_THRESHOLD = 0.01
MAX_HORIZON_DOUBLINGS = 3
LATE_FRACTION = 0.9

# random draws per vectorized block when simulating many renewal processes at once
_DRAW_BUDGET = 2_000_000


@dataclass(frozen=True)
class SupremumConfig:
    n_prime: int
    reps: int = 10_000
    horizon_multiplier: float = 20.0
    master_seed: int = 20240601
    max_level: float = 20.0
    workers: int = 1

    def __post_init__(self):
        if int(self.n_prime) != self.n_prime or self.n_prime < 1:
            raise SimulationError("n_prime must be a positive integer (got %r)" % (self.n_prime,))
        if self.reps < 1000:
            raise SimulationError("reps=%d must be >= 1000" % self.reps)
        if self.horizon_multiplier < 5:
            raise SimulationError("horizon_multiplier=%g must be >= 5" % self.horizon_multiplier)
        if self.max_level <= 0:
            raise SimulationError("max_level=%g must be > 0" % self.max_level)
        if self.workers < 1:
            raise SimulationError("workers=%d must be >= 1" % self.workers)


class SupSamples(NamedTuple):
    values: np.ndarray
    truncation_diag: float
    horizon: float


# ---------------------------------------------------------------------------
# Renewal epochs
# ---------------------------------------------------------------------------


def _epoch_matrix(d: DistributionSpec, rng: RngStream, streams: int, horizon: float, equilibrium: bool) -> np.ndarray:
    """Renewal epochs of ``streams`` independent processes, one row each.

    Every row is extended until its last epoch exceeds ``horizon``; entries
    beyond the horizon are to be ignored by callers.
    """
    draw = dists.equilibrium_sample if equilibrium else dists.sample
    first = np.asarray(draw(d, rng, size=streams), dtype=np.float64)
    block = max(8, int(math.ceil(1.25 * horizon / d.mean)) + 8)
    columns = [first[:, None]]
    last = first
    while np.any(last <= horizon):
        chunk = last[:, None] + np.cumsum(dists.sample(d, rng, size=(streams, block)), axis=1)
        columns.append(chunk)
        last = chunk[:, -1]
    return np.concatenate(columns, axis=1)


def renewal_counts(d: DistributionSpec, rng: RngStream, streams: int, t: float, equilibrium: bool) -> np.ndarray:
    """``N(t)`` per stream, counting a renewal exactly at ``t``."""
    return (_epoch_matrix(d, rng, streams, t, equilibrium) <= t).sum(axis=1)


# ---------------------------------------------------------------------------
# Supremum
# ---------------------------------------------------------------------------


def _one_supremum(arrival: DistributionSpec, service: DistributionSpec, n_prime: int, horizon: float,
                  rng: RngStream) -> tuple[int, bool]:
    arrivals = _epoch_matrix(arrival, rng, 1, horizon, equilibrium=True).ravel()
    arrivals = arrivals[arrivals <= horizon]
    renewals = _epoch_matrix(service, rng, n_prime, horizon, equilibrium=True)
    renewals = renewals[renewals <= horizon]

    times = np.concatenate([arrivals, renewals])
    if times.size == 0:
        return 0, False
    steps = np.concatenate([np.ones(arrivals.size, dtype=np.int64), -np.ones(renewals.size, dtype=np.int64)])
    # departures first at equal times
    order = np.lexsort((steps, times))
    path = np.cumsum(steps[order])
    late = times[order] > LATE_FRACTION * horizon
    early_max = max(0, int(path[~late].max())) if np.any(~late) else 0
    late_max = int(path[late].max()) if np.any(late) else 0
    return max(early_max, late_max), late_max > early_max


def _supremum_chunk(arrival, service, cfg: SupremumConfig, horizon: float, reps: range) -> list[tuple[int, bool]]:
    return [_one_supremum(arrival, service, cfg.n_prime, horizon, RngStream(cfg.master_seed, rep)) for rep in reps]


def _run_supremum(arrival, service, cfg: SupremumConfig, horizon: float) -> SupSamples:
    chunk = max(1, math.ceil(cfg.reps / (4 * cfg.workers)))
    ranges = [range(lo, min(lo + chunk, cfg.reps)) for lo in range(0, cfg.reps, chunk)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda r: _supremum_chunk(arrival, service, cfg, horizon, r), ranges))
    else:
        parts = [_supremum_chunk(arrival, service, cfg, horizon, r) for r in ranges]
    flat = [item for part in parts for item in part]
    values = np.fromiter((v for v, _ in flat), dtype=np.int64, count=len(flat))
    diag = sum(1 for _, grew in flat if grew) / len(flat)
    return SupSamples(values=values, truncation_diag=diag, horizon=horizon)


def simulate_supremum(arrival: DistributionSpec, service: DistributionSpec, cfg: SupremumConfig) -> SupSamples:
    """Finite-horizon suprema of the bounding process, one per replication.

    The horizon is ``horizon_multiplier * max_level / (n' mu_S - mu_A)`` and
    is doubled (at most three times) while the truncation diagnostic is at
    least 0.01.
    """
    mu_A = 1.0 / arrival.mean
    mu_S = 1.0 / service.mean
    drift = cfg.n_prime * mu_S - mu_A
    if drift <= 0:
        raise SimulationError(
            "bounding process has nonnegative drift: mu_A=%g >= n' mu_S=%g" % (mu_A, cfg.n_prime * mu_S)
        )
    horizon = cfg.horizon_multiplier * cfg.max_level / drift
    for attempt in range(MAX_HORIZON_DOUBLINGS + 1):
        logger.debug("simulate_supremum n'=%d reps=%d horizon=%.6g seed=%d", cfg.n_prime, cfg.reps, horizon,
                     cfg.master_seed)
        result = _run_supremum(arrival, service, cfg, horizon)
        if result.truncation_diag < TRUNCATION_THRESHOLD:
            return result
        if attempt < MAX_HORIZON_DOUBLINGS:
            logger.debug("truncation diagnostic %.4f >= %.2f; doubling horizon", result.truncation_diag,
                         TRUNCATION_THRESHOLD)
            horizon *= 2.0
    logger.warning("truncation diagnostic still %.4f after %d horizon doublings (horizon %.6g)",
                   result.truncation_diag, MAX_HORIZON_DOUBLINGS, result.horizon)
    return result


def sup_tail_estimate(s: SupSamples, grid: Sequence[float]) -> TailCurve:
    """``P(sup >= level)`` with binomial intervals over replications."""
    curve = estimate_tail(s.values, grid, "replication-average")
    curve.extra.update({"truncation_diag": s.truncation_diag, "horizon": s.horizon})
    return curve


def sspd_comparison(arrival: DistributionSpec, service: DistributionSpec, n: int,
                    cfg: SupremumConfig) -> tuple[tuple[int, int, bool], SupSamples | None]:
    """Supremum samples for the delay-probability comparison.

    Runs :func:`simulate_supremum` with ``n' = n - floor((n - mu_A/mu_S)/2)``;
    the delay probability is compared with ``P(sup >= threshold)``.  Returns
    ``None`` samples when the threshold is 0.
    """
    mu_A = 1.0 / arrival.mean
    mu_S = 1.0 / service.mean
    if mu_A >= n * mu_S:
        raise UnstableQueueError("sspd_comparison: mu_A=%g must be < n mu_S=%g" % (mu_A, n * mu_S))
    params = sspd_comparison_params(n, mu_A, mu_S)
    n_prime, threshold, vacuous = params
    if vacuous:
        logger.warning("delay-probability comparison is vacuous for n=%d, mu_A/mu_S=%.6g (threshold 0)", n,
                       mu_A / mu_S)
        return params, None
    sub = SupremumConfig(
        n_prime=n_prime,
        reps=cfg.reps,
        horizon_multiplier=cfg.horizon_multiplier,
        master_seed=cfg.master_seed,
        max_level=max(float(threshold), 1.0),
        workers=cfg.workers,
    )
    return params, simulate_supremum(arrival, service, sub)


# ---------------------------------------------------------------------------
# Moment estimators
# ---------------------------------------------------------------------------


def _chunks(reps: int, draws_per_rep: float) -> list[tuple[int, int]]:
    size = max(1, int(_DRAW_BUDGET // max(draws_per_rep, 1.0)))
    return [(lo, min(lo + size, reps)) for lo in range(0, reps, size)]


def _draws_per_stream(d: DistributionSpec, horizon: float) -> float:
    return 1.25 * horizon / d.mean + 9.0


def _estimate(values: np.ndarray) -> StationaryEstimate:
    return batch_means(values, batches=min(30, values.size))


def _check_reps(reps: int) -> None:
    if reps < 2:
        raise SimulationError("reps=%d must be >= 2" % reps)


def _check_order(d: DistributionSpec, order: float) -> None:
    if order >= d.moment_order_available:
        raise dists.InfiniteMomentError(
            "moment of order %g is infinite for %s (available below %g)" % (order, d.label, d.moment_order_available)
        )


def estimate_pooled_moment(service: DistributionSpec, k: int, t: float, r: float, equilibrium: bool, reps: int,
                           seed: int) -> StationaryEstimate:
    """``E|sum_{i<=k} N_i(t) - k mu_S t|^r`` over ``reps`` replications."""
    if k < 1:
        raise SimulationError("k=%r must be >= 1" % k)
    if t <= 0:
        raise SimulationError("t=%g must be > 0" % t)
    _check_reps(reps)
    _check_order(service, r)
    logger.debug("estimate_pooled_moment %s k=%d t=%g r=%g equilibrium=%s reps=%d seed=%d", service.label, k, t, r,
                 equilibrium, reps, seed)
    centre = k * t / service.mean
    values = np.empty(reps, dtype=np.float64)
    for index, (lo, hi) in enumerate(_chunks(reps, k * _draws_per_stream(service, t))):
        counts = renewal_counts(service, RngStream(seed, index), (hi - lo) * k, t, equilibrium)
        values[lo:hi] = np.abs(counts.reshape(hi - lo, k).sum(axis=1) - centre) ** r
    return _estimate(values)


def estimate_partial_sum_moment(d: DistributionSpec, k: int, r: float, reps: int, seed: int) -> StationaryEstimate:
    """``E|k - mu_A sum_{i<=k} A_i|^r`` over ``reps`` replications."""
    if k < 1:
        raise SimulationError("k=%r must be >= 1" % k)
    _check_reps(reps)
    _check_order(d, r)
    values = np.empty(reps, dtype=np.float64)
    for index, (lo, hi) in enumerate(_chunks(reps, k)):
        draws = dists.sample(d, RngStream(seed, index), size=(hi - lo, k))
        values[lo:hi] = np.abs(k - draws.sum(axis=1) / d.mean) ** r
    return _estimate(values)


def estimate_count_moment(d: DistributionSpec, t: float, p: float, centered: bool, reps: int, seed: int,
                          equilibrium: bool = False, offset: float = 0.0) -> StationaryEstimate:
    """``E[(N(t) + offset)^p]`` or, when ``centered``, ``E|N(t) - mu t|^p``.

    ``N`` is ordinary unless ``equilibrium`` is set.
    """
    if p < 1:
        raise SimulationError("p=%g must be >= 1" % p)
    if t <= 0:
        raise SimulationError("t=%g must be > 0" % t)
    _check_reps(reps)
    values = np.empty(reps, dtype=np.float64)
    for index, (lo, hi) in enumerate(_chunks(reps, _draws_per_stream(d, t))):
        counts = renewal_counts(d, RngStream(seed, index), hi - lo, t, equilibrium).astype(np.float64)
        if centered:
            values[lo:hi] = np.abs(counts - t / d.mean) ** p
        else:
            values[lo:hi] = (counts + offset) ** p
    return _estimate(values)
