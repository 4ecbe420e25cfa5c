"""Steady-state simulation of the FCFS GI/GI/n queue, with exact oracles.

Two independent simulators share one customer sequence per seed:

* :func:`run_kw` follows the Kiefer-Wolfowitz workload vector and yields
  customer-average waiting times.
* :func:`run_event_sim` is event driven and yields time-average queue
  length ``L = max(0, Q - n)`` and the delay probability ``P(Q >= n)``.

Departures are processed before arrivals at equal timestamps.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, NamedTuple, Sequence

import numpy as np

from kingbound import dists
from kingbound.bounds import MomentSummary, UnstableQueueError
from kingbound.dists import DistributionSpec, RngStream
from kingbound.estimators import (
    SimulationError,
    StationaryEstimate,
    TailCurve,
    batch_means,
    estimate_tail,
)

logger = logging.getLogger(__name__)

__all__ = [
    "EventRun",
    "KWRun",
    "QueueSpec",
    "SimConfig",
    "SimulationError",
    "StationaryEstimate",
    "TailCurve",
    "batch_means",
    "erlang_c",
    "estimate_tail",
    "halfin_whitt_queue",
    "kw_step",
    "kw_wait_samples",
    "kw_waits",
    "pk_formula",
    "run_event_sim",
    "run_kw",
]

ARRIVAL_STREAM = 0
SERVICE_STREAM = 1

DEFAULT_TAIL_GRID = tuple(float(k) for k in range(21))


@dataclass(frozen=True)
class QueueSpec:
    """A stable FCFS GI/GI/n system."""

    arrival: DistributionSpec
    service: DistributionSpec
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise SimulationError("number of servers must be a positive integer (got %r)" % (self.n,))
        if self.rho >= 1.0:
            raise UnstableQueueError(
                "unstable queue: rho = mu_A / (n mu_S) = %.6g must be < 1 (%s)" % (self.rho, self.label)
            )

    @property
    def mu_A(self) -> float:
        return 1.0 / self.arrival.mean

    @property
    def mu_S(self) -> float:
        return 1.0 / self.service.mean

    @property
    def offered_load(self) -> float:
        """``a = mu_A / mu_S``."""
        return self.mu_A / self.mu_S

    @property
    def rho(self) -> float:
        return self.offered_load / self.n

    @property
    def label(self) -> str:
        return "%s / %s / %d" % (self.arrival.label, self.service.label, self.n)

    def moment_summary(self, r: float) -> MomentSummary:
        return MomentSummary(
            r=r,
            mS=max(1.0, dists.normalized_moment(self.service, r)),
            mA=max(1.0, dists.normalized_moment(self.arrival, r)),
            n=self.n,
            rho=self.rho,
            mean_interarrival=self.arrival.mean,
        )

    def with_rho(self, rho: float) -> QueueSpec:
        """Same distributions, arrival time rescaled to traffic intensity ``rho``."""
        if not 0 < rho < 1:
            raise UnstableQueueError("target traffic intensity %g must lie in (0, 1)" % rho)
        target_mean = 1.0 / (rho * self.n * self.mu_S)
        return replace(self, arrival=dists.with_mean(self.arrival, target_mean))

    def to_literal(self) -> dict[str, Any]:
        return {"arrival": self.arrival.to_literal(), "service": self.service.to_literal(), "n": self.n}

    @classmethod
    def from_literal(cls, literal: Mapping[str, Any]) -> QueueSpec:
        """Build from ``{"arrival": {...}, "service": {...}, "n": 2, "rho": 0.9}``.

        ``rho`` is optional; when present the arrival law is rescaled to it.
        """
        if not isinstance(literal, Mapping):
            raise SimulationError("queue literal must be a mapping (got %r)" % (literal,))
        missing = [k for k in ("arrival", "service", "n") if k not in literal]
        if missing:
            raise SimulationError("queue literal is missing %s" % ", ".join(missing))
        arrival = dists.from_literal(literal["arrival"])
        service = dists.from_literal(literal["service"])
        n = int(literal["n"])
        rho = literal.get("rho")
        if rho is not None:
            mean = 1.0 / (float(rho) * n / service.mean)
            arrival = dists.with_mean(arrival, mean)
        return cls(arrival=arrival, service=service, n=n)


@dataclass(frozen=True)
class SimConfig:
    total_arrivals: int = 1_000_000
    warmup_fraction: float = 0.2
    batch_count: int = 30
    master_seed: int = 20240601
    tail_grid: tuple[float, ...] = field(default=DEFAULT_TAIL_GRID)

    def __post_init__(self):
        if self.batch_count < 30:
            raise SimulationError("batch_count=%d must be >= 30" % self.batch_count)
        if self.total_arrivals < 10 * self.batch_count:
            raise SimulationError(
                "total_arrivals=%d must be >= 10 * batch_count (%d)" % (self.total_arrivals, 10 * self.batch_count)
            )
        if not 0.0 <= self.warmup_fraction <= 0.5:
            raise SimulationError("warmup_fraction=%g must lie in [0, 0.5]" % self.warmup_fraction)
        grid = tuple(float(v) for v in self.tail_grid)
        if any(v < 0 for v in grid) or list(grid) != sorted(grid) or not grid:
            raise SimulationError("tail_grid must be a non-empty ascending list of non-negative levels")
        object.__setattr__(self, "tail_grid", grid)

    @property
    def warmup_arrivals(self) -> int:
        return int(self.warmup_fraction * self.total_arrivals)

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any] | None = None, **overrides) -> SimConfig:
        merged = dict(values or {})
        merged.update({k: v for k, v in overrides.items() if v is not None})
        known = {"total_arrivals", "warmup_fraction", "batch_count", "master_seed", "tail_grid"}
        unknown = set(merged) - known
        if unknown:
            raise SimulationError("unknown simulation setting(s): %s" % ", ".join(sorted(unknown)))
        if "tail_grid" in merged:
            merged["tail_grid"] = tuple(merged["tail_grid"])
        for key in ("total_arrivals", "batch_count", "master_seed"):
            if key in merged:
                merged[key] = int(merged[key])
        return cls(**merged)


class KWRun(NamedTuple):
    wait_mean: StationaryEstimate
    wait_tail: TailCurve
    delay_prob: StationaryEstimate


class EventRun(NamedTuple):
    queue_mean: StationaryEstimate
    sspd: StationaryEstimate
    queue_tail: TailCurve


def customer_sequence(q: QueueSpec, cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Interarrival and service times of all customers for ``cfg.master_seed``."""
    arrivals = dists.sample(q.arrival, RngStream(cfg.master_seed, ARRIVAL_STREAM), size=cfg.total_arrivals)
    services = dists.sample(q.service, RngStream(cfg.master_seed, SERVICE_STREAM), size=cfg.total_arrivals)
    return arrivals, services


# ---------------------------------------------------------------------------
# Kiefer-Wolfowitz
# ---------------------------------------------------------------------------


def kw_step(workload: Sequence[float], service: float, interarrival: float) -> list[float]:
    """One step of ``W' = sort((W + S e_1 - A 1)^+)``."""
    w = sorted(workload)
    w[0] += service
    return sorted(max(v - interarrival, 0.0) for v in w)


def kw_waits(interarrivals, services, n: int) -> np.ndarray:
    """Waiting time of every customer, starting from an empty system.

    Equivalent to iterating :func:`kw_step`: the heap holds the epochs at
    which each server next frees up, and the sorted positive parts of
    ``free - arrival_time`` are the workload vector.
    """
    epochs = np.cumsum(np.asarray(interarrivals, dtype=np.float64)).tolist()
    sizes = np.asarray(services, dtype=np.float64).tolist()
    free = [0.0] * n
    waits = np.empty(len(epochs), dtype=np.float64)
    for k, t in enumerate(epochs):
        earliest = free[0]
        w = earliest - t if earliest > t else 0.0
        waits[k] = w
        heapq.heapreplace(free, t + w + sizes[k])
    return waits


def kw_wait_samples(q: QueueSpec, cfg: SimConfig) -> np.ndarray:
    """Post-warmup waiting times."""
    interarrivals, services = customer_sequence(q, cfg)
    waits = kw_waits(interarrivals, services, q.n)
    return waits[cfg.warmup_arrivals:]


def run_kw(q: QueueSpec, cfg: SimConfig) -> KWRun:
    """Customer-average waiting-time estimates via the Kiefer-Wolfowitz recursion."""
    logger.debug("run_kw %s: arrivals=%d seed=%d", q.label, cfg.total_arrivals, cfg.master_seed)
    waits = kw_wait_samples(q, cfg)
    return KWRun(
        wait_mean=batch_means(waits, batches=cfg.batch_count),
        wait_tail=estimate_tail(waits, cfg.tail_grid, "customer-average", batches=cfg.batch_count),
        delay_prob=batch_means((waits > 0).astype(np.float64), batches=cfg.batch_count),
    )


# ---------------------------------------------------------------------------
# Event-driven
# ---------------------------------------------------------------------------


def run_event_sim(q: QueueSpec, cfg: SimConfig) -> EventRun:
    """Time-average estimates of ``E[L]``, ``P(Q >= n)`` and ``P(L >= level)``."""
    interarrivals, services = customer_sequence(q, cfg)
    epochs = np.cumsum(interarrivals).tolist()
    sizes = services.tolist()
    total = cfg.total_arrivals
    warm = cfg.warmup_arrivals
    post = total - warm
    nb = cfg.batch_count
    n = q.n
    logger.debug("run_event_sim %s: arrivals=%d warmup=%d batches=%d", q.label, total, warm, nb)

    in_service: list[float] = []
    waiting = 0
    next_start = 0
    i = 0
    t_prev = 0.0

    seg_len: list[float] = []
    seg_dur: list[float] = []
    seg_full: list[bool] = []
    seg_group: list[int] = []

    while i < total:
        ta = epochs[i]
        departure = in_service and in_service[0] <= ta
        t = in_service[0] if departure else ta
        if i > warm and t > t_prev:
            seg_len.append(waiting)
            seg_dur.append(t - t_prev)
            seg_full.append(len(in_service) >= n)
            seg_group.append(min((i - warm - 1) * nb // post, nb - 1))
        t_prev = t
        if departure:
            heapq.heappop(in_service)
            if waiting:
                waiting -= 1
                heapq.heappush(in_service, t + sizes[next_start])
                next_start += 1
        else:
            if len(in_service) < n:
                heapq.heappush(in_service, t + sizes[next_start])
                next_start += 1
            else:
                waiting += 1
            i += 1

    if not seg_dur:
        raise SimulationError("no post-warmup time elapsed; increase total_arrivals")
    lengths = np.asarray(seg_len, dtype=np.float64)
    durations = np.asarray(seg_dur, dtype=np.float64)
    groups = np.asarray(seg_group, dtype=np.int64)
    full = np.asarray(seg_full, dtype=np.float64)
    return EventRun(
        queue_mean=batch_means(lengths, weights=durations, groups=groups),
        sspd=batch_means(full, weights=durations, groups=groups),
        queue_tail=estimate_tail(lengths, cfg.tail_grid, "time-average", weights=durations, groups=groups),
    )


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def erlang_c(n: int, a: float) -> tuple[float, float]:
    """M/M/n delay probability and mean queue length for offered load ``a``.

    Uses the Erlang-B recurrence ``B_k = a B_{k-1} / (k + a B_{k-1})``.
    """
    if a < 0:
        raise SimulationError("offered load must be >= 0 (got %g)" % a)
    if a >= n:
        raise UnstableQueueError("erlang_c: offered load a=%g must be < n=%d" % (a, n))
    if a == 0:
        return 0.0, 0.0
    b = 1.0
    for k in range(1, n + 1):
        b = a * b / (k + a * b)
    rho = a / n
    c = b / (1.0 - rho * (1.0 - b))
    return c, c * rho / (1.0 - rho)


def pk_formula(lam: float, ES: float, ES2: float) -> tuple[float, float]:
    """Pollaczek-Khinchine M/G/1 mean wait and mean queue length."""
    rho = lam * ES
    if rho >= 1.0:
        raise UnstableQueueError("pk_formula: rho = lambda E[S] = %g must be < 1" % rho)
    mean_wait = lam * ES2 / (2.0 * (1.0 - rho))
    return mean_wait, lam * mean_wait


def halfin_whitt_queue(a_hat: DistributionSpec, s_hat: DistributionSpec, n: int, B: float) -> QueueSpec:
    """GI/GI/n with interarrival ``Â / (n - B sqrt(n))`` and service ``Ŝ`` (unit means)."""
    if not B > 0:
        raise SimulationError("excess B=%g must be > 0" % B)
    if n <= B * B:
        raise SimulationError("n=%d must exceed B^2=%g" % (n, B * B))
    arrival = dists.with_mean(a_hat, 1.0 / (n - B * math.sqrt(n)))
    service = dists.with_mean(s_hat, 1.0)
    return QueueSpec(arrival=arrival, service=service, n=n)
