"""Verification checks: bounds against estimates, and estimates against each other."""

from __future__ import annotations

import logging
import math
from typing import Any, NamedTuple, Sequence

import numpy as np
from scipy import stats

from kingbound import dists, qsim
from kingbound.bounds import (
    MomentSummary,
    halfin_whitt_bounds,
    heavy_traffic_targets,
)
from kingbound.csim import estimate_pooled_moment
from kingbound.dists import DistributionSpec
from kingbound.estimators import StationaryEstimate, TailCurve
from kingbound.harness.records import CampaignError, VerificationRecord
from kingbound.qsim import QueueSpec, SimConfig
from kingbound.xnum import LogScalar

logger = logging.getLogger(__name__)

# one-sided 99% normal quantile
ONE_SIDED_99 = 2.58
JOINT_CI_FACTOR = 3.0
DEFAULT_KS_THRESHOLD = 0.05
DEFAULT_KS_GATE_RHO = 0.98
SCALING_RATIO_LIMIT = 2.0
SLOPE_TOLERANCE = 0.2


def _point_ci(est) -> tuple[float, float]:
    if isinstance(est, StationaryEstimate):
        return est.point, est.ci_half_width
    try:
        point, ci = est
    except (TypeError, ValueError):
        raise CampaignError("estimate must be a StationaryEstimate or a (point, ci) pair (got %r)" % (est,)) from None
    return float(point), float(ci)


def dominance_check(
    bound: LogScalar,
    est,
    *,
    check_id: str = "dominance",
    probability: bool = False,
    bound_unit: str = "",
    estimate_unit: str | None = None,
    metadata: dict[str, Any] | None = None,
) -> VerificationRecord:
    """Compare an upper bound with an estimate of the same quantity.

    Passes iff ``point + 2.58 ci <= bound``, compared in log10 space.  A
    probability bound at or above 1 yields a vacuous verdict.
    """
    if estimate_unit is not None and estimate_unit != bound_unit:
        raise CampaignError("%s: bound is in %r but estimate is in %r" % (check_id, bound_unit, estimate_unit))
    point, ci = _point_ci(est)
    upper = point + ONE_SIDED_99 * ci
    meta = dict(metadata or {})
    if bound_unit:
        meta["unit"] = bound_unit

    if bound.is_zero:
        verdict = "pass" if upper <= 0.0 else "fail"
        meta["bound"] = "0"
        return VerificationRecord(check_id, None, point, ci, verdict, meta)

    if probability and bound.exp10 >= 0.0:
        verdict = "vacuous"
    elif upper <= 0.0:
        verdict = "pass"
    else:
        verdict = "pass" if math.log10(upper) <= bound.exp10 else "fail"
    return VerificationRecord(check_id, bound.exp10, point, ci, verdict, meta)


def comparison_check(
    queue_tail: TailCurve,
    sup_tail: TailCurve,
    *,
    check_id: str = "comparison",
    metadata: dict[str, Any] | None = None,
) -> list[VerificationRecord]:
    """Per level: pass iff queue survival <= sup survival + 3 joint CI half-widths."""
    if tuple(queue_tail.grid) != tuple(sup_tail.grid):
        raise CampaignError("%s: tail grids differ (%s vs %s)" % (check_id, list(queue_tail.grid),
                                                                  list(sup_tail.grid)))
    records = []
    for level, q, cq, s, cs in zip(queue_tail.grid, queue_tail.survival, queue_tail.ci_half_widths,
                                   sup_tail.survival, sup_tail.ci_half_widths):
        margin = JOINT_CI_FACTOR * math.sqrt(cq * cq + cs * cs)
        verdict = "pass" if q <= s + margin else "fail"
        meta = dict(metadata or {})
        meta.update({"level": level, "sup_survival": s, "sup_ci": cs})
        records.append(VerificationRecord(check_id, None, q, cq, verdict, meta))
    return records


def oracle_check(
    est: StationaryEstimate,
    exact: float,
    *,
    check_id: str = "oracle",
    rel_tol: float = 0.03,
    metadata: dict[str, Any] | None = None,
) -> VerificationRecord:
    """Pass iff ``|point - exact| <= max(rel_tol * exact, 3 ci)``."""
    tolerance = max(rel_tol * abs(exact), JOINT_CI_FACTOR * est.ci_half_width)
    verdict = "pass" if abs(est.point - exact) <= tolerance else "fail"
    meta = dict(metadata or {})
    meta["exact"] = exact
    return VerificationRecord(check_id, None, est.point, est.ci_half_width, verdict, meta)


class HeavyTrafficPoint(NamedTuple):
    rho: float
    ks_stat: float
    target_mean: float
    gated: bool


def heavy_traffic_check(
    base: QueueSpec,
    rho_list: Sequence[float],
    cfg: SimConfig,
    *,
    gate_rho: float = DEFAULT_KS_GATE_RHO,
) -> list[HeavyTrafficPoint]:
    """KS distance between ``(1 - rho) W`` and its exponential weak limit.

    The target mean is ``E[A] (c_A^2 + c_S^2) / 2`` at each ``rho``; points
    with ``rho < gate_rho`` are reported but not gated.
    """
    points = []
    for rho in rho_list:
        q = base.with_rho(rho)
        target, _queue_scale = heavy_traffic_targets(q.arrival.scv, q.service.scv, q.arrival.mean)
        waits = qsim.kw_wait_samples(q, cfg)
        ks = float(stats.kstest((1.0 - rho) * waits, "expon", args=(0.0, target)).statistic)
        gated = rho >= gate_rho
        if not gated:
            logger.warning("heavy-traffic KS at rho=%.4g is %.4f (reported, not gated)", rho, ks)
        points.append(HeavyTrafficPoint(rho=rho, ks_stat=ks, target_mean=target, gated=gated))
    return points


def heavy_traffic_records(
    points: Sequence[HeavyTrafficPoint],
    *,
    threshold: float = DEFAULT_KS_THRESHOLD,
    check_id: str = "heavy-traffic",
    metadata: dict[str, Any] | None = None,
) -> list[VerificationRecord]:
    records = []
    for point in points:
        verdict = "fail" if point.gated and point.ks_stat >= threshold else "pass"
        meta = dict(metadata or {})
        meta.update({"rho": point.rho, "target_mean": point.target_mean, "gated": point.gated,
                     "threshold": threshold})
        records.append(VerificationRecord(check_id, None, point.ks_stat, 0.0, verdict, meta))
    return records


def _ratio_record(check_id: str, values: dict[str, float], metadata: dict[str, Any] | None) -> VerificationRecord:
    low, high = min(values.values()), max(values.values())
    ratio = high / low if low > 0 else math.inf
    verdict = "pass" if ratio <= SCALING_RATIO_LIMIT else "fail"
    meta = dict(metadata or {})
    meta.update({"values": values, "limit": SCALING_RATIO_LIMIT})
    return VerificationRecord(check_id, None, ratio, 0.0, verdict, meta)


def scaling_check(
    base: QueueSpec,
    rho_list: Sequence[float],
    cfg: SimConfig,
    *,
    check_id: str = "scaling",
    metadata: dict[str, Any] | None = None,
) -> VerificationRecord:
    """``(1 - rho) E[L]`` across ``rho``; pass iff max/min <= 2."""
    values = {}
    for rho in rho_list:
        run = qsim.run_event_sim(base.with_rho(rho), cfg)
        values["%g" % rho] = (1.0 - rho) * run.queue_mean.point
    return _ratio_record(check_id, values, metadata)


def halfin_whitt_check(
    a_hat: DistributionSpec,
    s_hat: DistributionSpec,
    B: float,
    n_list: Sequence[int],
    cfg: SimConfig,
    *,
    r: float = 3.0,
    check_id: str = "halfin-whitt",
    metadata: dict[str, Any] | None = None,
) -> list[VerificationRecord]:
    """``E[L] / sqrt(n)`` across ``n`` at fixed excess ``B``.

    The first record is the bounded-ratio check; one mean-bound dominance
    record follows per ``n``.
    """
    values = {}
    records = []
    mS = dists.normalized_moment(s_hat, r)
    mA = dists.normalized_moment(a_hat, r)
    for n in n_list:
        q = qsim.halfin_whitt_queue(a_hat, s_hat, n, B)
        run = qsim.run_event_sim(q, cfg)
        scale = 1.0 / math.sqrt(n)
        normalized = StationaryEstimate(
            point=run.queue_mean.point * scale,
            ci_half_width=run.queue_mean.ci_half_width * scale,
            batches=run.queue_mean.batches,
            effective_samples=run.queue_mean.effective_samples,
        )
        values[str(n)] = normalized.point
        m = MomentSummary(r=r, mS=mS, mA=mA, n=n, rho=q.rho, mean_interarrival=q.arrival.mean)
        bound = halfin_whitt_bounds(m, B, 1.0, n=n).mean
        meta = dict(metadata or {})
        meta.update({"n": n, "B": B, "bound_id": "halfin-whitt.mean"})
        records.append(dominance_check(bound, normalized, check_id=check_id + ".mean", metadata=meta))
    return [_ratio_record(check_id, values, metadata)] + records


def lemma_scaling_check(
    service: DistributionSpec,
    k: int,
    r: float,
    t_list: Sequence[float],
    *,
    reps: int = 2000,
    seed: int = 0,
    check_id: str = "lemma-scaling",
    metadata: dict[str, Any] | None = None,
) -> VerificationRecord:
    """Least-squares slope of ``log E|sum N_i(t) - k t|^r`` against ``log t``; pass iff within 0.2 of r/2."""
    if len(t_list) < 2:
        raise CampaignError("%s: need at least two t values" % check_id)
    estimates = [estimate_pooled_moment(service, k, t, r, True, reps, seed + i).point for i, t in enumerate(t_list)]
    if min(estimates) <= 0:
        raise CampaignError("%s: a moment estimate is zero; slope undefined" % check_id)
    slope = float(np.polyfit(np.log(np.asarray(t_list, dtype=np.float64)), np.log(estimates), 1)[0])
    verdict = "pass" if abs(slope - r / 2.0) <= SLOPE_TOLERANCE else "fail"
    meta = dict(metadata or {})
    meta.update({"k": k, "r": r, "t": list(t_list), "expected_slope": r / 2.0, "estimates": estimates})
    return VerificationRecord(check_id, None, slope, 0.0, verdict, meta)
