"""Monte Carlo moments of renewal counts and partial sums against the moment lemmas."""

from __future__ import annotations

import itertools
import logging
from typing import Any, TYPE_CHECKING

from kingbound import csim, dists
from kingbound.bounds import default_theta, lemma_moment_bound
from kingbound.checks.base import CheckPlugin
from kingbound.harness.checks import dominance_check, lemma_scaling_check
from kingbound.harness.records import VerificationRecord
from kingbound.utils import derive_seed

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig, StepContext

logger = logging.getLogger(__name__)

DEFAULT_DISTRIBUTIONS = (
    {"family": "exponential", "mean": 1.0},
    {"family": "erlang", "k": 2, "mean": 1.0},
)


class LemmaMomentsCheck(CheckPlugin):
    """Every estimated moment must lie below its lemma bound.

    Service laws are rescaled to unit mean; ``theta = E[S] / (2 E[S^2])`` and
    the Laplace gap is computed exactly.
    """

    check_name = "lemma-moments"
    description = "renewal and partial-sum moment estimates vs lemma bounds"

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        issues = []
        for i, literal in enumerate(step.get("distributions", DEFAULT_DISTRIBUTIONS)):
            try:
                dists.from_literal(literal)
            except (dists.DistributionError, TypeError) as e:
                issues.append("distributions[%d]: %s" % (i, e))
        if float(step.get("r", 3.0)) < 2 or float(step.get("p", 2.0)) < 2:
            issues.append("r and p must be >= 2")
        return issues

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        r = float(step.get("r", 3.0))
        p = float(step.get("p", 2.0))
        k_values = [int(k) for k in step.get("k_values", [1, 10, 100])]
        t_values = [float(t) for t in step.get("t_values", [0.1, 1.0, 10.0])]
        reps = int(step.get("reps", min(int(ctx.settings["reps"]), 2000)))
        records: list[VerificationRecord] = []
        counter = itertools.count()

        for literal in step.get("distributions", DEFAULT_DISTRIBUTIONS):
            d = dists.with_mean(dists.from_literal(literal), 1.0)
            theta, _surrogate = default_theta(1.0, dists.raw_moment(d, 2))
            gap = dists.laplace_gap(d, theta)
            ESr = dists.raw_moment(d, r)
            label = d.label

            def check(lemma_id: str, params: dict[str, Any], estimate, **extra):
                seed = extra.pop("seed")
                bound = lemma_moment_bound(lemma_id, params)
                meta = {"spec": label, "lemma": lemma_id, "bound_id": lemma_id, "seed": seed, "reps": reps}
                meta.update(extra)
                records.append(dominance_check(bound, estimate, check_id=self.check_id(step, lemma_id),
                                               bound_unit="moment", estimate_unit="moment", metadata=meta))

            def next_seed() -> int:
                return derive_seed(ctx.seed, next(counter))

            for k in k_values:
                for t in t_values:
                    seed = next_seed()
                    if t >= 1:
                        est = csim.estimate_pooled_moment(d, k, t, r, True, reps, seed)
                        check("pooled-central", dict(r=r, ESr=ESr, theta=theta, gap=gap, k=k, t=t), est,
                              seed=seed, k=k, t=t, r=r)
                    else:
                        est = csim.estimate_pooled_moment(d, k, t, p, True, reps, seed)
                        check("pooled-small-t", dict(p=p, theta=theta, gap=gap, k=k, t=t), est,
                              seed=seed, k=k, t=t, p=p)
                        check("pooled-small-t-weak", dict(p=p, theta=theta, gap=gap, k=k, t=t), est,
                              seed=seed, k=k, t=t, p=p)

            seed = next_seed()
            base = csim.estimate_count_moment(d, 1.0, p, False, reps, seed, offset=1.0)
            seed = next_seed()
            check("count-moment", dict(p=p, theta=theta, gap=gap),
                  csim.estimate_count_moment(d, 1.0, p, False, reps, seed), seed=seed, p=p, t=1.0)
            for t in (t for t in t_values if t >= 1):
                seed = next_seed()
                check("renewal-central", dict(r=r, ESr=ESr, theta=theta, gap=gap, t=t),
                      csim.estimate_count_moment(d, t, r, True, reps, seed), seed=seed, t=t, r=r)
                seed = next_seed()
                check("equilibrium-central", dict(r=r, ESr=ESr, theta=theta, gap=gap, t=t),
                      csim.estimate_count_moment(d, t, r, True, reps, seed, equilibrium=True), seed=seed, t=t, r=r)
                seed = next_seed()
                shifted = csim.estimate_count_moment(d, t, p, False, reps, seed, offset=1.0)
                check("count-moment-t", dict(p=p, theta=theta, gap=gap, t=t), shifted, seed=seed, t=t, p=p)
                check("noncentral-growth", dict(p=p, t=t, base=max(1.0, base.upper)), shifted, seed=seed, t=t, p=p)

            mAr = dists.normalized_moment(d, r)
            seed = next_seed()
            single = csim.estimate_partial_sum_moment(d, 1, p, reps, seed)
            for k in k_values:
                seed = next_seed()
                check("arrival-central", dict(r3=r, mAr=mAr, k=k),
                      csim.estimate_partial_sum_moment(d, k, r, reps, seed), seed=seed, k=k, r=r)
                seed = next_seed()
                check("marcinkiewicz-zygmund", dict(p=p, abs_moment=single.upper, k=k),
                      csim.estimate_partial_sum_moment(d, k, p, reps, seed), seed=seed, k=k, p=p)
        return records


class LemmaScalingCheck(CheckPlugin):
    """Slope of ``log E|sum N_i(t) - k t|^r`` in ``log t`` is ``r/2``."""

    check_name = "lemma-scaling"
    description = "pooled central moment growth exponent in t"

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        issue = self.distribution_issue(step, "service")
        return [issue] if issue else []

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        service = self.distribution(step, "service") if "service" in step else dists.make_distribution(
            "exponential", mean=1.0)
        service = dists.with_mean(service, 1.0)
        k = int(step.get("k", 10))
        t_values = [float(t) for t in step.get("t_values", [10, 30, 100, 300, 1000])]
        reps = int(step.get("reps", min(int(ctx.settings["reps"]), 2000)))
        records = []
        for i, r in enumerate(float(r) for r in step.get("r_values", [2, 3])):
            seed = derive_seed(ctx.seed, i)
            records.append(lemma_scaling_check(
                service, k, r, t_values, reps=reps, seed=seed, check_id=self.check_id(step),
                metadata={"spec": service.label, "seed": seed, "reps": reps},
            ))
        return records
