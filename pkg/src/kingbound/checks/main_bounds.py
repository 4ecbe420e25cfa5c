"""Main tail, delay-probability and mean bounds against simulation.

At desk scale every probability bound here exceeds 1 and is reported
vacuous; the mean bounds pass by many decades.
"""

from __future__ import annotations

import logging
from typing import Any, TYPE_CHECKING

from kingbound import dists, qsim
from kingbound.bounds import (
    cubic_moment_bounds,
    main_sspd_bound,
    main_tail_bound,
    mean_bounds,
    refined_mean_bound,
    sspd_explicit,
)
from kingbound.checks.base import CheckPlugin
from kingbound.harness.checks import dominance_check
from kingbound.harness.records import VerificationRecord

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig, StepContext

logger = logging.getLogger(__name__)


class MainBoundsCheck(CheckPlugin):
    check_name = "main-bounds"
    description = "tail, delay-probability and mean bounds vs simulation"
    required_keys = ("specs",)
    spec_keys = ("specs",)

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        r = float(step.get("r", 3.0))
        issues = [] if r > 2 else ["r=%g must be > 2" % r]
        if any(float(x) <= 0 for x in step.get("x_values", [1.0])):
            issues.append("x_values must be > 0")
        return issues

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        r = float(step.get("r", 3.0))
        xs = sorted(float(x) for x in step.get("x_values", [1.0, 10.0]))
        records = []
        for i, name in enumerate(self.spec_names(step)):
            q = ctx.campaign.queue(name)
            m = q.moment_summary(r)
            levels = [x / (1.0 - q.rho) for x in xs]
            cfg = ctx.sim_config(step, tail_grid=levels, offset=i)
            run = qsim.run_event_sim(q, cfg)
            meta = {"spec": name, "r": r, "rho": q.rho, "n": q.n, "seed": cfg.master_seed}

            def add(bound, est, bound_id, probability, **extra):
                records.append(dominance_check(bound, est, check_id=self.check_id(step, bound_id),
                                               probability=probability,
                                               metadata=dict(meta, bound_id=bound_id, **extra)))

            for x, level in zip(xs, levels):
                add(main_tail_bound(m, x), run.queue_tail.at(level), "main-tail", True, x=x, level=level)
            add(main_sspd_bound(m), run.sspd, "sspd", True)
            add(mean_bounds(m)[0], run.queue_mean, "mean", False)
            add(refined_mean_bound(m), run.queue_mean, "refined-mean", False)

            ESr3 = dists.normalized_moment(q.service, r) ** 3
            explicit, in_range = sspd_explicit(r, ESr3, m.mA, q.n, q.rho)
            add(explicit, run.sspd, "sspd-explicit", True, in_range=in_range)

            if r == 3.0:
                tail3, sspd3, mean3 = cubic_moment_bounds(m.mS, m.mA, xs[0], q.n, q.rho)
                add(tail3, run.queue_tail.at(levels[0]), "cubic-tail", True, x=xs[0], level=levels[0])
                add(sspd3, run.sspd, "cubic-sspd", True)
                add(mean3, run.queue_mean, "cubic-mean", False)
        return records
