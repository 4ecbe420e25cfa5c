"""Stochastic comparison of the queue with the bounding supremum process."""

from __future__ import annotations

import logging
import math
from typing import Any, TYPE_CHECKING

from kingbound import csim, qsim
from kingbound.checks.base import CheckPlugin
from kingbound.harness.checks import JOINT_CI_FACTOR, comparison_check
from kingbound.harness.records import VerificationRecord

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig, StepContext

logger = logging.getLogger(__name__)

GAMBLERS_RUIN_TOLERANCE = 0.01


class ComparisonCheck(CheckPlugin):
    """``P(Q - n >= k) <= P(sup_t (A(t) - sum_i N_i(t)) >= k)`` on a grid of ``k``.

    With ``gamblers_ruin: true`` (Poisson arrivals, exponential service) the
    supremum tail is also checked against ``(mu_A / (n mu_S))^k``.
    """

    check_name = "comparison"
    description = "queue tail vs bounding supremum tail"
    required_keys = ("specs",)
    spec_keys = ("specs",)

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        grid = step.get("levels")
        if grid is not None and (not grid or list(grid) != sorted(grid)):
            return ["levels must be a non-empty ascending list"]
        return []

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        levels = [float(k) for k in step.get("levels", ctx.settings["tail_grid"])]
        records = []
        for i, name in enumerate(self.spec_names(step)):
            q = ctx.campaign.queue(name)
            cfg = ctx.sim_config(step, tail_grid=levels, offset=2 * i)
            sup_cfg = ctx.sup_config(step, n_prime=q.n, max_level=levels[-1], offset=2 * i + 1)
            run = qsim.run_event_sim(q, cfg)
            samples = csim.simulate_supremum(q.arrival, q.service, sup_cfg)
            sup_tail = csim.sup_tail_estimate(samples, levels)
            meta = {"spec": name, "n": q.n, "rho": q.rho, "seed": cfg.master_seed,
                    "sup_seed": sup_cfg.master_seed, "truncation_diag": samples.truncation_diag}
            records.extend(comparison_check(run.queue_tail, sup_tail, check_id=self.check_id(step), metadata=meta))
            if step.get("gamblers_ruin"):
                ratio = q.mu_A / (q.n * q.mu_S)
                for level, s, cs in zip(sup_tail.grid, sup_tail.survival, sup_tail.ci_half_widths):
                    exact = ratio ** level
                    tol = max(GAMBLERS_RUIN_TOLERANCE, JOINT_CI_FACTOR * cs)
                    verdict = "pass" if abs(s - exact) <= tol else "fail"
                    records.append(VerificationRecord(self.check_id(step, "gamblers-ruin"), None, s, cs, verdict,
                                                      dict(meta, level=level, exact=exact)))
        return records


class SspdComparisonCheck(CheckPlugin):
    """Delay probability against ``P(sup >= threshold)`` at the reduced server count."""

    check_name = "sspd-comparison"
    description = "delay probability vs supremum tail at n' = n - threshold"
    required_keys = ("specs",)
    spec_keys = ("specs",)

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        records = []
        for i, name in enumerate(self.spec_names(step)):
            q = ctx.campaign.queue(name)
            cfg = ctx.sim_config(step, offset=2 * i)
            sup_cfg = ctx.sup_config(step, n_prime=q.n, max_level=1.0, offset=2 * i + 1)
            (n_prime, threshold, vacuous), samples = csim.sspd_comparison(q.arrival, q.service, q.n, sup_cfg)
            run = qsim.run_event_sim(q, cfg)
            meta = {"spec": name, "n": q.n, "rho": q.rho, "seed": cfg.master_seed, "n_prime": n_prime,
                    "threshold": threshold}
            if vacuous:
                records.append(VerificationRecord(self.check_id(step), None, run.sspd.point, run.sspd.ci_half_width,
                                                  "vacuous", meta))
                continue
            tail = csim.sup_tail_estimate(samples, [float(threshold)])
            s, cs = tail.survival[0], tail.ci_half_widths[0]
            margin = JOINT_CI_FACTOR * math.hypot(run.sspd.ci_half_width, cs)
            verdict = "pass" if run.sspd.point <= s + margin else "fail"
            records.append(VerificationRecord(self.check_id(step), None, run.sspd.point, run.sspd.ci_half_width,
                                              verdict, dict(meta, sup_survival=s, sup_ci=cs,
                                                            sup_seed=sup_cfg.master_seed)))
        return records
