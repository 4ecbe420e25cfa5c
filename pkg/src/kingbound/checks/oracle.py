"""Simulators against closed forms, and against each other."""

from __future__ import annotations

import logging
import math
from typing import Any, TYPE_CHECKING

from kingbound import dists, qsim
from kingbound.checks.base import CheckPlugin
from kingbound.harness.checks import oracle_check
from kingbound.harness.records import VerificationRecord

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig, StepContext

logger = logging.getLogger(__name__)


class OracleCheck(CheckPlugin):
    """Erlang C for M/M/n and Pollaczek-Khinchine for M/G/1."""

    check_name = "oracle"
    description = "simulation vs Erlang C / Pollaczek-Khinchine"
    required_keys = ("specs",)
    spec_keys = ("specs",)

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        issues = []
        for name in self.spec_names(step):
            literal = campaign.specs.get(name)
            if not isinstance(literal, dict):
                continue
            arrival = (literal.get("arrival") or {}).get("family")
            service = (literal.get("service") or {}).get("family")
            if arrival != "exponential":
                issues.append("spec %r: oracle needs Poisson arrivals" % name)
            elif service != "exponential" and int(literal.get("n", 0)) != 1:
                issues.append("spec %r: no oracle for non-exponential service with n > 1" % name)
        return issues

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        rel_tol = float(step.get("rel_tol", 0.03))
        records = []
        for i, name in enumerate(self.spec_names(step)):
            q = ctx.campaign.queue(name)
            cfg = ctx.sim_config(step, offset=i)
            meta = {"spec": name, "n": q.n, "rho": q.rho, "seed": cfg.master_seed}
            event = qsim.run_event_sim(q, cfg)
            if q.service.family == "exponential":
                delay, mean_queue = qsim.erlang_c(q.n, q.offered_load)
                records.append(oracle_check(event.queue_mean, mean_queue, check_id=self.check_id(step, "erlang-c"),
                                            rel_tol=rel_tol, metadata=dict(meta, bound_id="erlang-c.queue")))
                records.append(oracle_check(event.sspd, delay, check_id=self.check_id(step, "erlang-c-delay"),
                                            rel_tol=rel_tol, metadata=dict(meta, bound_id="erlang-c.delay")))
            if q.n == 1:
                mean_wait, _mean_queue = qsim.pk_formula(q.mu_A, q.service.mean, dists.raw_moment(q.service, 2))
                kw = qsim.run_kw(q, cfg)
                records.append(oracle_check(kw.wait_mean, mean_wait, check_id=self.check_id(step, "pk"),
                                            rel_tol=rel_tol, metadata=dict(meta, bound_id="pk.wait")))
        return records


class LittlesLawCheck(CheckPlugin):
    """``E[L] = mu_A E[W]`` across the two simulators on common seeds."""

    check_name = "littles-law"
    description = "event-driven E[L] vs mu_A times Kiefer-Wolfowitz E[W]"
    required_keys = ("specs",)
    spec_keys = ("specs",)

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        records = []
        for i, name in enumerate(self.spec_names(step)):
            q = ctx.campaign.queue(name)
            cfg = ctx.sim_config(step, offset=i)
            event = qsim.run_event_sim(q, cfg)
            kw = qsim.run_kw(q, cfg)
            predicted = q.mu_A * kw.wait_mean.point
            joint = math.hypot(event.queue_mean.ci_half_width, q.mu_A * kw.wait_mean.ci_half_width)
            verdict = "pass" if abs(event.queue_mean.point - predicted) <= joint else "fail"
            records.append(VerificationRecord(
                self.check_id(step), None, event.queue_mean.point, event.queue_mean.ci_half_width, verdict,
                {"spec": name, "n": q.n, "rho": q.rho, "seed": cfg.master_seed, "predicted": predicted,
                 "joint_ci": joint},
            ))
        return records
