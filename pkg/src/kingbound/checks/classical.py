"""Classical mean bounds against simulated means."""

from __future__ import annotations

import logging
from typing import Any, TYPE_CHECKING

from kingbound import qsim
from kingbound.bounds import cyclic_multiserver, kingman_single
from kingbound.checks.base import CheckPlugin
from kingbound.harness.checks import dominance_check
from kingbound.harness.records import VerificationRecord

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig, StepContext

logger = logging.getLogger(__name__)


class KingmanCheck(CheckPlugin):
    """Kingman's single-server bound over GI/GI/1 specs, in queue and wait form."""

    check_name = "kingman"
    description = "Kingman bound vs simulated E[L] and E[W] (GI/GI/1)"
    required_keys = ("specs",)
    spec_keys = ("specs",)

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        issues = []
        for name in self.spec_names(step):
            if name in campaign.specs and int(campaign.specs[name].get("n", 0)) != 1:
                issues.append("spec %r is not single-server" % name)
        return issues

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        records = []
        for i, name in enumerate(self.spec_names(step)):
            q = ctx.campaign.queue(name)
            cfg = ctx.sim_config(step, offset=i)
            queue_bound, wait_bound = kingman_single(q.arrival.scv, q.service.scv, q.rho, q.arrival.mean)
            event = qsim.run_event_sim(q, cfg)
            kw = qsim.run_kw(q, cfg)
            meta = {"spec": name, "rho": q.rho, "seed": cfg.master_seed}
            records.append(dominance_check(queue_bound, event.queue_mean, check_id=self.check_id(step, "queue"),
                                           bound_unit="jobs", estimate_unit="jobs",
                                           metadata=dict(meta, bound_id="kingman.queue")))
            records.append(dominance_check(wait_bound, kw.wait_mean, check_id=self.check_id(step, "wait"),
                                           bound_unit="time", estimate_unit="time",
                                           metadata=dict(meta, bound_id="kingman.wait")))
        return records


class CyclicCheck(CheckPlugin):
    """The multi-server mean bound ``(cA2 + n cS2) / 2 / (1 - rho)`` over GI/GI/n specs."""

    check_name = "cyclic"
    description = "multi-server mean queue bound vs simulated E[L]"
    required_keys = ("specs",)
    spec_keys = ("specs",)

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        records = []
        for i, name in enumerate(self.spec_names(step)):
            q = ctx.campaign.queue(name)
            cfg = ctx.sim_config(step, offset=i)
            bound = cyclic_multiserver(q.arrival.scv, q.service.scv, q.n, q.rho)
            event = qsim.run_event_sim(q, cfg)
            records.append(dominance_check(bound, event.queue_mean, check_id=self.check_id(step),
                                           bound_unit="jobs", estimate_unit="jobs",
                                           metadata={"spec": name, "n": q.n, "rho": q.rho,
                                                     "seed": cfg.master_seed, "bound_id": "cyclic"}))
        return records
