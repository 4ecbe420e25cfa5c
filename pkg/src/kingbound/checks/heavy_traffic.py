"""Heavy-traffic and Halfin-Whitt scaling checks."""

from __future__ import annotations

import logging
from typing import Any, TYPE_CHECKING

from kingbound.checks.base import CheckPlugin
from kingbound.harness.checks import (
    DEFAULT_KS_GATE_RHO,
    DEFAULT_KS_THRESHOLD,
    halfin_whitt_check,
    heavy_traffic_check,
    heavy_traffic_records,
    scaling_check,
)
from kingbound.harness.records import VerificationRecord

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig, StepContext

logger = logging.getLogger(__name__)


def _rho_issues(step: dict[str, Any]) -> list[str]:
    values = step.get("rho_values", [])
    if not values or any(not 0 < float(r) < 1 for r in values):
        return ["rho_values must be a non-empty list in (0, 1)"]
    return []


class HeavyTrafficCheck(CheckPlugin):
    """KS distance of ``(1 - rho) W`` from its exponential limit (thresholds are policy)."""

    check_name = "heavy-traffic"
    description = "heavy-traffic exponential limit of the scaled wait"
    required_keys = ("spec", "rho_values")
    spec_keys = ("spec",)

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        return _rho_issues(step)

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        name = self.spec_names(step, "spec")[0]
        base = ctx.campaign.queue(name)
        cfg = ctx.sim_config(step)
        points = heavy_traffic_check(base, [float(r) for r in step["rho_values"]], cfg,
                                     gate_rho=float(step.get("gate_rho", DEFAULT_KS_GATE_RHO)))
        return heavy_traffic_records(points, threshold=float(step.get("threshold", DEFAULT_KS_THRESHOLD)),
                                     check_id=self.check_id(step),
                                     metadata={"spec": name, "seed": cfg.master_seed})


class ScalingCheck(CheckPlugin):
    check_name = "scaling"
    description = "(1 - rho) E[L] bounded across rho"
    required_keys = ("spec", "rho_values")
    spec_keys = ("spec",)

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        return _rho_issues(step)

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        name = self.spec_names(step, "spec")[0]
        cfg = ctx.sim_config(step)
        return [scaling_check(ctx.campaign.queue(name), [float(r) for r in step["rho_values"]], cfg,
                              check_id=self.check_id(step), metadata={"spec": name, "seed": cfg.master_seed})]


class HalfinWhittCheck(CheckPlugin):
    """``E[L] / sqrt(n)`` bounded across ``n`` at fixed excess ``B``."""

    check_name = "halfin-whitt"
    description = "normalized mean queue length in the Halfin-Whitt regime"
    required_keys = ("a_hat", "s_hat", "B", "n_values")

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        issues = [i for i in (self.distribution_issue(step, "a_hat"), self.distribution_issue(step, "s_hat")) if i]
        B = float(step.get("B", 0))
        for n in step.get("n_values", []):
            if int(n) <= B * B:
                issues.append("n=%s must exceed B^2=%g" % (n, B * B))
        return issues

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        cfg = ctx.sim_config(step)
        return halfin_whitt_check(
            self.distribution(step, "a_hat"),
            self.distribution(step, "s_hat"),
            float(step["B"]),
            [int(n) for n in step["n_values"]],
            cfg,
            r=float(step.get("r", 3.0)),
            check_id=self.check_id(step),
            metadata={"seed": cfg.master_seed},
        )
