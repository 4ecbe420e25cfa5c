"""Constant values and exact formula identities."""

from __future__ import annotations

import logging
import math
from typing import Any, TYPE_CHECKING

from kingbound.bounds import MomentSummary, higher_moment_bound, main_tail_bound, mean_bounds, universal_constants
from kingbound.bounds.constants import CUBIC_PREFACTOR_EXP10
from kingbound.checks.base import CheckPlugin
from kingbound.harness.records import VerificationRecord

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig, StepContext

logger = logging.getLogger(__name__)

# independently recomputed log10 C_{r,1}
DEFAULT_EXPECTED = {3: 405.8036, 4: 542.614}
DEFAULT_TOLERANCE = 1e-3
IDENTITY_TOLERANCE = 1e-9


def _record(check_id: str, value: float, ok: bool, **meta: Any) -> VerificationRecord:
    return VerificationRecord(check_id, None, value, 0.0, "pass" if ok else "fail", dict(meta))


class ConstantsCheck(CheckPlugin):
    """Universal constants against recomputed values, plus exact identities between formulas."""

    check_name = "constants"
    description = "constant values and formula identities"

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        expected = step.get("expected", {})
        if not isinstance(expected, dict):
            return ["'expected' must map r -> log10 C_{r,1}"]
        return []

    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        expected = {float(k): float(v) for k, v in (step.get("expected") or DEFAULT_EXPECTED).items()}
        tol = float(step.get("tolerance", DEFAULT_TOLERANCE))
        rho_values = [float(r) for r in step.get("rho_values", [0.5, 0.8, 0.9, 0.99])]
        records = []

        for r, target in sorted(expected.items()):
            c1, _c2 = universal_constants(r)
            records.append(_record(self.check_id(step, "c1"), c1.exp10, abs(c1.exp10 - target) <= tol,
                                   r=r, expected=target, param="r=%g" % r))

        c31, c32 = universal_constants(3.0)
        for label, c in (("c31", c31), ("c32", c32)):
            records.append(_record(self.check_id(step, label + "-prefactor"), c.exp10,
                                   c.exp10 <= CUBIC_PREFACTOR_EXP10, r=3.0, limit=CUBIC_PREFACTOR_EXP10))

        for r in (3.0, 4.0):
            m = MomentSummary(r=r, mS=1.0, mA=1.0, n=1, rho=0.9)
            queue, _wait = mean_bounds(m)
            diff = abs(higher_moment_bound(m, 1.0).exp10 - queue.exp10)
            records.append(_record(self.check_id(step, "higher-moment-z1"), diff, diff <= IDENTITY_TOLERANCE, r=r))

            scaled = [mean_bounds(MomentSummary(r=r, mS=1.0, mA=1.0, n=1, rho=rho))[0].exp10 + math.log10(1 - rho)
                      for rho in rho_values]
            spread = max(scaled) - min(scaled)
            records.append(_record(self.check_id(step, "mean-rho-invariance"), spread,
                                   spread <= IDENTITY_TOLERANCE, r=r))

            ratio = main_tail_bound(m, 20.0).exp10 - main_tail_bound(m, 10.0).exp10
            target = -(r / 2.0) * math.log10(2.0)
            records.append(_record(self.check_id(step, "tail-power-law"), ratio,
                                   abs(ratio - target) <= IDENTITY_TOLERANCE, r=r, expected=target))
        return records
