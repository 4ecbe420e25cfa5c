"""Verification records and campaign errors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

Verdict = Literal["pass", "fail", "vacuous"]
VERDICTS = ("pass", "fail", "vacuous")


class CampaignError(Exception):
    """Raised for campaign schema violations and mismatched comparisons."""


@dataclass
class VerificationRecord:
    """One bound-versus-estimate comparison.

    ``bound_exp10`` is ``None`` for records that compare two estimates (tail
    comparisons, oracle checks, KS diagnostics) rather than a bound.
    ``metadata`` carries what is needed to re-run the check alone: spec,
    seed, grid point, bound id.
    """

    check_id: str
    bound_exp10: float | None
    estimate: float
    estimate_ci: float
    verdict: Verdict
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise CampaignError("invalid verdict %r" % (self.verdict,))
        if self.estimate_ci < 0 or math.isnan(self.estimate_ci):
            raise CampaignError("%s: estimate_ci must be >= 0 (got %r)" % (self.check_id, self.estimate_ci))

    @property
    def failed(self) -> bool:
        return self.verdict == "fail"

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "bound_exp10": self.bound_exp10,
            "estimate": self.estimate,
            "estimate_ci": self.estimate_ci,
            "verdict": self.verdict,
            "metadata": self.metadata,
        }


def summarize(records: list[VerificationRecord]) -> dict[str, int]:
    counts = {verdict: 0 for verdict in VERDICTS}
    for record in records:
        counts[record.verdict] += 1
    counts["total"] = len(records)
    return counts
