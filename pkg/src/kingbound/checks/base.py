"""Base class for kingbound verification checks."""

from __future__ import annotations

import logging
from abc import abstractmethod
from logging import Logger
from typing import Any, TYPE_CHECKING

from scitrera_app_framework import Plugin, Variables

from kingbound.dists import DistributionError, from_literal

if TYPE_CHECKING:
    from kingbound.dists import DistributionSpec
    from kingbound.harness.campaign import CampaignConfig, StepContext
    from kingbound.harness.records import VerificationRecord

logger = logging.getLogger(__name__)

EXT_CHECK = "kingbound.check"


class CheckPlugin(Plugin):
    """Abstract base class for campaign check kinds.

    Each check is an SAF Plugin that registers as a multi-extension under
    the 'kingbound.check' extension point.

    Subclasses must define:
        - check_name: the ``kind`` used in campaign steps
        - run_step(): execute one step and return its records
    """

    eager = False  # don't initialize until requested

    # --- Subclass must define ---
    check_name: str = ""
    description: str = ""
    # step keys that must be present
    required_keys: tuple[str, ...] = ()
    # step keys naming campaign specs (a single name or a list)
    spec_keys: tuple[str, ...] = ()

    # --- SAF Plugin interface ---

    def name(self) -> str:
        return "kingbound.check.%s" % self.check_name

    def extension_point_name(self, v: Variables) -> str:
        return EXT_CHECK

    def is_enabled(self, v: Variables) -> bool:
        # Must return False for multi-extension plugins to prevent SAF's
        # single-extension cache from short-circuiting subsequent plugin
        # initializations under the same extension point.
        return False

    def is_multi_extension(self, v: Variables) -> bool:
        return True

    def initialize(self, v: Variables, logger: Logger) -> CheckPlugin:
        return self

    # --- Check interface ---

    def validate_step(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        """Return a list of issues with ``step``; empty when runnable."""
        issues = []
        for key in self.required_keys:
            if key not in step:
                issues.append("missing required key %r" % key)
        for key in self.spec_keys:
            for name in self.spec_names(step, key):
                if name not in campaign.specs:
                    issues.append("unknown spec %r" % name)
        issues.extend(self.extra_issues(step, campaign))
        return issues

    def extra_issues(self, step: dict[str, Any], campaign: CampaignConfig) -> list[str]:
        return []

    @staticmethod
    def spec_names(step: dict[str, Any], key: str = "specs") -> list[str]:
        value = step.get(key, [])
        if isinstance(value, str):
            return [value]
        return list(value or [])

    @staticmethod
    def distribution_issue(step: dict[str, Any], key: str) -> str | None:
        try:
            from_literal(step[key])
        except KeyError:
            return None
        except (DistributionError, TypeError) as e:
            return "%s: %s" % (key, e)
        return None

    @staticmethod
    def distribution(step: dict[str, Any], key: str) -> DistributionSpec:
        return from_literal(step[key])

    def check_id(self, step: dict[str, Any], suffix: str = "") -> str:
        base = step.get("id", self.check_name)
        return "%s.%s" % (base, suffix) if suffix else base

    @abstractmethod
    def run_step(self, step: dict[str, Any], ctx: StepContext) -> list[VerificationRecord]:
        """Execute one campaign step."""
        ...

