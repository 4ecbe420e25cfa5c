"""Campaign loading, validation and execution."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, TYPE_CHECKING

from vpd.legacy.yaml_dict import vpd_chain, VirtualPathDictChain
from vpd.next.util import read_yaml

from kingbound.bounds import BoundError
from kingbound.csim import SupremumConfig
from kingbound.dists import DistributionError
from kingbound.estimators import SimulationError
from kingbound.harness.records import CampaignError, VerificationRecord, summarize
from kingbound.qsim import QueueSpec, SimConfig
from kingbound.utils import derive_seed

if TYPE_CHECKING:
    from scitrera_app_framework import Variables

logger = logging.getLogger(__name__)

_KNOWN_KEYS = {"name", "description", "seed", "settings", "specs", "steps", "output_dir"}

SETTING_KEYS = (
    "seed",
    "workers",
    "total_arrivals",
    "warmup_fraction",
    "batch_count",
    "tail_grid",
    "reps",
    "horizon_multiplier",
    "sup_workers",
)

_BUILTIN_SETTINGS: dict[str, Any] = {
    "seed": 20240601,
    "workers": 1,
    "total_arrivals": 1_000_000,
    "warmup_fraction": 0.2,
    "batch_count": 30,
    "tail_grid": [float(k) for k in range(21)],
    "reps": 10_000,
    "horizon_multiplier": 20.0,
    "sup_workers": 1,
}


class CampaignConfig:
    """A loaded verification campaign: named queue specs plus check steps."""

    def __init__(self, data: dict[str, Any], source_path: str | None = None):
        self._raw = data
        self.source_path = source_path
        default_name = Path(source_path).stem if source_path else "unnamed"
        self.name: str = str(data.get("name", default_name))
        self.description: str = data.get("description", "")
        self.settings: dict[str, Any] = dict(data.get("settings") or {})
        if "seed" in data:
            self.settings.setdefault("seed", data["seed"])
        raw_specs = data.get("specs") or {}
        self.specs: dict[str, Any] = dict(raw_specs) if isinstance(raw_specs, dict) else {}
        raw_steps = data.get("steps") or []
        self.steps: list[dict[str, Any]] = [dict(s) if isinstance(s, dict) else s for s in raw_steps]
        self.output_dir: str | None = data.get("output_dir")

    def queue(self, name: str) -> QueueSpec:
        if name not in self.specs:
            raise CampaignError("unknown spec %r. Available: %s" % (name, ", ".join(sorted(self.specs))))
        return QueueSpec.from_literal(self.specs[name])

    def build_settings(self, cli_overrides: dict[str, Any] | None = None,
                       user_defaults: dict[str, Any] | None = None) -> VirtualPathDictChain:
        """Cascade: CLI overrides -> campaign settings -> user config -> built-in defaults."""
        overrides = {k: v for k, v in (cli_overrides or {}).items() if v is not None}
        return vpd_chain(overrides, self.settings, user_defaults or {}, dict(_BUILTIN_SETTINGS))

    def validate(self, v: Variables | None = None) -> list[str]:
        """Validate the campaign and return a list of issues."""
        issues = []
        unknown = set(self._raw) - _KNOWN_KEYS
        if unknown:
            issues.append("Unknown top-level key(s): %s" % ", ".join(sorted(unknown)))
        if not isinstance(self._raw.get("specs", {}) or {}, dict):
            issues.append("'specs' must be a mapping of name -> queue")
        for name, literal in self.specs.items():
            try:
                QueueSpec.from_literal(literal)
            except (BoundError, DistributionError, SimulationError) as e:
                issues.append("spec %r: %s" % (name, e))
        bad_settings = set(self.settings) - set(SETTING_KEYS)
        if bad_settings:
            issues.append("Unknown setting(s): %s" % ", ".join(sorted(bad_settings)))
        if not self.steps:
            issues.append("Campaign has no steps")

        from kingbound.bootstrap import get_check
        for index, step in enumerate(self.steps):
            if not isinstance(step, dict) or "kind" not in step:
                issues.append("step %d: must be a mapping with a 'kind'" % index)
                continue
            try:
                plugin = get_check(step["kind"], v=v)
            except ValueError as e:
                issues.append("step %d: %s" % (index, e))
                continue
            for issue in plugin.validate_step(step, self):
                issues.append("step %d (%s): %s" % (index, step["kind"], issue))
        return issues

    @classmethod
    def load(cls, path: str | Path) -> CampaignConfig:
        """Load a campaign from a YAML (or JSON) file path."""
        path = Path(path)
        if not path.exists():
            raise CampaignError("Campaign file not found: %s" % path)
        data = read_yaml(str(path))
        if not isinstance(data, dict):
            raise CampaignError("Campaign file must contain a mapping: %s" % path)
        return cls(data, source_path=str(path))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CampaignConfig:
        """Create a campaign from a dict (useful for testing)."""
        return cls(data)

    def __repr__(self) -> str:
        return "CampaignConfig(name=%r, specs=%d, steps=%d)" % (self.name, len(self.specs), len(self.steps))


@dataclass
class StepContext:
    """Everything a check plugin needs to run one step."""

    campaign: CampaignConfig
    settings: Mapping[str, Any]
    step_index: int
    seed: int

    def setting(self, step: Mapping[str, Any], key: str) -> Any:
        """Step-level value if present, else the campaign setting."""
        if key in step:
            return step[key]
        return self.settings[key]

    def sim_config(self, step: Mapping[str, Any], tail_grid=None, offset: int = 0) -> SimConfig:
        return SimConfig(
            total_arrivals=int(self.setting(step, "total_arrivals")),
            warmup_fraction=float(self.setting(step, "warmup_fraction")),
            batch_count=int(self.setting(step, "batch_count")),
            master_seed=derive_seed(self.seed, offset),
            tail_grid=tuple(tail_grid if tail_grid is not None else self.setting(step, "tail_grid")),
        )

    def sup_config(self, step: Mapping[str, Any], n_prime: int, max_level: float, offset: int = 0) -> SupremumConfig:
        return SupremumConfig(
            n_prime=n_prime,
            reps=int(self.setting(step, "reps")),
            horizon_multiplier=float(self.setting(step, "horizon_multiplier")),
            master_seed=derive_seed(self.seed, offset),
            max_level=max(float(max_level), 1.0),
            workers=int(self.setting(step, "sup_workers")),
        )


@dataclass
class CampaignReport:
    name: str
    records: list[VerificationRecord]
    settings: dict[str, Any]
    elapsed_seconds: float = 0.0
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.counts:
            self.counts = summarize(self.records)

    @property
    def exit_code(self) -> int:
        return 1 if self.counts.get("fail", 0) else 0


def resolve_settings(chain: VirtualPathDictChain) -> dict[str, Any]:
    return {key: chain.get(key) for key in SETTING_KEYS}


def _run_step(step: dict[str, Any], ctx: StepContext, v: Variables | None) -> list[VerificationRecord]:
    from kingbound.bootstrap import get_check
    plugin = get_check(step["kind"], v=v)
    t0 = time.monotonic()
    records = plugin.run_step(step, ctx)
    for record in records:
        record.metadata.setdefault("seed", ctx.seed)
        record.metadata.setdefault("step", ctx.step_index)
    logger.info("  step %d %-16s %d record(s), %d failed (%.1fs)", ctx.step_index, step["kind"], len(records),
                sum(1 for r in records if r.failed), time.monotonic() - t0)
    return records


def run_campaign(
    cfg: CampaignConfig,
    *,
    cli_overrides: dict[str, Any] | None = None,
    user_defaults: dict[str, Any] | None = None,
    v: Variables | None = None,
) -> CampaignReport:
    """Validate, then execute every step; records are ordered by step index.

    Raises:
        CampaignError: If the campaign does not validate (before any simulation).
    """
    issues = cfg.validate(v=v)
    if issues:
        raise CampaignError("campaign %r is invalid:\n  %s" % (cfg.name, "\n  ".join(issues)))

    settings = resolve_settings(cfg.build_settings(cli_overrides, user_defaults))
    seed = int(settings["seed"])
    workers = max(1, int(settings["workers"]))
    contexts = [StepContext(cfg, settings, i, derive_seed(seed, i)) for i in range(len(cfg.steps))]
    logger.info("Running campaign %s: %d step(s), seed %d, %d worker(s)", cfg.name, len(cfg.steps), seed, workers)

    t0 = time.monotonic()
    results: dict[int, list[VerificationRecord]] = {}
    if workers == 1:
        for step, ctx in zip(cfg.steps, contexts):
            results[ctx.step_index] = _run_step(step, ctx, v)
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {
                executor.submit(_run_step, step, ctx, v): ctx.step_index
                for step, ctx in zip(cfg.steps, contexts)
            }
            for future in as_completed(futures):
                results[futures[future]] = future.result()

    records = [record for index in sorted(results) for record in results[index]]
    report = CampaignReport(name=cfg.name, records=records, settings=settings,
                            elapsed_seconds=time.monotonic() - t0)
    logger.info("Campaign %s: %d pass, %d vacuous, %d fail", cfg.name, report.counts["pass"],
                report.counts["vacuous"], report.counts["fail"])
    return report
