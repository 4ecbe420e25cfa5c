"""User configuration management for kingbound."""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, TYPE_CHECKING

from vpd.next.util import read_yaml

if TYPE_CHECKING:
    from scitrera_app_framework import Variables

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_DIR = Path.home() / ".config" / "kingbound"
DEFAULT_CACHE_DIR = Path.home() / ".cache" / "kingbound"
DEFAULT_SEED = 20240601


def get_config_root(v: Variables | None = None) -> Path:
    """Config root from SAF stateful root, falling back to DEFAULT_CONFIG_DIR."""
    if v is not None:
        from scitrera_app_framework.core import is_stateful_ready
        stateful_root = is_stateful_ready(v)
        if stateful_root:
            return Path(stateful_root)
    return DEFAULT_CONFIG_DIR


class KingboundConfig:
    """Manages kingbound user configuration."""

    def __init__(self, config_path: Path | None = None):
        self.config_path = config_path or (DEFAULT_CONFIG_DIR / "config.yaml")
        self._data: dict[str, Any] = {}
        self._load()

    def _load(self):
        if self.config_path.exists():
            self._data = read_yaml(str(self.config_path)) or {}
            logger.debug("Loaded config from %s", self.config_path)
        else:
            self._data = {}

    @property
    def output_dir(self) -> Path:
        return Path(os.path.expanduser(self._data.get("output_dir", str(DEFAULT_CACHE_DIR / "reports"))))

    @property
    def default_seed(self) -> int:
        return int(self._data.get("default_seed", DEFAULT_SEED))

    @property
    def workers(self) -> int:
        return int(self._data.get("workers", 1))

    @property
    def total_arrivals(self) -> int:
        return int(self.get("sim.total_arrivals", 1_000_000))

    @property
    def warmup_fraction(self) -> float:
        return float(self.get("sim.warmup_fraction", 0.2))

    @property
    def batch_count(self) -> int:
        return int(self.get("sim.batch_count", 30))

    @property
    def sup_reps(self) -> int:
        return int(self.get("sup.reps", 10_000))

    @property
    def horizon_multiplier(self) -> float:
        return float(self.get("sup.horizon_multiplier", 20.0))

    def get(self, key: str, default: Any = None) -> Any:
        """Get a config value by dot-separated key path."""
        parts = key.split(".")
        current = self._data
        for part in parts:
            if isinstance(current, dict) and part in current:
                current = current[part]
            else:
                return default
        return current

    def settings_defaults(self) -> dict[str, Any]:
        """Campaign setting defaults contributed by the user config."""
        return {
            "seed": self.default_seed,
            "workers": self.workers,
            "total_arrivals": self.total_arrivals,
            "warmup_fraction": self.warmup_fraction,
            "batch_count": self.batch_count,
            "reps": self.sup_reps,
            "horizon_multiplier": self.horizon_multiplier,
        }

    def get_campaign_search_paths(self) -> list[Path]:
        """Return ordered list of paths to search for campaign files."""
        paths = []
        # 1. Current directory campaigns/
        cwd_campaigns = Path.cwd() / "campaigns"
        if cwd_campaigns.is_dir():
            paths.append(cwd_campaigns)
        # 2. User config campaigns/
        user_campaigns = self.config_path.parent / "campaigns"
        if user_campaigns.is_dir():
            paths.append(user_campaigns)
        # 3. Extra search paths from config
        for extra in self._data.get("campaign_paths", []):
            p = Path(os.path.expanduser(extra))
            if p.is_dir():
                paths.append(p)
        return paths
