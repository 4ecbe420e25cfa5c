"""Built-in verification campaigns.

Campaigns are stored as .yaml files alongside this module and resolved
via :func:`find_campaign` at runtime.
"""

from __future__ import annotations

import logging
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from kingbound.harness.campaign import CampaignConfig

logger = logging.getLogger(__name__)

_EXTENSIONS = (".yaml", ".yml", ".json")


def list_builtin_campaigns() -> list[str]:
    """Names of the packaged campaigns."""
    return sorted(
        Path(entry.name).stem
        for entry in resources.files(__package__).iterdir()
        if entry.name.endswith(_EXTENSIONS)
    )


def read_campaign(name: str) -> str:
    """Read a packaged campaign file by name (with or without extension)."""
    filename = name if name.endswith(_EXTENSIONS) else name + ".yaml"
    return resources.files(__package__).joinpath(filename).read_text(encoding="utf-8")


def get_campaign_path(name: str):
    """Context manager yielding a filesystem path for a packaged campaign."""
    filename = name if name.endswith(_EXTENSIONS) else name + ".yaml"
    return resources.as_file(resources.files(__package__).joinpath(filename))


def find_campaign(name: str, search_paths: list[Path] | None = None) -> Path | None:
    """Find a campaign file by path or name across search paths.

    Returns None when only a built-in campaign of that name exists (or none).
    """
    direct = Path(name)
    if direct.is_file():
        return direct
    if not name.endswith(_EXTENSIONS):
        for ext in _EXTENSIONS:
            candidate = Path(name + ext)
            if candidate.is_file():
                return candidate
    for search_dir in (search_paths or []):
        for ext in ("",) + _EXTENSIONS:
            candidate = search_dir / (name + ext)
            if candidate.is_file():
                return candidate
    return None


def load_campaign(name: str, search_paths: list[Path] | None = None) -> CampaignConfig:
    """Resolve and load a campaign: explicit path, search paths, then built-ins.

    Raises:
        CampaignError: If nothing matches.
    """
    from kingbound.harness.campaign import CampaignConfig
    from kingbound.harness.records import CampaignError

    path = find_campaign(name, search_paths)
    if path is not None:
        logger.debug("Campaign %s resolved to %s", name, path)
        return CampaignConfig.load(path)
    stem = Path(name).stem
    if stem in list_builtin_campaigns():
        with get_campaign_path(stem) as builtin:
            cfg = CampaignConfig.load(builtin)
        cfg.source_path = "builtin:%s" % stem
        return cfg
    searched = [str(p) for p in (search_paths or [])] + ["built-in"]
    raise CampaignError("Campaign '%s' not found. Searched: %s" % (name, searched))


def list_campaigns(search_paths: list[Path] | None = None) -> list[dict[str, str]]:
    """All discoverable campaigns with name and source."""
    found: list[dict[str, str]] = []
    seen: set[str] = set()
    for search_dir in (search_paths or []):
        if not search_dir.is_dir():
            continue
        for f in sorted(search_dir.iterdir()):
            if f.suffix in _EXTENSIONS and f.stem not in seen:
                seen.add(f.stem)
                found.append({"name": f.stem, "file": str(f)})
    for stem in list_builtin_campaigns():
        if stem not in seen:
            seen.add(stem)
            found.append({"name": stem, "file": "builtin:%s" % stem})
    return found
