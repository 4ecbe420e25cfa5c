"""Tests for kingbound.config module."""

from __future__ import annotations

from pathlib import Path

import yaml

from kingbound.config import DEFAULT_CONFIG_DIR, DEFAULT_SEED, KingboundConfig, get_config_root


def _write(path: Path, data: dict) -> Path:
    with open(path, "w") as f:
        yaml.dump(data, f)
    return path


def test_config_defaults_without_file(tmp_path: Path):
    """A missing config file yields the built-in defaults."""
    config = KingboundConfig(config_path=tmp_path / "absent.yaml")
    assert config.default_seed == DEFAULT_SEED
    assert config.workers == 1
    assert config.total_arrivals == 1_000_000
    assert config.warmup_fraction == 0.2
    assert config.batch_count == 30
    assert config.sup_reps == 10_000
    assert config.horizon_multiplier == 20.0
    assert config.output_dir.name == "reports"


def test_config_loads_yaml(tmp_path: Path):
    config_file = _write(tmp_path / "config.yaml", {
        "output_dir": "/custom/reports",
        "default_seed": 7,
        "workers": 4,
        "sim": {"total_arrivals": 50_000, "warmup_fraction": 0.1, "batch_count": 40},
        "sup": {"reps": 2000, "horizon_multiplier": 12.5},
    })

    config = KingboundConfig(config_path=config_file)
    assert config.output_dir == Path("/custom/reports")
    assert config.default_seed == 7
    assert config.workers == 4
    assert config.total_arrivals == 50_000
    assert config.warmup_fraction == 0.1
    assert config.batch_count == 40
    assert config.sup_reps == 2000
    assert config.horizon_multiplier == 12.5


def test_config_output_dir_expands_tilde(tmp_path: Path):
    config = KingboundConfig(config_path=_write(tmp_path / "config.yaml", {"output_dir": "~/kb"}))
    assert "~" not in str(config.output_dir)
    assert config.output_dir.name == "kb"


def test_config_get_dotted_path(tmp_path: Path):
    config_file = _write(tmp_path / "config.yaml", {
        "level1": {"level2": {"level3": "deep_value"}, "simple": "value"},
        "top": "top_value",
    })

    config = KingboundConfig(config_path=config_file)
    assert config.get("top") == "top_value"
    assert config.get("level1.simple") == "value"
    assert config.get("level1.level2.level3") == "deep_value"
    assert config.get("nonexistent") is None
    assert config.get("nonexistent", "default") == "default"
    assert config.get("top.deeper") is None


def test_settings_defaults(tmp_path: Path):
    config = KingboundConfig(config_path=_write(tmp_path / "config.yaml", {"sup": {"reps": 1500}}))
    defaults = config.settings_defaults()
    assert defaults["reps"] == 1500
    assert defaults["seed"] == DEFAULT_SEED
    assert set(defaults) == {"seed", "workers", "total_arrivals", "warmup_fraction", "batch_count", "reps",
                             "horizon_multiplier"}


def test_campaign_search_paths(tmp_path: Path, monkeypatch):
    cwd_campaigns = tmp_path / "cwd" / "campaigns"
    cwd_campaigns.mkdir(parents=True)
    user_dir = tmp_path / "user"
    (user_dir / "campaigns").mkdir(parents=True)
    extra = tmp_path / "extra"
    extra.mkdir()

    config_file = _write(user_dir / "config.yaml", {
        "campaign_paths": [str(extra), str(tmp_path / "missing")],
    })
    monkeypatch.chdir(tmp_path / "cwd")

    paths = KingboundConfig(config_path=config_file).get_campaign_search_paths()
    assert [p.resolve() for p in paths] == [
        cwd_campaigns.resolve(), (user_dir / "campaigns").resolve(), extra.resolve(),
    ]


def test_campaign_search_paths_empty(tmp_path: Path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = KingboundConfig(config_path=tmp_path / "nowhere" / "config.yaml")
    assert config.get_campaign_search_paths() == []


def test_config_root_without_variables():
    assert get_config_root(None) == DEFAULT_CONFIG_DIR
