"""Shared pytest fixtures for kingbound tests."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import pytest

from kingbound.bootstrap import init_kingbound
from kingbound.dists import make_distribution
from kingbound.qsim import QueueSpec, SimConfig


@pytest.fixture(autouse=True)
def isolate_stateful(tmp_path: Path, monkeypatch):
    """Redirect SAF stateful root to temp dir for test isolation.

    Prevents tests from writing to the real ~/.config/kingbound/.
    Also resets the bootstrap singleton between tests.
    """
    monkeypatch.setenv("STATEFUL_ROOT", str(tmp_path / "stateful"))
    import kingbound.bootstrap
    kingbound.bootstrap._variables = None
    yield
    kingbound.bootstrap._variables = None


@pytest.fixture
def v(tmp_path: Path) -> Any:
    """Initialize kingbound and return the Variables instance."""
    import kingbound.bootstrap
    kingbound.bootstrap._variables = None

    return init_kingbound(log_level="WARNING")


@pytest.fixture
def exp1():
    return make_distribution("exponential", mean=1.0)


@pytest.fixture
def det1():
    return make_distribution("deterministic", value=1.0)


@pytest.fixture
def mm1() -> QueueSpec:
    """M/M/1 at rho = 0.5."""
    return QueueSpec.from_literal({
        "arrival": {"family": "exponential", "mean": 1.0},
        "service": {"family": "exponential", "mean": 1.0},
        "n": 1,
        "rho": 0.5,
    })


@pytest.fixture
def mm2() -> QueueSpec:
    """M/M/2 at rho = 0.5."""
    return QueueSpec.from_literal({
        "arrival": {"family": "exponential", "mean": 1.0},
        "service": {"family": "exponential", "mean": 1.0},
        "n": 2,
        "rho": 0.5,
    })


@pytest.fixture
def small_sim() -> SimConfig:
    """Short run; enough for light-traffic means to a few percent."""
    return SimConfig(total_arrivals=200_000, warmup_fraction=0.1, batch_count=30, master_seed=11)


@pytest.fixture
def smoke_campaign_data() -> dict[str, Any]:
    """A small but complete campaign as a dict."""
    return {
        "name": "unit",
        "description": "tiny campaign for tests",
        "seed": 5,
        "settings": {
            "total_arrivals": 20_000,
            "batch_count": 30,
            "reps": 1000,
            "horizon_multiplier": 10.0,
            "tail_grid": [0, 1, 2],
        },
        "specs": {
            "mm1": {"arrival": {"family": "exponential", "mean": 1.0},
                    "service": {"family": "exponential", "mean": 1.0}, "n": 1, "rho": 0.5},
            "mm2": {"arrival": {"family": "exponential", "mean": 1.0},
                    "service": {"family": "exponential", "mean": 1.0}, "n": 2, "rho": 0.5},
        },
        "steps": [
            {"kind": "constants"},
            {"kind": "kingman", "specs": ["mm1"]},
            {"kind": "cyclic", "specs": ["mm2"]},
        ],
    }
