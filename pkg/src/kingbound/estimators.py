"""Steady-state point and tail estimators shared by the simulators."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)

Weighting = Literal["time-average", "customer-average", "replication-average"]
WEIGHTINGS = ("time-average", "customer-average", "replication-average")

# two-sided normal quantile for binomial intervals
_Z95 = float(stats.norm.ppf(0.975))


class SimulationError(Exception):
    """Raised for invalid simulation settings or unusable sample sets."""


@dataclass(frozen=True)
class StationaryEstimate:
    """Point estimate with a 95% confidence half-width."""

    point: float
    ci_half_width: float
    batches: int
    effective_samples: int

    @property
    def upper(self) -> float:
        return self.point + self.ci_half_width

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "ci_half_width": self.ci_half_width,
            "batches": self.batches,
            "effective_samples": self.effective_samples,
        }


@dataclass(frozen=True)
class TailCurve:
    """Estimated ``P(X >= level)`` along a grid of levels."""

    grid: tuple[float, ...]
    survival: tuple[float, ...]
    ci_half_widths: tuple[float, ...]
    weighting: Weighting
    effective_samples: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (len(self.grid) == len(self.survival) == len(self.ci_half_widths)):
            raise SimulationError("tail curve lengths differ")

    def at(self, level: float) -> tuple[float, float]:
        """``(survival, ci)`` at a grid level."""
        try:
            i = self.grid.index(float(level))
        except ValueError:
            raise SimulationError("level %g is not on the grid" % level) from None
        return self.survival[i], self.ci_half_widths[i]

    def to_dict(self) -> dict:
        return {
            "grid": list(self.grid),
            "survival": list(self.survival),
            "ci_half_widths": list(self.ci_half_widths),
            "weighting": self.weighting,
        }


def _check_grid(grid: Sequence[float]) -> np.ndarray:
    levels = np.asarray(grid, dtype=np.float64)
    if levels.ndim != 1 or levels.size == 0:
        raise SimulationError("tail grid must be a non-empty list of levels")
    if np.any(np.diff(levels) < 0):
        raise SimulationError("tail grid must be sorted ascending")
    return levels


def _groups(n: int, batches: int) -> np.ndarray:
    """Contiguous equal-count batch labels for ``n`` samples."""
    return (np.arange(n, dtype=np.int64) * batches) // n


def _t_half_width(batch_values: np.ndarray) -> float:
    b = batch_values.size
    if b < 2:
        return 0.0
    spread = float(np.std(batch_values, ddof=1))
    return float(stats.t.ppf(0.975, b - 1)) * spread / np.sqrt(b)


def batch_means(
    values,
    weights=None,
    groups=None,
    batches: int = 30,
) -> StationaryEstimate:
    """Batch-means estimate of a (weighted) steady-state mean.

    Samples are split into ``batches`` contiguous chunks unless explicit
    ``groups`` labels are given. The confidence half-width uses the Student-t
    quantile with ``batches - 1`` degrees of freedom.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise SimulationError("cannot estimate from an empty sample set")
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=np.float64)
    total = float(w.sum())
    if total <= 0:
        raise SimulationError("sample weights sum to zero")
    point = float(np.dot(w, x) / total)

    labels = _groups(x.size, min(batches, x.size)) if groups is None else np.asarray(groups, dtype=np.int64)
    count = int(labels.max()) + 1
    wsum = np.bincount(labels, weights=w, minlength=count)
    xsum = np.bincount(labels, weights=w * x, minlength=count)
    keep = wsum > 0
    per_batch = xsum[keep] / wsum[keep]
    return StationaryEstimate(
        point=point,
        ci_half_width=_t_half_width(per_batch),
        batches=int(keep.sum()),
        effective_samples=int(x.size),
    )


def _survival(sorted_x: np.ndarray, suffix_w: np.ndarray, total: float, levels: np.ndarray) -> np.ndarray:
    # suffix_w[i] is the weight of sorted_x[i:]
    idx = np.searchsorted(sorted_x, levels, side="left")
    return suffix_w[idx] / total


def _prepare(x: np.ndarray, w: np.ndarray):
    order = np.argsort(x, kind="stable")
    sx = x[order]
    sw = w[order]
    suffix = np.concatenate([np.cumsum(sw[::-1])[::-1], [0.0]])
    return sx, suffix, float(sw.sum())


def estimate_tail(
    values,
    grid: Sequence[float],
    weighting: Weighting = "customer-average",
    weights=None,
    groups=None,
    batches: int | None = None,
) -> TailCurve:
    """Estimate ``P(X >= level)`` for every level in ``grid``.

    Without ``groups``/``batches`` the intervals are binomial with the
    effective sample size ``(sum w)^2 / sum w^2``; otherwise they come from
    batch means over the survival indicator. Point estimates share one sorted
    pass, so the curve is nonincreasing.
    """
    if weighting not in WEIGHTINGS:
        raise SimulationError("unknown weighting %r (expected one of %s)" % (weighting, ", ".join(WEIGHTINGS)))
    levels = _check_grid(grid)
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise SimulationError("cannot estimate a tail from an empty sample set")
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=np.float64).ravel()
    sx, suffix, total = _prepare(x, w)
    if total <= 0:
        raise SimulationError("sample weights sum to zero")
    surv = _survival(sx, suffix, total, levels)

    if groups is None and batches is None:
        n_eff = total * total / float(np.dot(w, w))
        ci = _Z95 * np.sqrt(surv * (1.0 - surv) / n_eff)
        eff = int(round(n_eff))
    else:
        labels = _groups(x.size, min(batches or 30, x.size)) if groups is None else np.asarray(groups).ravel()
        per_batch = []
        for label in np.unique(labels):
            mask = labels == label
            bx, bsuffix, btotal = _prepare(x[mask], w[mask])
            if btotal > 0:
                per_batch.append(_survival(bx, bsuffix, btotal, levels))
        matrix = np.vstack(per_batch)
        ci = np.array([_t_half_width(matrix[:, j]) for j in range(levels.size)])
        eff = int(x.size)

    return TailCurve(
        grid=tuple(float(v) for v in levels),
        survival=tuple(float(v) for v in np.clip(surv, 0.0, 1.0)),
        ci_half_widths=tuple(float(v) for v in ci),
        weighting=weighting,
        effective_samples=eff,
    )
