"""Shared types and helpers for bound evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from kingbound.xnum import LogScalar, from_value


class BoundError(Exception):
    """Raised when a bound formula is evaluated outside its hypotheses."""


class UnstableQueueError(BoundError):
    """Raised for a queue with traffic intensity rho >= 1."""


def require(condition: bool, formula: str, message: str, *args) -> None:
    """Raise :class:`BoundError` naming ``formula`` unless ``condition`` holds."""
    if not condition:
        raise BoundError("%s: %s" % (formula, message % args if args else message))


def check_rho(rho: float, formula: str) -> float:
    rho = float(rho)
    if rho >= 1.0:
        raise UnstableQueueError("%s: traffic intensity rho=%g must be < 1" % (formula, rho))
    require(rho > 0.0, formula, "traffic intensity rho=%g must be > 0", rho)
    return rho


def lg(x: float) -> float:
    """log10 of a positive real."""
    return math.log10(x)


def ls(exp10: float) -> LogScalar:
    return LogScalar.from_exp10(exp10)


def lv(x: float) -> LogScalar:
    """LogScalar of a non-negative real."""
    return from_value(x)


@dataclass(frozen=True)
class MomentSummary:
    """Inputs shared by the main bounds.

    ``mS`` and ``mA`` are the normalized moments E[(S mu_S)^r] and E[(A mu_A)^r].
    """

    r: float
    mS: float
    mA: float
    n: int
    rho: float
    mean_interarrival: float = 1.0

    def __post_init__(self):
        require(self.r > 2, "MomentSummary", "moment order r=%g must be > 2", self.r)
        require(self.mS >= 1 and self.mA >= 1, "MomentSummary", "normalized moments must be >= 1 (mS=%g, mA=%g)",
                self.mS, self.mA)
        require(int(self.n) == self.n and self.n >= 1, "MomentSummary", "n=%r must be a positive integer", self.n)
        check_rho(self.rho, "MomentSummary")
        require(self.mean_interarrival > 0, "MomentSummary", "mean_interarrival must be > 0")

    @property
    def moment_product_exp10(self) -> float:
        """log10 of (mS * mA)^3."""
        return 3.0 * (lg(self.mS) + lg(self.mA))

    @property
    def heavy_traffic_factor(self) -> float:
        """n (1 - rho)^2."""
        return self.n * (1.0 - self.rho) ** 2
