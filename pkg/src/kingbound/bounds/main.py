"""Explicit tail, delay-probability and moment bounds for FCFS GI/GI/n.

All values are built in log10 space; the universal constants exceed the
float range by hundreds of decades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from kingbound.bounds.base import BoundError, MomentSummary, check_rho, lg, ls, require
from kingbound.bounds.constants import CUBIC_PREFACTOR_EXP10, c1_exp10, c2_exp10, moment_coefficient_exp10
from kingbound.xnum import LogScalar

_LOG10_E = math.log10(math.e)


@dataclass(frozen=True)
class HalfinWhittBounds:
    tail: LogScalar
    sspd: LogScalar
    mean: LogScalar
    moment: LogScalar | None = None


def main_tail_bound(m: MomentSummary, x: float) -> LogScalar:
    """Bound on ``P(L >= x / (1 - rho))``."""
    require(x > 0, "main-tail", "x=%g must be > 0", x)
    return ls(c1_exp10(m.r) + m.moment_product_exp10 - (m.r / 2.0) * lg(x))


def main_sspd_bound(m: MomentSummary) -> LogScalar:
    """Bound on the steady-state probability of delay ``P(Q >= n)``."""
    return ls(c1_exp10(m.r) + m.moment_product_exp10 - (m.r / 2.0) * lg(m.heavy_traffic_factor))


def mean_bounds(m: MomentSummary) -> tuple[LogScalar, LogScalar]:
    """Multi-server Kingman analogue; returns ``(E[L] bound, E[W] bound)``."""
    queue = c2_exp10(m.r) + m.moment_product_exp10 - lg(1.0 - m.rho)
    return ls(queue), ls(queue + lg(m.mean_interarrival))


def refined_mean_bound(m: MomentSummary) -> LogScalar:
    """Mean bound with the extra ``(n (1-rho)^2)^-(r/2 - 1)`` factor."""
    queue, _wait = mean_bounds(m)
    return ls(queue.exp10 - (m.r / 2.0 - 1.0) * lg(m.heavy_traffic_factor))


def higher_moment_bound(m: MomentSummary, z: float) -> LogScalar:
    """Bound on ``E[L^z]`` for ``1 <= z < r/2``."""
    return ls(moment_coefficient_exp10(m.r, z) + m.moment_product_exp10 - z * lg(1.0 - m.rho))


def halfin_whitt_bounds(
    m: MomentSummary, B: float, x: float, z: float | None = None, n: int | None = None
) -> HalfinWhittBounds:
    """Bounds in the Halfin-Whitt regime ``rho <= 1 - B / sqrt(n)``.

    ``m`` must carry the normalized moments of the unit-mean Â and Ŝ. The
    tail bound is for ``P(L >= x sqrt(n))`` and the mean bound for
    ``E[L] / sqrt(n)``.
    """
    require(B > 0, "halfin-whitt", "excess B=%g must be > 0", B)
    require(x > 0, "halfin-whitt", "x=%g must be > 0", x)
    if n is not None:
        require(n > B * B, "halfin-whitt", "n=%r must exceed B^2=%g", n, B * B)
    c1 = c1_exp10(m.r)
    lb = lg(B)
    tail = ls(c1 + m.moment_product_exp10 - (m.r / 2.0) * lb - (m.r / 2.0) * lg(x))
    sspd = ls(c1 + m.moment_product_exp10 - m.r * lb)
    mean = ls(c2_exp10(m.r) + m.moment_product_exp10 - (m.r - 1.0) * lb)
    moment = None
    if z is not None:
        moment = ls(moment_coefficient_exp10(m.r, z) + m.moment_product_exp10 - (m.r / 2.0) * lb)
    return HalfinWhittBounds(tail=tail, sspd=sspd, mean=mean, moment=moment)


def default_theta(ES: float, ES2: float) -> tuple[float, float]:
    """Return ``(theta, surrogate)`` with ``theta = E[S] / (2 E[S^2])``.

    For unit-mean ``S`` the surrogate ``4 E[S^2]`` upper-bounds
    ``1 / (1 - E[exp(-theta S)])``.
    """
    require(ES > 0, "default-theta", "E[S]=%g must be > 0", ES)
    if ES2 < ES * ES * (1.0 - 1e-12):
        raise BoundError("default-theta: E[S^2]=%g is below E[S]^2=%g" % (ES2, ES * ES))
    return ES / (2.0 * ES2), 4.0 * ES2


def _supremum_shape(r: float, base: float) -> float:
    require(r > 2, "supremum-tail", "r=%g must be > 2", r)
    return 4.0 * r * (base + 8.0 * lg(r) - 3.0 * lg(r - 2.0))


def supremum_tail_explicit(r: float, mS3: float, mAr: float, rho_nprime: float, z: float) -> LogScalar:
    """Bound on ``P(sup_t (A(t) - sum_i N_i(t)) >= z)`` with unit-mean service.

    ``mS3`` is ``(E[S^r])^3`` and ``mAr`` is ``E[A^r] mu_A^r``.
    """
    rho_nprime = check_rho(rho_nprime, "sup-explicit")
    require(z > 0, "sup-explicit", "z=%g must be > 0", z)
    require(mS3 > 0 and mAr > 0, "sup-explicit", "moments must be > 0")
    return ls(lg(mS3) + lg(mAr) + _supremum_shape(r, 26.0) - (r / 2.0) * lg(z * (1.0 - rho_nprime)))


def supremum_tail_theta(
    r: float, ESr: float, mAr: float, theta: float, laplace_gap: float, rho_nprime: float, z: float
) -> LogScalar:
    """Supremum tail bound before the choice of ``theta``.

    ``laplace_gap`` is ``1 - E[exp(-theta S)]``.
    """
    rho_nprime = check_rho(rho_nprime, "sup-theta")
    require(theta > 0, "sup-theta", "theta=%g must be > 0", theta)
    require(0 < laplace_gap < 1, "sup-theta", "laplace_gap=%g must lie in (0, 1)", laplace_gap)
    require(z > 0, "sup-theta", "z=%g must be > 0", z)
    return ls(
        lg(ESr) + lg(mAr) + 2.0 * theta * _LOG10_E
        + _supremum_shape(r, 24.0) - 4.0 * r * lg(laplace_gap)
        - (r / 2.0) * lg(z * (1.0 - rho_nprime))
    )


def sspd_explicit(r: float, ESr3: float, mAr: float, n: int, rho: float) -> tuple[LogScalar, bool]:
    """Explicit delay-probability bound with its range flag.

    Returns ``(bound, in_range)``; ``in_range`` is true when ``n >= 5`` and
    ``rho <= 1 - 4/n``. Outside that range the bound is at least 1.
    """
    rho = check_rho(rho, "sspd-explicit")
    value = ls(lg(ESr3) + lg(mAr) + _supremum_shape(r, 27.0) - (r / 2.0) * lg(n * (1.0 - rho) ** 2))
    in_range = n >= 5 and rho <= 1.0 - 4.0 / n
    if not in_range and value.exp10 < 0.0:
        value = ls(0.0)
    return value, in_range


def cubic_moment_bounds(mS3: float, mA3: float, x: float, n: int, rho: float) -> tuple[LogScalar, LogScalar, LogScalar]:
    """The r=3 bounds with the rounded ``10^450`` prefactor.

    Returns ``(tail, sspd, mean)``; ``mS3``/``mA3`` are the third normalized moments.
    """
    rho = check_rho(rho, "cubic")
    require(x > 0, "cubic", "x=%g must be > 0", x)
    base = CUBIC_PREFACTOR_EXP10 + 3.0 * (lg(mS3) + lg(mA3))
    return (
        ls(base - 1.5 * lg(x)),
        ls(base - 1.5 * lg(n * (1.0 - rho) ** 2)),
        ls(base - lg(1.0 - rho)),
    )
