"""Classical single- and multi-server mean bounds and regime helpers."""

from __future__ import annotations

import math

from kingbound.bounds.base import check_rho, lv, require
from kingbound.xnum import LogScalar


def kingman_single(cA2: float, cS2: float, rho: float, mean_interarrival: float) -> tuple[LogScalar, LogScalar]:
    """Kingman's GI/GI/1 bound in queue and wait form.

    Returns ``(queue_bound, wait_bound)`` with
    ``queue_bound = (cA2 + rho^2 cS2) / 2 / (1 - rho)`` and the wait bound
    ``lambda (sigma_A^2 + sigma_S^2) / (2 (1 - rho))``, which equals
    ``E[A] * queue_bound``.
    """
    rho = check_rho(rho, "kingman")
    require(cA2 >= 0 and cS2 >= 0, "kingman", "squared coefficients of variation must be >= 0")
    require(mean_interarrival > 0, "kingman", "mean_interarrival must be > 0")
    queue = (cA2 + rho * rho * cS2) / 2.0 / (1.0 - rho)

    var_a = cA2 * mean_interarrival ** 2
    var_s = cS2 * (rho * mean_interarrival) ** 2
    wait = (var_a + var_s) / (2.0 * mean_interarrival * (1.0 - rho))
    return lv(queue), lv(wait)


def kingman_weakened(cA2: float, cS2: float, rho: float) -> LogScalar:
    """``(cA2 + cS2) / 2 / (1 - rho)``, Kingman's bound with rho^2 dropped."""
    rho = check_rho(rho, "kingman-weakened")
    require(cA2 >= 0 and cS2 >= 0, "kingman-weakened", "squared coefficients of variation must be >= 0")
    return lv((cA2 + cS2) / 2.0 / (1.0 - rho))


def cyclic_multiserver(cA2: float, cS2: float, n: int, rho: float) -> LogScalar:
    """Mean queue bound for FCFS GI/GI/n, ``(cA2 + n cS2) / 2 / (1 - rho)``."""
    rho = check_rho(rho, "cyclic")
    require(n >= 1, "cyclic", "n=%r must be >= 1", n)
    require(cA2 >= 0 and cS2 >= 0, "cyclic", "squared coefficients of variation must be >= 0")
    return lv((cA2 + n * cS2) / 2.0 / (1.0 - rho))


def heavy_traffic_targets(cA2: float, cS2: float, mean_interarrival: float) -> tuple[float, float]:
    """Means of the exponential weak limits of ``(1-rho) W`` and ``(1-rho) L``."""
    require(mean_interarrival > 0, "heavy-traffic", "mean_interarrival must be > 0")
    queue_scale = (cA2 + cS2) / 2.0
    return mean_interarrival * queue_scale, queue_scale


def halfin_whitt_excess(n: int, rho: float) -> float:
    """Largest ``B`` with ``rho <= 1 - B / sqrt(n)``."""
    rho = check_rho(rho, "halfin-whitt")
    return (1.0 - rho) * math.sqrt(n)


def sspd_comparison_params(n: int, mu_A: float, mu_S: float = 1.0) -> tuple[int, int, bool]:
    """Server count and threshold for comparing the delay probability.

    Returns ``(n_prime, threshold, vacuous)`` with
    ``threshold = floor((n - mu_A/mu_S) / 2)`` and ``n_prime = n - threshold``.
    A zero threshold makes the comparison trivial and is flagged vacuous.
    """
    require(n >= 1, "sspd-comparison", "n=%r must be >= 1", n)
    check_rho(mu_A / (n * mu_S), "sspd-comparison")
    threshold = int(math.floor((n - mu_A / mu_S) / 2.0))
    return n - threshold, threshold, threshold == 0
