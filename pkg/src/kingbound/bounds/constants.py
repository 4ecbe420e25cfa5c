"""Universal constants of the multi-server bounds."""

from __future__ import annotations

from kingbound.bounds.base import lg, ls, require
from kingbound.xnum import LogScalar

# rounded prefactor stated for the r=3 bounds
CUBIC_PREFACTOR_EXP10 = 450.0


def c1_exp10(r: float) -> float:
    """log10 of C_{r,1} = (10^120 r^32 (r-2)^-12)^r."""
    require(r > 2, "universal-constants", "r=%g must be > 2", r)
    return r * (120.0 + 32.0 * lg(r) - 12.0 * lg(r - 2.0))


def c2_exp10(r: float) -> float:
    """log10 of C_{r,2} = (10 r / (r-2))^r C_{r,1}."""
    return c1_exp10(r) + r * (1.0 + lg(r) - lg(r - 2.0))


def universal_constants(r: float) -> tuple[LogScalar, LogScalar]:
    """Return ``(C_{r,1}, C_{r,2})``."""
    return ls(c1_exp10(r)), ls(c2_exp10(r))


def moment_coefficient_exp10(r: float, z: float) -> float:
    """log10 of (10 r z / (r - 2 z))^r C_{r,1}, the z-th moment coefficient."""
    require(1.0 <= z, "higher-moment", "z=%g must be >= 1", z)
    require(z < r / 2.0, "higher-moment", "z=%g must be < r/2=%g (coefficient diverges)", z, r / 2.0)
    return c1_exp10(r) + r * (1.0 + lg(r) + lg(z) - lg(r - 2.0 * z))
