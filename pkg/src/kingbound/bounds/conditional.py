"""Conditional all-time supremum bound for ``A(t) - sum_{i<=n'} N_i(t)``.

The bound holds whenever the pooled service counts and the arrival partial
sums satisfy moment conditions with constants ``C1, C2, C3``; see
:class:`ConditionalParams`.  Service is normalized to unit mean.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from kingbound.bounds.base import BoundError, lg, ls, require
from kingbound.xnum import LogScalar, add_all

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionalParams:
    n_prime: int
    mu_A: float
    C1: float
    C2: float
    C3: float
    r1: float
    r2: float
    r3: float
    s1: float
    s3: float

    def __post_init__(self):
        name = "conditional-sup"
        require(int(self.n_prime) == self.n_prime and self.n_prime >= 1, name, "n'=%r must be a positive integer",
                self.n_prime)
        require(0 < self.mu_A < self.n_prime, name, "0 < mu_A < n' violated (mu_A=%g, n'=%d)", self.mu_A,
                self.n_prime)
        for c in ("C1", "C2", "C3"):
            require(getattr(self, c) > 0, name, "%s=%g must be > 0", c, getattr(self, c))
        require(self.s1 > 1, name, "s1 > 1 violated (s1=%g)", self.s1)
        require(self.r1 > self.s1, name, "r1 > s1 violated (r1=%g, s1=%g)", self.r1, self.s1)
        require(self.s3 > 1, name, "s3 > 1 violated (s3=%g)", self.s3)
        require(self.r3 > self.s3, name, "r3 > s3 violated (r3=%g, s3=%g)", self.r3, self.s3)
        require(self.r2 > 2, name, "r2 > 2 violated (r2=%g)", self.r2)

    @property
    def mu_prime(self) -> float:
        """Arrival rate of the sped-up process, ``max(n'/2, mu_A)``."""
        return max(self.n_prime / 2.0, self.mu_A)

    @property
    def drift(self) -> float:
        """Half the capacity slack, ``(n' - mu') / 2``."""
        return (self.n_prime - self.mu_prime) / 2.0

    @classmethod
    def uniform_order(cls, n_prime: int, mu_A: float, r: float, C1: float, C2: float, C3: float) -> ConditionalParams:
        """All three orders equal ``r`` with ``s1 = s3 = r/2``."""
        return cls(n_prime=n_prime, mu_A=mu_A, C1=C1, C2=C2, C3=C3, r1=r, r2=r, r3=r, s1=r / 2.0, s3=r / 2.0)


def conditional_prefactor_exp10(p: ConditionalParams) -> float:
    total = p.r1 + p.r2 + p.r3
    inner = 6.0 + 5.0 * lg(total) - lg((p.s1 - 1) * (p.s3 - 1) * (p.r1 - p.s1) * (p.r3 - p.s3) * (p.r2 - 2))
    return (total + 1.0) * inner + lg(1 + p.C1) + lg(1 + p.C2) + lg(1 + p.C3)


def conditional_sup_tail(p: ConditionalParams, x: float) -> LogScalar:
    """Bound on ``P(sup_t (A(t) - sum_{i<=n'} N_i(t)) >= x)`` for ``x >= 16``."""
    if x < 16:
        raise BoundError("conditional-sup: x=%g must be >= 16" % x)
    n = float(p.n_prime)
    mu = p.mu_prime
    slack = lg(n - mu)
    lx = lg(x)
    terms = [
        ls((p.r1 / 2.0) * lg(n) - p.s1 * slack - (p.r1 - p.s1) * lx),
        ls((p.r2 / 2.0) * lg(n) - (p.r2 / 2.0) * slack - (p.r2 / 2.0) * lx),
        ls(-p.s3 * slack + p.r3 * lg(n) - (p.r3 - p.s3) * lg(mu) - (p.r3 - p.s3) * lx),
    ]
    total = add_all(terms)
    logger.debug("conditional sup tail: n'=%d mu'=%g x=%g terms=%s", p.n_prime, mu, x, [str(t) for t in terms])
    return ls(conditional_prefactor_exp10(p) + total.exp10)
