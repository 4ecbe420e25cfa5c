"""Moment and supremum lemmas underlying the main bounds.

Two evaluators dispatch by lemma id: :func:`lemma_moment_bound` for moment
bounds on renewal counts and partial sums, and :func:`lemma_sup_bound` for
maximal inequalities and all-time suprema.  Every lemma checks its own
hypotheses and raises :class:`BoundError` naming the lemma and the violated
condition.

``gap`` parameters always mean the Laplace gap ``1 - E[exp(-theta S)]``.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from kingbound.bounds.base import BoundError, lg, ls, require
from kingbound.bounds.conditional import ConditionalParams
from kingbound.xnum import LogScalar, add_all

_LOG10_E = math.log10(math.e)


def _gap_ok(lemma: str, theta: float, gap: float) -> None:
    require(theta > 0, lemma, "theta=%g must be > 0", theta)
    require(0 < gap <= 1, lemma, "laplace gap=%g must lie in (0, 1]", gap)


def _pos(lemma: str, **values: float) -> None:
    for name, value in values.items():
        require(value > 0, lemma, "%s=%g must be > 0", name, value)


# ---------------------------------------------------------------------------
# Moment lemmas
# ---------------------------------------------------------------------------


def pooled_central(*, r: float, ESr: float, theta: float, gap: float, k: int, t: float) -> LogScalar:
    """``E|sum_{i<=k} N_i(t) - k t|^r`` for equilibrium renewal counts, ``t >= 1``."""
    name = "pooled-central"
    require(r >= 2, name, "r=%g must be >= 2", r)
    require(k >= 1, name, "k=%r must be >= 1", k)
    require(t >= 1, name, "t=%g must be >= 1", t)
    _gap_ok(name, theta, gap)
    _pos(name, ESr=ESr)
    return ls(theta * _LOG10_E + lg(ESr) + (r + 2) * (8 + 3 * lg(r) - lg(gap)) + (r / 2) * (lg(k) + lg(t)))


def renewal_central(*, r: float, ESr: float, theta: float, gap: float, t: float) -> LogScalar:
    """``E|N_o(t) - t|^r`` for an ordinary renewal process, ``t >= 1``."""
    name = "renewal-central"
    require(r >= 2, name, "r=%g must be >= 2", r)
    require(t >= 1, name, "t=%g must be >= 1", t)
    _gap_ok(name, theta, gap)
    _pos(name, ESr=ESr)
    return ls(theta * _LOG10_E + lg(ESr) + (r + 1) * (5 + 2 * lg(r) - lg(gap)) + (r / 2) * lg(t))


def equilibrium_central(*, r: float, ESr: float, theta: float, gap: float, t: float) -> LogScalar:
    """``E|N(t) - t|^r`` for an equilibrium renewal process, ``t >= 1``."""
    name = "equilibrium-central"
    require(r >= 2, name, "r=%g must be >= 2", r)
    require(t >= 1, name, "t=%g must be >= 1", t)
    _gap_ok(name, theta, gap)
    _pos(name, ESr=ESr)
    return ls(theta * _LOG10_E + lg(ESr) + (r + 2) * (7 + 2 * lg(r) - lg(gap)) + (r / 2) * lg(t))


def count_moment(*, p: float, theta: float, gap: float) -> LogScalar:
    """``E[N_o(1)^p]``."""
    name = "count-moment"
    require(p >= 1, name, "p=%g must be >= 1", p)
    _gap_ok(name, theta, gap)
    return ls(theta * _LOG10_E + (p + 2) * (lg(24 * p) - lg(gap)))


def count_moment_t(*, p: float, theta: float, gap: float, t: float) -> LogScalar:
    """``E[(N_o(t) + 1)^p]`` for ``t >= 1``."""
    name = "count-moment-t"
    require(p >= 1, name, "p=%g must be >= 1", p)
    require(t >= 1, name, "t=%g must be >= 1", t)
    _gap_ok(name, theta, gap)
    return ls(theta * _LOG10_E + (p + 2) * (lg(100 * p) - lg(gap)) + p * lg(t))


def noncentral_growth(*, p: float, t: float, base: float) -> LogScalar:
    """``E[(N_o(t) + 1)^p] <= (2t)^p E[(N_o(1) + 1)^p]`` with ``base`` the latter."""
    name = "noncentral-growth"
    require(p >= 1, name, "p=%g must be >= 1", p)
    require(t >= 1, name, "t=%g must be >= 1", t)
    require(base >= 1, name, "base moment E[(N_o(1)+1)^p]=%g must be >= 1", base)
    return ls(p * lg(2 * t) + lg(base))


def _small_t(name: str, p: float, theta: float, gap: float, k: int, t: float, coeff_exp10: float,
             power: float) -> LogScalar:
    require(p >= 2, name, "p=%g must be >= 2", p)
    require(k >= 1, name, "k=%r must be >= 1", k)
    require(0 <= t <= 1, name, "t=%g must lie in [0, 1]", t)
    _gap_ok(name, theta, gap)
    kt = k * t
    if kt == 0:
        return LogScalar.zero()
    growth = max(kt, kt ** power)
    return ls(theta * _LOG10_E + (p + 2) * (coeff_exp10 - lg(gap)) + lg(growth))


def pooled_small_t_weak(*, p: float, theta: float, gap: float, k: int, t: float) -> LogScalar:
    """Small-``t`` pooled central moment with growth ``max(kt, (kt)^p)``."""
    return _small_t("pooled-small-t-weak", p, theta, gap, k, t, 3 + 3 * lg(p), p)


def pooled_small_t(*, p: float, theta: float, gap: float, k: int, t: float) -> LogScalar:
    """Small-``t`` pooled central moment with growth ``max(kt, (kt)^(p/2))``."""
    return _small_t("pooled-small-t", p, theta, gap, k, t, 5 + 4 * lg(p), p / 2)


def arrival_central(*, r3: float, mAr: float, k: int) -> LogScalar:
    """``E|k - mu_A sum_{i<=k} A_i|^r3``; ``mAr`` is ``E[A^r3] mu_A^r3``."""
    name = "arrival-central"
    require(r3 >= 2, name, "r3=%g must be >= 2", r3)
    require(k >= 1, name, "k=%r must be >= 1", k)
    _pos(name, mAr=mAr)
    return ls(r3 * lg(10 * r3) + lg(mAr) + (r3 / 2) * lg(k))


def marcinkiewicz_zygmund(*, p: float, abs_moment: float, k: int) -> LogScalar:
    """``E|sum_{i<=k} X_i|^p`` for i.i.d. centered ``X`` with ``E|X|^p = abs_moment``."""
    name = "marcinkiewicz-zygmund"
    require(p >= 2, name, "p=%g must be >= 2", p)
    require(k >= 1, name, "k=%r must be >= 1", k)
    require(abs_moment >= 0, name, "E|X|^p=%g must be >= 0", abs_moment)
    if abs_moment == 0:
        return LogScalar.zero()
    return ls(p * lg(5 * p) + lg(abs_moment) + (p / 2) * lg(k))


def nonnegative_sum(*, p: float, mean: float, moment: float, k: int) -> LogScalar:
    """``E[(sum_{i<=k} X_i)^p]`` for i.i.d. non-negative ``X``."""
    name = "nonnegative-sum"
    require(p >= 1, name, "p=%g must be >= 1", p)
    require(k >= 1, name, "k=%r must be >= 1", k)
    _pos(name, mean=mean, moment=moment)
    return ls(p * lg(2 * p) + max(p * lg(k * mean), lg(k * moment)))


MOMENT_LEMMAS: dict[str, Callable[..., LogScalar]] = {
    "pooled-central": pooled_central,
    "renewal-central": renewal_central,
    "equilibrium-central": equilibrium_central,
    "count-moment": count_moment,
    "count-moment-t": count_moment_t,
    "noncentral-growth": noncentral_growth,
    "pooled-small-t-weak": pooled_small_t_weak,
    "pooled-small-t": pooled_small_t,
    "arrival-central": arrival_central,
    "marcinkiewicz-zygmund": marcinkiewicz_zygmund,
    "nonnegative-sum": nonnegative_sum,
}


# ---------------------------------------------------------------------------
# Supremum lemmas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteReformulation:
    """Continuous arrival supremum restated over arrival indices.

    ``P(sup_t (A(t) - mu' t - nu t) >= lam)`` equals
    ``P(sup_k (k - mu' sum_{i<=k} A_i - drift k) >= level)``.
    """

    drift: float
    level: float


def tail_continuous(*, H1: float, H2: float, s: float, r1: float, r2: float, nu: float, lam: float,
                    Z: float = 0.0) -> LogScalar:
    """All-time supremum with linear drift for continuous-time processes."""
    name = "tail-continuous"
    require(r1 > s > 1, name, "r1 > s > 1 violated (r1=%g, s=%g)", r1, s)
    require(r2 > 2, name, "r2=%g must be > 2", r2)
    require(Z >= 0, name, "Z=%g must be >= 0", Z)
    require(lam >= 4 * Z, name, "lambda=%g must be >= 4Z=%g", lam, 4 * Z)
    _pos(name, H1=H1, H2=H2, nu=nu, lam=lam)
    front = lg(1 + 1 / (r1 - s)) + (r1 + r2 + 2) * lg(4)
    total = add_all([
        ls(lg(H1) - s * lg(nu) - (r1 - s) * lg(lam)),
        ls(lg(H2) - (r2 / 2) * lg(lam * nu)),
    ])
    return ls(front + total.exp10)


def tail_discrete(*, H3: float, s3: float, r3: float, nu: float, lam: float) -> LogScalar:
    """All-time supremum with linear drift for discrete-time processes."""
    name = "tail-discrete"
    require(r3 > s3 >= 1, name, "r3 > s3 >= 1 violated (r3=%g, s3=%g)", r3, s3)
    _pos(name, H3=H3, nu=nu, lam=lam)
    return ls(lg(16 * H3) + r3 * lg(4) + lg(1 + 1 / (r3 - s3)) - s3 * lg(nu) - (r3 - s3) * lg(lam))


def maximal(*, nu: float, gamma: float, C: float, L: int, lam: float) -> LogScalar:
    """Maximal inequality for partial sums from increment tail bounds."""
    name = "maximal"
    require(gamma > 1, name, "gamma=%g must be > 1", gamma)
    require(nu >= gamma, name, "nu >= gamma violated (nu=%g, gamma=%g)", nu, gamma)
    require(L >= 1, name, "L=%r must be >= 1", L)
    _pos(name, C=C, lam=lam)
    return ls((nu + 1) * lg(6 * (nu + 1) / (gamma - 1)) + gamma * lg(C * L) - nu * lg(lam))


def maximal_integer(*, C1: float, r1: float, s1: float, n_prime: int, k: int, lam: float) -> LogScalar:
    """Pooled counts over consecutive integer times."""
    name = "maximal-integer"
    require(s1 > 1, name, "s1=%g must be > 1", s1)
    require(r1 >= s1, name, "r1 >= s1 violated (r1=%g, s1=%g)", r1, s1)
    require(k >= 0 and int(k) == k, name, "k=%r must be a non-negative integer", k)
    require(n_prime >= 1, name, "n'=%r must be >= 1", n_prime)
    _pos(name, C1=C1, lam=lam)
    if k == 0:
        return LogScalar.zero()
    return ls((r1 + 1) * lg(6 * (r1 + 1) / (s1 - 1)) + lg(C1) + (r1 / 2) * lg(n_prime) + s1 * lg(k)
              - r1 * lg(lam))


def maximal_short(*, C2: float, r2: float, n_prime: int, t0: float, lam: float) -> LogScalar:
    """Pooled counts over an interval of length at most one."""
    name = "maximal-short"
    require(r2 > 2, name, "r2=%g must be > 2", r2)
    require(0 <= t0 <= 1, name, "t0=%g must lie in [0, 1]", t0)
    require(lam >= 2, name, "lambda=%g must be >= 2", lam)
    require(n_prime >= 1, name, "n'=%r must be >= 1", n_prime)
    _pos(name, C2=C2)
    if t0 == 0:
        return LogScalar.zero()
    return ls((r2 + 1) * lg(24 * (r2 + 1) / (r2 - 2)) + lg(C2) + (r2 / 2) * lg(n_prime * t0) - r2 * lg(lam))


def all_time_pooled(*, C1: float, C2: float, r1: float, r2: float, s1: float, n_prime: int, nu: float,
                    lam: float) -> LogScalar:
    """``P(sup_t (n' t - sum_i N_i(t) - nu t) >= lam)`` for ``lam >= 8``."""
    name = "all-time-pooled"
    require(r1 > s1 > 1, name, "r1 > s1 > 1 violated (r1=%g, s1=%g)", r1, s1)
    require(r2 > 2, name, "r2=%g must be > 2", r2)
    require(lam >= 8, name, "lambda=%g must be >= 8", lam)
    require(n_prime >= 1, name, "n'=%r must be >= 1", n_prime)
    _pos(name, C1=C1, C2=C2, nu=nu)
    front = (r1 + r2 + 2) * (lg(100) + 3 * lg(r1 + r2) - lg((s1 - 1) * (r1 - s1) * (r2 - 2)))
    total = add_all([
        ls(lg(C1) + (r1 / 2) * lg(n_prime) - s1 * lg(nu) - (r1 - s1) * lg(lam)),
        ls(lg(C2) + (r2 / 2) * lg(n_prime) - (r2 / 2) * lg(lam * nu)),
    ])
    return ls(front + total.exp10)


def maximal_arrival(*, C3: float, r3: float, s3: float, k: int, lam: float) -> LogScalar:
    """Arrival partial sums over consecutive indices."""
    name = "maximal-arrival"
    require(s3 > 1, name, "s3=%g must be > 1", s3)
    require(r3 >= s3, name, "r3 >= s3 violated (r3=%g, s3=%g)", r3, s3)
    require(k >= 0 and int(k) == k, name, "k=%r must be a non-negative integer", k)
    _pos(name, C3=C3, lam=lam)
    if k == 0:
        return LogScalar.zero()
    return ls((r3 + 1) * lg(6 * (r3 + 1) / (s3 - 1)) + lg(C3) + s3 * lg(k) - r3 * lg(lam))


def discrete_reformulation(*, mu_prime: float, nu: float, lam: float) -> DiscreteReformulation:
    """Drift and level of the equivalent arrival-index supremum."""
    name = "discrete-reformulation"
    _pos(name, mu_prime=mu_prime, nu=nu, lam=lam)
    return DiscreteReformulation(drift=nu / (mu_prime + nu), level=lam / (1 + nu / mu_prime))


def all_time_arrival(*, C3: float, r3: float, s3: float, mu_prime: float, nu: float, lam: float) -> LogScalar:
    """``P(sup_t (A(t) - mu' t - nu t) >= lam)``."""
    name = "all-time-arrival"
    require(r3 > s3 > 1, name, "r3 > s3 > 1 violated (r3=%g, s3=%g)", r3, s3)
    _pos(name, C3=C3, mu_prime=mu_prime, nu=nu, lam=lam)
    front = (r3 + 1) * (3 + 2 * lg(r3 + 1) - lg((s3 - 1) * (r3 - s3)))
    return ls(front + lg(C3) - s3 * lg(nu) + r3 * lg(mu_prime + nu) - (r3 - s3) * lg(mu_prime)
              - (r3 - s3) * lg(lam))


def two_part(*, params: ConditionalParams, x: float) -> tuple[LogScalar, LogScalar]:
    """Split the supremum tail at ``x`` into ``(arrival part, service part)``.

    The arrival part uses level ``x/2 - 1`` and the service part level
    ``x/2``, both with drift ``(n' - mu')/2``.
    """
    name = "two-part"
    require(x > 2, name, "x=%g must be > 2", x)
    nu = params.drift
    arrival = all_time_arrival(C3=params.C3, r3=params.r3, s3=params.s3, mu_prime=params.mu_prime, nu=nu,
                               lam=x / 2 - 1)
    if x / 2 < 8:
        raise BoundError("two-part: service part needs x/2 >= 8 (x=%g)" % x)
    service = all_time_pooled(C1=params.C1, C2=params.C2, r1=params.r1, r2=params.r2, s1=params.s1,
                              n_prime=params.n_prime, nu=nu, lam=x / 2)
    return arrival, service


SUP_LEMMAS: dict[str, Callable[..., Any]] = {
    "tail-continuous": tail_continuous,
    "tail-discrete": tail_discrete,
    "maximal": maximal,
    "maximal-integer": maximal_integer,
    "maximal-short": maximal_short,
    "all-time-pooled": all_time_pooled,
    "maximal-arrival": maximal_arrival,
    "discrete-reformulation": discrete_reformulation,
    "all-time-arrival": all_time_arrival,
    "two-part": two_part,
}


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def lemma_parameters(lemma_id: str) -> list[str]:
    """Parameter names accepted by a moment or supremum lemma."""
    fn = MOMENT_LEMMAS.get(lemma_id) or SUP_LEMMAS.get(lemma_id)
    if fn is None:
        raise BoundError("unknown lemma %r" % lemma_id)
    return list(inspect.signature(fn).parameters)


def _dispatch(table: Mapping[str, Callable[..., Any]], kind: str, lemma_id: str, params: Mapping[str, Any]):
    fn = table.get(lemma_id)
    if fn is None:
        raise BoundError("unknown %s lemma %r (known: %s)" % (kind, lemma_id, ", ".join(sorted(table))))
    sig = inspect.signature(fn)
    unknown = set(params) - set(sig.parameters)
    if unknown:
        raise BoundError("%s: unknown parameter(s) %s" % (lemma_id, ", ".join(sorted(unknown))))
    missing = [n for n, prm in sig.parameters.items() if prm.default is inspect.Parameter.empty and n not in params]
    if missing:
        raise BoundError("%s: missing parameter(s) %s" % (lemma_id, ", ".join(missing)))
    return fn(**params)


def lemma_moment_bound(lemma_id: str, params: Mapping[str, Any]) -> LogScalar:
    """Evaluate the moment lemma ``lemma_id`` (see :data:`MOMENT_LEMMAS`)."""
    return _dispatch(MOMENT_LEMMAS, "moment", lemma_id, params)


def lemma_sup_bound(lemma_id: str, params: Mapping[str, Any]):
    """Evaluate the supremum lemma ``lemma_id`` (see :data:`SUP_LEMMAS`).

    Returns a LogScalar, except ``discrete-reformulation`` (a
    :class:`DiscreteReformulation`) and ``two-part`` (a pair of LogScalars).
    """
    return _dispatch(SUP_LEMMAS, "supremum", lemma_id, params)
