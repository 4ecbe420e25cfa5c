"""Catalog of non-negative interarrival/service distributions.

Every distribution is an immutable :class:`DistributionSpec` holding a family
name and its canonical parameters.  The module-level functions compute moments,
Laplace transforms and draw samples (ordinary or from the equilibrium law)
using numpy generators keyed by :class:`RngStream`.

Literal form (used by campaign and queue files)::

    {"family": "erlang", "k": 2, "mean": 1.0}
    {"family": "pareto", "shape": 2.5, "mean": 1.0}
    {"family": "hyperexponential", "weights": [0.5, 0.5], "rates": [2.0, 0.667]}

Canonical parameters per family:

==================  ==========================
deterministic       value
exponential         rate
erlang              k, rate
gamma               shape, scale
uniform             a, b
hyperexponential    weights, rates
lognormal           sigma, scale  (scale = e^mu)
weibull             shape, scale
pareto              shape, scale  (scale = x_m)
==================  ==========================

Most families also accept ``mean`` in place of their rate/scale parameter.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from scipy import integrate, special, stats

logger = logging.getLogger(__name__)

FAMILIES = (
    "deterministic",
    "exponential",
    "erlang",
    "gamma",
    "uniform",
    "hyperexponential",
    "lognormal",
    "weibull",
    "pareto",
)

_SEED_MASK = (1 << 64) - 1

# absolute tolerance for Laplace-transform quadrature
_LAPLACE_TOL = 1e-10
# quantile defining the initial quadrature cut-off
_QUAD_TAIL = 1e-12


class DistributionError(Exception):
    """Raised when distribution parameters are invalid."""


class InfiniteMomentError(DistributionError):
    """Raised when a moment order exceeds what the distribution has."""


@dataclass(frozen=True)
class DistributionSpec:
    """A parametric non-negative distribution.

    Build instances with :func:`make_distribution` (which validates and
    canonicalizes); the constructor itself performs no checks.
    """

    family: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.params[key]

    @property
    def mean(self) -> float:
        return _mean(self)

    @property
    def variance(self) -> float:
        return _variance(self)

    @property
    def scv(self) -> float:
        """Squared coefficient of variation, Var[X]/E[X]^2."""
        return self.variance / self.mean ** 2

    @property
    def rate(self) -> float:
        """1/E[X]."""
        return 1.0 / self.mean

    @property
    def moment_order_available(self) -> float:
        """Supremum of orders with finite raw moment (exclusive for pareto)."""
        if self.family == "pareto":
            return float(self.params["shape"])
        return math.inf

    def to_literal(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": self.family}
        for key, value in self.params.items():
            out[key] = list(value) if isinstance(value, tuple) else value
        return out

    @classmethod
    def from_literal(cls, literal: Mapping[str, Any]) -> DistributionSpec:
        return from_literal(literal)

    @property
    def label(self) -> str:
        parts = []
        for key, value in self.params.items():
            if isinstance(value, tuple):
                value = "[" + ",".join("%g" % v for v in value) + "]"
            else:
                value = "%g" % value
            parts.append("%s=%s" % (key, value))
        return "%s(%s)" % (self.family, ", ".join(parts))

    def __str__(self):
        return self.label


@dataclass
class RngStream:
    """Counter-based random stream keyed by ``(master_seed, stream_id)``.

    Backed by numpy's Philox bit generator, so identical keys replay the same
    sequence and different stream ids give independent sequences.
    """

    master_seed: int
    stream_id: int = 0
    _generator: np.random.Generator | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            key = np.array([self.master_seed & _SEED_MASK, self.stream_id & _SEED_MASK], dtype=np.uint64)
            self._generator = np.random.Generator(np.random.Philox(key=key))
        return self._generator


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _positive(family: str, name: str, value) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DistributionError("%s: %s must be a number (got %r)" % (family, name, value)) from None
    if not math.isfinite(value) or value <= 0:
        raise DistributionError("%s: %s must be > 0 (got %r)" % (family, name, value))
    return value


def _take(family: str, params: dict, allowed: set[str]) -> dict:
    unknown = set(params) - allowed
    if unknown:
        raise DistributionError(
            "%s: unknown parameter(s) %s (allowed: %s)" % (family, ", ".join(sorted(unknown)), ", ".join(sorted(allowed)))
        )
    return params


def _one_of(family: str, params: dict, *names: str) -> str:
    present = [n for n in names if n in params]
    if len(present) != 1:
        raise DistributionError("%s: exactly one of %s is required" % (family, " / ".join(names)))
    return present[0]


def make_distribution(family: str, params: Mapping[str, Any] | None = None, **kwargs) -> DistributionSpec:
    """Validate parameters and build a canonical :class:`DistributionSpec`.

    Args:
        family: One of :data:`FAMILIES`.
        params: Family parameters; ``mean`` may replace the rate/scale parameter.
        **kwargs: Merged over ``params``.

    Raises:
        DistributionError: If the family is unknown or a constraint is violated.
    """
    family = str(family).strip().lower()
    p = dict(params or {})
    p.update(kwargs)

    if family == "deterministic":
        _take(family, p, {"value", "mean"})
        key = _one_of(family, p, "value", "mean")
        return DistributionSpec(family, {"value": _positive(family, key, p[key])})

    if family == "exponential":
        _take(family, p, {"rate", "mean"})
        key = _one_of(family, p, "rate", "mean")
        rate = _positive(family, key, p[key])
        if key == "mean":
            rate = 1.0 / rate
        return DistributionSpec(family, {"rate": rate})

    if family == "erlang":
        _take(family, p, {"k", "rate", "mean"})
        if "k" not in p:
            raise DistributionError("erlang: k is required")
        k = p["k"]
        if isinstance(k, bool) or int(k) != k or int(k) < 1:
            raise DistributionError("erlang: k must be a positive integer (got %r)" % (k,))
        k = int(k)
        key = _one_of(family, p, "rate", "mean")
        value = _positive(family, key, p[key])
        rate = k / value if key == "mean" else value
        return DistributionSpec(family, {"k": k, "rate": rate})

    if family == "gamma":
        _take(family, p, {"shape", "scale", "mean"})
        shape = _positive(family, "shape", p.get("shape"))
        key = _one_of(family, p, "scale", "mean")
        value = _positive(family, key, p[key])
        scale = value / shape if key == "mean" else value
        return DistributionSpec(family, {"shape": shape, "scale": scale})

    if family == "uniform":
        _take(family, p, {"a", "b"})
        try:
            a, b = float(p["a"]), float(p["b"])
        except KeyError as e:
            raise DistributionError("uniform: parameter %s is required" % e) from None
        if a < 0:
            raise DistributionError("uniform: a must be >= 0 (got %r)" % a)
        if not b > a:
            raise DistributionError("uniform: a < b required (got a=%r, b=%r)" % (a, b))
        return DistributionSpec(family, {"a": a, "b": b})

    if family == "hyperexponential":
        _take(family, p, {"weights", "rates", "means"})
        if "weights" not in p:
            raise DistributionError("hyperexponential: weights are required")
        weights = tuple(float(w) for w in p["weights"])
        key = _one_of(family, p, "rates", "means")
        values = tuple(_positive(family, key, v) for v in p[key])
        if len(values) != len(weights) or not weights:
            raise DistributionError("hyperexponential: weights and %s must have the same non-zero length" % key)
        if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
            raise DistributionError("hyperexponential: weights must be non-negative and sum to 1")
        rates = tuple(1.0 / v for v in values) if key == "means" else values
        return DistributionSpec(family, {"weights": weights, "rates": rates})

    if family == "lognormal":
        _take(family, p, {"sigma", "scale", "mu", "mean"})
        sigma = _positive(family, "sigma", p.get("sigma"))
        key = _one_of(family, p, "scale", "mu", "mean")
        if key == "mu":
            scale = math.exp(float(p["mu"]))
        elif key == "mean":
            scale = _positive(family, key, p[key]) * math.exp(-sigma ** 2 / 2.0)
        else:
            scale = _positive(family, key, p[key])
        return DistributionSpec(family, {"sigma": sigma, "scale": scale})

    if family == "weibull":
        _take(family, p, {"shape", "scale", "mean"})
        shape = _positive(family, "shape", p.get("shape"))
        key = _one_of(family, p, "scale", "mean")
        value = _positive(family, key, p[key])
        scale = value / math.gamma(1.0 + 1.0 / shape) if key == "mean" else value
        return DistributionSpec(family, {"shape": shape, "scale": scale})

    if family == "pareto":
        _take(family, p, {"shape", "scale", "mean"})
        shape = _positive(family, "shape", p.get("shape"))
        if shape <= 1.0:
            raise DistributionError("pareto: shape must be > 1 for a finite mean (got %r)" % shape)
        key = _one_of(family, p, "scale", "mean")
        value = _positive(family, key, p[key])
        scale = value * (shape - 1.0) / shape if key == "mean" else value
        return DistributionSpec(family, {"shape": shape, "scale": scale})

    raise DistributionError("unknown distribution family %r (known: %s)" % (family, ", ".join(FAMILIES)))


def from_literal(literal: Mapping[str, Any]) -> DistributionSpec:
    """Build a distribution from its literal mapping form."""
    if isinstance(literal, DistributionSpec):
        return literal
    if not isinstance(literal, Mapping) or "family" not in literal:
        raise DistributionError("distribution literal must be a mapping with a 'family' key (got %r)" % (literal,))
    params = {k: v for k, v in literal.items() if k != "family"}
    return make_distribution(literal["family"], params)


def scale(d: DistributionSpec, c: float) -> DistributionSpec:
    """Distribution of ``c * X``."""
    c = _positive(d.family, "scale factor", c)
    p = dict(d.params)
    if d.family == "deterministic":
        p["value"] *= c
    elif d.family in ("exponential", "erlang"):
        p["rate"] /= c
    elif d.family == "uniform":
        p["a"] *= c
        p["b"] *= c
    elif d.family == "hyperexponential":
        p["rates"] = tuple(r / c for r in p["rates"])
    else:
        p["scale"] *= c
    return DistributionSpec(d.family, p)


def with_mean(d: DistributionSpec, mean: float) -> DistributionSpec:
    """Rescale ``d`` to the given mean, keeping its shape."""
    return scale(d, mean / d.mean)


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


def _mean(d: DistributionSpec) -> float:
    p = d.params
    match d.family:
        case "deterministic":
            return p["value"]
        case "exponential":
            return 1.0 / p["rate"]
        case "erlang":
            return p["k"] / p["rate"]
        case "gamma":
            return p["shape"] * p["scale"]
        case "uniform":
            return (p["a"] + p["b"]) / 2.0
        case "hyperexponential":
            return sum(w / r for w, r in zip(p["weights"], p["rates"]))
        case "lognormal":
            return p["scale"] * math.exp(p["sigma"] ** 2 / 2.0)
        case "weibull":
            return p["scale"] * math.gamma(1.0 + 1.0 / p["shape"])
        case "pareto":
            return p["shape"] * p["scale"] / (p["shape"] - 1.0)
    raise DistributionError("unknown distribution family %r" % d.family)


def _variance(d: DistributionSpec) -> float:
    if d.family == "deterministic":
        return 0.0
    if d.family == "pareto" and d.params["shape"] <= 2.0:
        return math.inf
    m = _mean(d)
    return max(raw_moment(d, 2) - m * m, 0.0)


def raw_moment(d: DistributionSpec, k: float) -> float:
    """``E[X^k]`` for real ``k >= 1``.

    Raises:
        InfiniteMomentError: If ``k`` is not below the moment availability.
        DistributionError: If ``k < 1``.
    """
    k = float(k)
    if k < 1.0:
        raise DistributionError("moment order must be >= 1 (got %r)" % k)
    if k >= d.moment_order_available:
        raise InfiniteMomentError(
            "%s: E[X^%g] is infinite (moments exist below order %g)" % (d.label, k, d.moment_order_available)
        )
    p = d.params
    match d.family:
        case "deterministic":
            return p["value"] ** k
        case "exponential":
            return math.gamma(k + 1.0) / p["rate"] ** k
        case "erlang":
            return math.exp(special.gammaln(p["k"] + k) - special.gammaln(p["k"])) / p["rate"] ** k
        case "gamma":
            return math.exp(special.gammaln(p["shape"] + k) - special.gammaln(p["shape"])) * p["scale"] ** k
        case "uniform":
            a, b = p["a"], p["b"]
            return (b ** (k + 1.0) - a ** (k + 1.0)) / ((k + 1.0) * (b - a))
        case "hyperexponential":
            return sum(w * math.gamma(k + 1.0) / r ** k for w, r in zip(p["weights"], p["rates"]))
        case "lognormal":
            return p["scale"] ** k * math.exp(k * k * p["sigma"] ** 2 / 2.0)
        case "weibull":
            return p["scale"] ** k * math.gamma(1.0 + k / p["shape"])
        case "pareto":
            return p["shape"] * p["scale"] ** k / (p["shape"] - k)
    raise DistributionError("unknown distribution family %r" % d.family)


def normalized_moment(d: DistributionSpec, r: float) -> float:
    """``E[(X/E[X])^r]``; at least 1 and invariant under scaling."""
    return raw_moment(d, r) / d.mean ** r


def equilibrium_mean(d: DistributionSpec) -> float:
    """Mean of the equilibrium law, ``E[X^2] / (2 E[X])``."""
    return raw_moment(d, 2) / (2.0 * d.mean)


# ---------------------------------------------------------------------------
# Laplace transform
# ---------------------------------------------------------------------------


def frozen(d: DistributionSpec):
    """The matching ``scipy.stats`` frozen distribution (not defined for
    deterministic and hyperexponential)."""
    p = d.params
    match d.family:
        case "exponential":
            return stats.expon(scale=1.0 / p["rate"])
        case "erlang":
            return stats.gamma(p["k"], scale=1.0 / p["rate"])
        case "gamma":
            return stats.gamma(p["shape"], scale=p["scale"])
        case "uniform":
            return stats.uniform(loc=p["a"], scale=p["b"] - p["a"])
        case "lognormal":
            return stats.lognorm(p["sigma"], scale=p["scale"])
        case "weibull":
            return stats.weibull_min(p["shape"], scale=p["scale"])
        case "pareto":
            return stats.pareto(p["shape"], scale=p["scale"])
    raise DistributionError("%s has no continuous scipy counterpart" % d.family)


def _laplace_quad(d: DistributionSpec, theta: float) -> float:
    dist = frozen(d)
    lo = float(dist.support()[0])
    hi = float(dist.ppf(1.0 - _QUAD_TAIL))
    # the neglected tail contributes at most sf(hi) * exp(-theta * hi)
    while dist.sf(hi) * math.exp(-theta * hi) > _LAPLACE_TOL:
        hi *= 2.0
    value, _err = integrate.quad(
        lambda x: math.exp(-theta * x) * dist.pdf(x), lo, hi, epsabs=_LAPLACE_TOL, epsrel=1e-10, limit=400
    )
    return float(value)


def laplace(d: DistributionSpec, theta: float) -> float:
    """``E[exp(-theta X)]`` for ``theta > 0``."""
    theta = float(theta)
    if not theta > 0:
        raise DistributionError("laplace transform requires theta > 0 (got %r)" % theta)
    p = d.params
    match d.family:
        case "deterministic":
            return math.exp(-theta * p["value"])
        case "exponential":
            return p["rate"] / (p["rate"] + theta)
        case "erlang":
            return (p["rate"] / (p["rate"] + theta)) ** p["k"]
        case "gamma":
            return (1.0 + theta * p["scale"]) ** (-p["shape"])
        case "uniform":
            a, b = p["a"], p["b"]
            return (math.exp(-theta * a) - math.exp(-theta * b)) / (theta * (b - a))
        case "hyperexponential":
            return sum(w * r / (r + theta) for w, r in zip(p["weights"], p["rates"]))
    return _laplace_quad(d, theta)


def laplace_gap(d: DistributionSpec, theta: float) -> float:
    """``1 - E[exp(-theta X)]``, computed without cancellation where a closed form allows."""
    p = d.params
    if d.family == "deterministic":
        return -math.expm1(-theta * p["value"])
    if d.family == "exponential":
        return theta / (p["rate"] + theta)
    return 1.0 - laplace(d, theta)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _as_output(values, size):
    if size is None:
        return float(values)
    return np.asarray(values, dtype=np.float64)


def sample(d: DistributionSpec, rng: RngStream, size=None):
    """Draw i.i.d. samples (a float when ``size`` is None, else an array)."""
    gen = rng.generator
    p = d.params
    match d.family:
        case "deterministic":
            out = p["value"] if size is None else np.full(size, p["value"], dtype=np.float64)
        case "exponential":
            out = gen.exponential(1.0 / p["rate"], size)
        case "erlang":
            out = gen.gamma(p["k"], 1.0 / p["rate"], size)
        case "gamma":
            out = gen.gamma(p["shape"], p["scale"], size)
        case "uniform":
            out = gen.uniform(p["a"], p["b"], size)
        case "hyperexponential":
            rates = np.asarray(p["rates"])
            idx = gen.choice(len(rates), size=size, p=np.asarray(p["weights"]))
            out = gen.exponential(1.0, size) / rates[idx]
        case "lognormal":
            out = gen.lognormal(math.log(p["scale"]), p["sigma"], size)
        case "weibull":
            out = p["scale"] * gen.weibull(p["shape"], size)
        case "pareto":
            # numpy draws the Lomax (shifted) form
            out = p["scale"] * (1.0 + gen.pareto(p["shape"], size))
        case _:
            raise DistributionError("unknown distribution family %r" % d.family)
    return _as_output(out, size)


def equilibrium_sample(d: DistributionSpec, rng: RngStream, size=None):
    """Draw from the equilibrium (stationary-excess) law of ``d``.

    The equilibrium law has density ``P(X > y) / E[X]``; it is the law of the
    first interval of an equilibrium renewal process.  Where no direct
    inverse is known it is drawn as ``U * X_biased`` with ``X_biased`` the
    length-biased version of ``X`` and ``U`` uniform on (0, 1).
    """
    gen = rng.generator
    p = d.params
    match d.family:
        case "exponential":
            out = gen.exponential(1.0 / p["rate"], size)
        case "deterministic":
            out = gen.uniform(0.0, p["value"], size)
        case "erlang":
            phases = gen.integers(1, p["k"] + 1, size=size)
            out = gen.gamma(phases, 1.0 / p["rate"])
        case "gamma":
            out = gen.uniform(0.0, 1.0, size) * gen.gamma(p["shape"] + 1.0, p["scale"], size)
        case "hyperexponential":
            rates = np.asarray(p["rates"])
            mix = np.asarray(p["weights"]) / rates
            idx = gen.choice(len(rates), size=size, p=mix / mix.sum())
            out = gen.exponential(1.0, size) / rates[idx]
        case "lognormal":
            biased = gen.lognormal(math.log(p["scale"]) + p["sigma"] ** 2, p["sigma"], size)
            out = gen.uniform(0.0, 1.0, size) * biased
        case "uniform":
            a, b = p["a"], p["b"]
            width = b - a
            target = gen.uniform(0.0, 1.0, size) * (a + b) / 2.0
            excess = np.maximum(target - a, 0.0)
            s = width - np.sqrt(np.maximum(width * width - 2.0 * width * excess, 0.0))
            out = np.where(target <= a, target, a + s)
        case "weibull":
            u = gen.uniform(0.0, 1.0, size)
            out = p["scale"] * special.gammaincinv(1.0 / p["shape"], u) ** (1.0 / p["shape"])
        case "pareto":
            alpha, xm = p["shape"], p["scale"]
            target = gen.uniform(0.0, 1.0, size) * _mean(d)
            inner = np.maximum(1.0 - (target - xm) * (alpha - 1.0) / xm, np.finfo(np.float64).tiny)
            out = np.where(target <= xm, target, xm * inner ** (-1.0 / (alpha - 1.0)))
        case _:
            raise DistributionError("unknown distribution family %r" % d.family)
    return _as_output(out, size)


def equilibrium_cdf(d: DistributionSpec, y):
    """CDF of the equilibrium law, vectorized over ``y``."""
    y = np.maximum(np.asarray(y, dtype=np.float64), 0.0)
    p = d.params
    m = _mean(d)
    match d.family:
        case "exponential":
            out = -np.expm1(-p["rate"] * y)
        case "deterministic":
            out = np.clip(y / p["value"], 0.0, 1.0)
        case "erlang" | "gamma":
            dist = frozen(d)
            shape = p["k"] if d.family == "erlang" else p["shape"]
            sc = 1.0 / p["rate"] if d.family == "erlang" else p["scale"]
            out = (y * dist.sf(y) + m * special.gammainc(shape + 1.0, y / sc)) / m
        case "hyperexponential":
            out = sum((w / r) * -np.expm1(-r * y) for w, r in zip(p["weights"], p["rates"])) / m
        case "lognormal":
            dist = frozen(d)
            with np.errstate(divide="ignore"):
                z = (np.log(y) - math.log(p["scale"]) - p["sigma"] ** 2) / p["sigma"]
            out = (y * dist.sf(y) + m * special.ndtr(z)) / m
        case "uniform":
            a, b = p["a"], p["b"]
            yy = np.clip(y, 0.0, b)
            over = np.clip(yy - a, 0.0, None)
            out = (np.minimum(yy, a) + over - over * over / (2.0 * (b - a))) / m
        case "weibull":
            out = special.gammainc(1.0 / p["shape"], (y / p["scale"]) ** p["shape"])
        case "pareto":
            alpha, xm = p["shape"], p["scale"]
            with np.errstate(divide="ignore"):
                upper = xm + xm / (alpha - 1.0) * (1.0 - (xm / np.maximum(y, xm)) ** (alpha - 1.0))
            out = np.where(y <= xm, y, upper) / m
        case _:
            raise DistributionError("unknown distribution family %r" % d.family)
    return np.clip(out, 0.0, 1.0)
