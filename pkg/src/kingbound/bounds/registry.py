"""Named-formula registry driving the ``bound`` and ``sweep`` commands."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from kingbound.bounds.base import BoundError, MomentSummary, lv
from kingbound.bounds.classical import cyclic_multiserver, kingman_single, kingman_weakened
from kingbound.bounds.conditional import ConditionalParams, conditional_sup_tail
from kingbound.bounds.constants import universal_constants
from kingbound.bounds.lemmas import MOMENT_LEMMAS, SUP_LEMMAS, DiscreteReformulation, lemma_moment_bound, \
    lemma_sup_bound
from kingbound.bounds.main import (
    cubic_moment_bounds,
    default_theta,
    halfin_whitt_bounds,
    higher_moment_bound,
    main_sspd_bound,
    main_tail_bound,
    mean_bounds,
    refined_mean_bound,
    sspd_explicit,
    supremum_tail_explicit,
    supremum_tail_theta,
)
from kingbound.xnum import LogScalar

logger = logging.getLogger(__name__)

REQUIRED = object()


@dataclass(frozen=True)
class Param:
    name: str
    default: Any = REQUIRED
    kind: type = float
    help: str = ""

    @property
    def required(self) -> bool:
        return self.default is REQUIRED


@dataclass
class FormulaResult:
    """Named outputs of one formula evaluation.

    ``probability_keys`` lists the outputs that are probability bounds and
    are reported clamped to 1.
    """

    name: str
    values: dict[str, LogScalar]
    probability_keys: tuple[str, ...] = ()
    flags: dict[str, Any] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Formula:
    name: str
    summary: str
    params: tuple[Param, ...]
    evaluate: Callable[[dict[str, Any]], FormulaResult]
    # lemma formulas accept the selected lemma's own parameters
    open_params: bool = False

    def param_names(self) -> list[str]:
        return [p.name for p in self.params]


_MOMENTS = (Param("r", kind=float, help="moment order > 2"),
            Param("mS", 1.0, help="E[(S mu_S)^r]"),
            Param("mA", 1.0, help="E[(A mu_A)^r]"))


def _summary(p: dict[str, Any], n: int = 1, rho: float = 0.5) -> MomentSummary:
    return MomentSummary(
        r=p["r"], mS=p["mS"], mA=p["mA"], n=int(p.get("n") or n), rho=p.get("rho", rho),
        mean_interarrival=p.get("mean_interarrival", 1.0),
    )


def _main_tail(p):
    return FormulaResult("main-tail", {"tail": main_tail_bound(_summary(p), p["x"])}, ("tail",))


def _sspd(p):
    return FormulaResult("sspd", {"sspd": main_sspd_bound(_summary(p))}, ("sspd",))


def _mean(p):
    queue, wait = mean_bounds(_summary(p))
    return FormulaResult("mean", {"queue": queue, "wait": wait})


def _refined(p):
    return FormulaResult("refined-mean", {"queue": refined_mean_bound(_summary(p))})


def _higher(p):
    return FormulaResult("higher-moment", {"moment": higher_moment_bound(_summary(p), p["z"])})


def _halfin_whitt(p):
    n = p.get("n")
    hw = halfin_whitt_bounds(_summary(p), p["B"], p["x"], z=p["z"], n=int(n) if n is not None else None)
    return FormulaResult("halfin-whitt", {"tail": hw.tail, "sspd": hw.sspd, "mean": hw.mean, "moment": hw.moment},
                         ("tail", "sspd"))


def _kingman(p):
    queue, wait = kingman_single(p["cA2"], p["cS2"], p["rho"], p["mean_interarrival"])
    return FormulaResult("kingman", {"queue": queue, "wait": wait})


def _kingman_weakened(p):
    return FormulaResult("kingman-weakened", {"queue": kingman_weakened(p["cA2"], p["cS2"], p["rho"])})


def _cyclic(p):
    return FormulaResult("cyclic", {"queue": cyclic_multiserver(p["cA2"], p["cS2"], int(p["n"]), p["rho"])})


def _constants(p):
    c1, c2 = universal_constants(p["r"])
    return FormulaResult("constants", {"C1": c1, "C2": c2})


def _default_theta(p):
    theta, surrogate = default_theta(p["ES"], p["ES2"])
    return FormulaResult("default-theta", {"theta": lv(theta), "surrogate": lv(surrogate)})


def _conditional_sup(p):
    params = ConditionalParams(**{k: v for k, v in p.items() if k != "x"})
    return FormulaResult("conditional-sup", {"tail": conditional_sup_tail(params, p["x"])}, ("tail",))


def _sup_explicit(p):
    value = supremum_tail_explicit(p["r"], p["mS3"], p["mAr"], p["rho_nprime"], p["z"])
    return FormulaResult("sup-explicit", {"tail": value}, ("tail",))


def _sup_theta(p):
    value = supremum_tail_theta(p["r"], p["ESr"], p["mAr"], p["theta"], p["laplace_gap"], p["rho_nprime"], p["z"])
    return FormulaResult("sup-theta", {"tail": value}, ("tail",))


def _sspd_explicit(p):
    value, in_range = sspd_explicit(p["r"], p["ESr3"], p["mAr"], int(p["n"]), p["rho"])
    return FormulaResult("sspd-explicit", {"sspd": value}, ("sspd",), flags={"in_range": in_range})


def _cubic(p):
    tail, sspd, mean = cubic_moment_bounds(p["mS3"], p["mA3"], p["x"], int(p["n"]), p["rho"])
    return FormulaResult("cubic", {"tail": tail, "sspd": sspd, "mean": mean}, ("tail", "sspd"))


def _lemma_moment(p):
    lemma_id = p.pop("id")
    return FormulaResult("lemma-moment", {"bound": lemma_moment_bound(lemma_id, p)}, flags={"lemma": lemma_id})


def _lemma_sup(p):
    lemma_id = p.pop("id")
    if lemma_id == "two-part":
        x = p.pop("x", None)
        if x is None:
            raise BoundError("two-part: missing parameter(s) x")
        for key in ("n_prime",):
            if key in p:
                p[key] = int(p[key])
        arrival, service = lemma_sup_bound(lemma_id, {"params": ConditionalParams(**p), "x": x})
        return FormulaResult("lemma-sup", {"arrival": arrival, "service": service}, ("arrival", "service"),
                             flags={"lemma": lemma_id})
    value = lemma_sup_bound(lemma_id, p)
    if isinstance(value, DiscreteReformulation):
        return FormulaResult("lemma-sup", {"drift": lv(value.drift), "level": lv(value.level)},
                             flags={"lemma": lemma_id})
    return FormulaResult("lemma-sup", {"bound": value}, ("bound",), flags={"lemma": lemma_id})


FORMULAS: dict[str, Formula] = {
    f.name: f
    for f in (
        Formula("main-tail", "P(L >= x/(1-rho)) bound", _MOMENTS + (Param("x"),), _main_tail),
        Formula("sspd", "steady-state probability of delay bound",
                _MOMENTS + (Param("n", kind=int), Param("rho")), _sspd),
        Formula("mean", "E[L] and E[W] bounds",
                _MOMENTS + (Param("rho"), Param("mean_interarrival", 1.0)), _mean),
        Formula("refined-mean", "E[L] bound with the n(1-rho)^2 correction",
                _MOMENTS + (Param("n", kind=int), Param("rho")), _refined),
        Formula("higher-moment", "E[L^z] bound for 1 <= z < r/2",
                _MOMENTS + (Param("rho"), Param("z")), _higher),
        Formula("halfin-whitt", "Halfin-Whitt regime bounds at excess B",
                _MOMENTS + (Param("B"), Param("x", 1.0), Param("z", 1.0), Param("n", None, int)), _halfin_whitt),
        Formula("kingman", "Kingman GI/GI/1 queue and wait bounds",
                (Param("cA2"), Param("cS2"), Param("rho"), Param("mean_interarrival", 1.0)), _kingman),
        Formula("kingman-weakened", "(cA2+cS2)/2/(1-rho)", (Param("cA2"), Param("cS2"), Param("rho")),
                _kingman_weakened),
        Formula("cyclic", "GI/GI/n mean queue bound",
                (Param("cA2"), Param("cS2"), Param("n", kind=int), Param("rho")), _cyclic),
        Formula("constants", "universal constants C_{r,1}, C_{r,2}", (Param("r"),), _constants),
        Formula("default-theta", "theta = E[S]/(2E[S^2]) and its Laplace-gap surrogate",
                (Param("ES", 1.0), Param("ES2")), _default_theta),
        Formula("conditional-sup", "conditional all-time supremum tail (x >= 16)",
                (Param("n_prime", kind=int), Param("mu_A"), Param("C1"), Param("C2"), Param("C3"),
                 Param("r1"), Param("r2"), Param("r3"), Param("s1"), Param("s3"), Param("x")), _conditional_sup),
        Formula("sup-explicit", "explicit supremum tail, unit-mean service",
                (Param("r"), Param("mS3", 1.0), Param("mAr", 1.0), Param("rho_nprime"), Param("z")), _sup_explicit),
        Formula("sup-theta", "supremum tail before the theta choice",
                (Param("r"), Param("ESr", 1.0), Param("mAr", 1.0), Param("theta"), Param("laplace_gap"),
                 Param("rho_nprime"), Param("z")), _sup_theta),
        Formula("sspd-explicit", "explicit delay-probability bound",
                (Param("r"), Param("ESr3", 1.0), Param("mAr", 1.0), Param("n", kind=int), Param("rho")),
                _sspd_explicit),
        Formula("cubic", "r=3 bounds with the 10^450 prefactor",
                (Param("mS3", 1.0), Param("mA3", 1.0), Param("x"), Param("n", kind=int), Param("rho")), _cubic),
        Formula("lemma-moment", "moment lemma by id (%s)" % ", ".join(MOMENT_LEMMAS),
                (Param("id", kind=str),), _lemma_moment, open_params=True),
        Formula("lemma-sup", "supremum lemma by id (%s)" % ", ".join(SUP_LEMMAS),
                (Param("id", kind=str),), _lemma_sup, open_params=True),
    )
}


def get_formula(name: str) -> Formula:
    formula = FORMULAS.get(name)
    if formula is None:
        raise BoundError("unknown formula %r. Available: %s" % (name, ", ".join(FORMULAS)))
    return formula


def list_formulas() -> list[Formula]:
    return list(FORMULAS.values())


def _convert(param: Param, value: Any) -> Any:
    if value is None:
        return None
    try:
        if param.kind is int:
            as_float = float(value)
            if as_float != int(as_float):
                raise ValueError(value)
            return int(as_float)
        return param.kind(value)
    except (TypeError, ValueError):
        raise BoundError("parameter %s must be %s (got %r)" % (param.name, param.kind.__name__, value)) from None


def evaluate_formula(name: str, params: Mapping[str, Any]) -> FormulaResult:
    """Evaluate the named formula with string or numeric parameters."""
    formula = get_formula(name)
    given = dict(params)
    resolved: dict[str, Any] = {}
    for param in formula.params:
        if param.name in given:
            resolved[param.name] = _convert(param, given.pop(param.name))
        elif param.required:
            raise BoundError("%s: missing parameter %s" % (name, param.name))
        else:
            resolved[param.name] = param.default
    if given:
        if not formula.open_params:
            raise BoundError("%s: unknown parameter(s) %s (expected: %s)"
                             % (name, ", ".join(sorted(given)), ", ".join(formula.param_names())))
        for key, value in given.items():
            resolved[key] = _convert(Param(key), value) if isinstance(value, str) else value
    logger.debug("evaluating %s with %s", name, resolved)
    result = formula.evaluate(dict(resolved))
    result.params = resolved
    return result
