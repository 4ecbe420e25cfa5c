"""Shared utility functions for kingbound.

Small, self-contained helpers that are used across multiple modules.
Keeping them here avoids circular imports and reduces duplication.
"""

from __future__ import annotations

import logging

import numpy as np
import yaml

# families whose short form defaults to unit mean when no scale is given
_UNIT_MEAN_FAMILIES = ("deterministic", "exponential", "erlang", "gamma", "lognormal", "weibull", "pareto")
_SCALE_KEYS = ("mean", "rate", "scale", "value", "mu")

# Loggers that produce excessive output at DEBUG/INFO level.
_NOISY_LOGGERS = (
    "scitrera_app_framework",
)


def suppress_noisy_loggers() -> None:
    """Suppress verbose third-party loggers."""
    for name in _NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def coerce_value(value: str):
    """Coerce a string value to int, float, or bool where possible."""
    if value.lower() in ("true", "yes"):
        return True
    if value.lower() in ("false", "no"):
        return False
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        pass
    return value


def parse_kv_options(items) -> dict[str, object]:
    """Parse ``key=value`` strings, coercing each value.

    Raises:
        ValueError: If an item has no ``=``.
    """
    result: dict[str, object] = {}
    for item in items or ():
        if "=" not in item:
            raise ValueError("Invalid option format: %r (expected key=value)" % item)
        key, _, value = item.partition("=")
        result[key.strip()] = coerce_value(value.strip())
    return result


def parse_extra_args(args) -> dict[str, object]:
    """Parse trailing ``--name value`` pairs (as left over by click)."""
    result: dict[str, object] = {}
    items = list(args or ())
    i = 0
    while i < len(items):
        token = items[i]
        if not token.startswith("--"):
            raise ValueError("Unexpected argument: %r" % token)
        key = token[2:]
        if "=" in key:
            key, _, value = key.partition("=")
            i += 1
        elif i + 1 < len(items):
            value = items[i + 1]
            i += 2
        else:
            raise ValueError("Missing value for --%s" % key)
        result[key.replace("-", "_")] = coerce_value(value)
    return result


def parse_float_list(text: str) -> list[float]:
    """Parse ``"1,10,100"`` into floats."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError("Invalid number list: %r" % text) from None


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic 63-bit child seed for step ``index`` of a run."""
    state = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(index)]).generate_state(2, np.uint32)
    return (int(state[0]) << 31 | int(state[1]) >> 1) & 0x7FFFFFFFFFFFFFFF


def parse_distribution_literal(text: str) -> dict[str, object]:
    """Parse a command-line distribution literal.

    Accepts a YAML/JSON flow mapping (``{family: erlang, k: 2, mean: 1}``)
    or the short form ``family[:key=value,...]`` (``erlang:k=2,mean=1``).
    A short form without a scale parameter gets ``mean=1``.

    Raises:
        ValueError: If the text is neither form.
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            literal = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ValueError("Invalid distribution literal %r: %s" % (text, e)) from None
        if not isinstance(literal, dict):
            raise ValueError("Invalid distribution literal: %r" % text)
        return literal
    family, _, rest = text.partition(":")
    if not family:
        raise ValueError("Invalid distribution literal: %r" % text)
    literal: dict[str, object] = {"family": family}
    if rest:
        literal.update(parse_kv_options(rest.split(",")))
    if family in _UNIT_MEAN_FAMILIES and not any(k in literal for k in _SCALE_KEYS):
        literal["mean"] = 1.0
    return literal
