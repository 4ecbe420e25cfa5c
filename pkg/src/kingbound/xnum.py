"""Extended-range non-negative reals stored as base-10 logarithms."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Literal

import numpy as np

logger = logging.getLogger(__name__)

# beyond this many decades the smaller addend does not move the result
_ADD_CUTOFF = 40.0
# largest exponent representable as a float64
_FLOAT_MAX_EXP10 = math.log10(np.finfo(np.float64).max)


class XnumError(Exception):
    """Raised for invalid extended-range arithmetic (negative inputs, NaN, bad ops)."""


Sign = Literal["zero", "positive"]


@total_ordering
@dataclass(frozen=True)
class LogScalar:
    """A non-negative real ``10**exp10`` (or exactly zero).

    Values far outside the float64 range are carried without loss of the
    exponent; only :func:`to_real` ever collapses them back to a float.
    """

    sign: Sign
    exp10: float = 0.0

    def __post_init__(self):
        if self.sign not in ("zero", "positive"):
            raise XnumError("sign must be 'zero' or 'positive', got %r" % (self.sign,))
        if self.sign == "positive" and not math.isfinite(self.exp10):
            raise XnumError("exponent must be finite, got %r" % (self.exp10,))
        if self.sign == "zero" and self.exp10 != 0.0:
            object.__setattr__(self, "exp10", 0.0)

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls) -> LogScalar:
        return cls("zero", 0.0)

    @classmethod
    def from_exp10(cls, exp10: float) -> LogScalar:
        return cls("positive", float(exp10))

    @property
    def is_zero(self) -> bool:
        return self.sign == "zero"

    # -- ordering -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LogScalar):
            try:
                other = from_value(other)
            except (XnumError, TypeError):
                return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.exp10 == other.exp10

    def __lt__(self, other):
        if not isinstance(other, LogScalar):
            other = from_value(other)
        if self.is_zero:
            return not other.is_zero
        if other.is_zero:
            return False
        return self.exp10 < other.exp10

    def __hash__(self):
        return hash((self.sign, self.exp10))

    # -- arithmetic ---------------------------------------------------------

    def __mul__(self, other):
        return combine(self, _coerce(other), "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return combine(self, _coerce(other), "div")

    def __rtruediv__(self, other):
        return combine(_coerce(other), self, "div")

    def __add__(self, other):
        return combine(self, _coerce(other), "add")

    __radd__ = __add__

    def __pow__(self, k):
        return power(self, k)

    def __float__(self):
        return to_real(self)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        if self.is_zero:
            return "LogScalar(0)"
        return "LogScalar(10^%r)" % (self.exp10,)


def _coerce(value) -> LogScalar:
    if isinstance(value, LogScalar):
        return value
    return from_value(value)


def from_value(x: float) -> LogScalar:
    """Convert a non-negative finite real to a :class:`LogScalar`."""
    if isinstance(x, LogScalar):
        return x
    x = float(x)
    if math.isnan(x):
        raise XnumError("cannot represent NaN")
    if x < 0:
        raise XnumError("cannot represent negative value %r" % (x,))
    if math.isinf(x):
        raise XnumError("cannot represent infinity")
    if x == 0.0:
        return LogScalar.zero()
    return LogScalar("positive", math.log10(x))


def combine(a: LogScalar, b: LogScalar, op: str) -> LogScalar:
    """Apply ``op`` (``mul``, ``div`` or ``add``) to two log-scalars."""
    if op == "mul":
        if a.is_zero or b.is_zero:
            return LogScalar.zero()
        return LogScalar("positive", a.exp10 + b.exp10)
    if op == "div":
        if b.is_zero:
            raise XnumError("division by zero")
        if a.is_zero:
            return LogScalar.zero()
        return LogScalar("positive", a.exp10 - b.exp10)
    if op == "add":
        if a.is_zero:
            return b
        if b.is_zero:
            return a
        hi, lo = (a.exp10, b.exp10) if a.exp10 >= b.exp10 else (b.exp10, a.exp10)
        gap = hi - lo
        if gap > _ADD_CUTOFF:
            return LogScalar("positive", hi)
        return LogScalar("positive", hi + math.log10(1.0 + 10.0 ** (-gap)))
    raise XnumError("unknown operation %r (expected mul, div or add)" % (op,))


def add_all(values) -> LogScalar:
    """Sum an iterable of log-scalars."""
    total = LogScalar.zero()
    for v in values:
        total = combine(total, _coerce(v), "add")
    return total


def power(a: LogScalar, k: float) -> LogScalar:
    """Raise ``a`` to a real power ``k``."""
    k = float(k)
    if math.isnan(k):
        raise XnumError("exponent is NaN")
    if a.is_zero:
        if k > 0:
            return LogScalar.zero()
        if k == 0:
            return LogScalar("positive", 0.0)
        raise XnumError("zero raised to a negative power")
    return LogScalar("positive", a.exp10 * k)


def to_probability(a: LogScalar) -> float:
    """``min(1, a)`` as a float; exactly 1.0 whenever the exponent is non-negative."""
    if a.is_zero:
        return 0.0
    if a.exp10 >= 0.0:
        return 1.0
    return 10.0 ** a.exp10


def clamp_probability(a: LogScalar) -> LogScalar:
    """``min(1, a)`` kept in log form."""
    if a.is_zero or a.exp10 <= 0.0:
        return a
    return LogScalar("positive", 0.0)


def to_real(a: LogScalar) -> float:
    """Collapse to a float; ``inf`` above float range, ``0.0`` below it."""
    if a.is_zero:
        return 0.0
    if a.exp10 > _FLOAT_MAX_EXP10:
        return math.inf
    try:
        return 10.0 ** a.exp10
    except OverflowError:
        return math.inf


def log10_of(a: LogScalar) -> float | None:
    """The stored exponent, or ``None`` for exact zero."""
    return None if a.is_zero else a.exp10


def format_scalar(a: LogScalar, digits: int = 4) -> str:
    """Render as ``10^{E}`` when the magnitude is extreme, otherwise as a decimal."""
    if a.is_zero:
        return "0"
    if abs(a.exp10) > 15:
        return "10^{%.*f}" % (digits, a.exp10)
    text = "%.6g" % (10.0 ** a.exp10)
    if "e" not in text and "." in text:
        text = text.rstrip("0").rstrip(".")
    return text
