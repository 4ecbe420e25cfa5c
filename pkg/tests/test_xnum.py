"""Tests for kingbound.xnum module."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from kingbound.xnum import (
    LogScalar,
    XnumError,
    add_all,
    clamp_probability,
    combine,
    format_scalar,
    from_value,
    log10_of,
    power,
    to_probability,
    to_real,
)

positive = st.floats(min_value=1e-200, max_value=1e200, allow_nan=False, allow_infinity=False)
exponents = st.floats(min_value=-1e4, max_value=1e4, allow_nan=False, allow_infinity=False)


class TestConstruction:
    def test_zero(self):
        z = from_value(0.0)
        assert z.is_zero
        assert log10_of(z) is None
        assert to_real(z) == 0.0

    def test_from_value(self):
        assert from_value(1000.0).exp10 == pytest.approx(3.0)

    @pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
    def test_rejects_non_representable(self, bad):
        with pytest.raises(XnumError):
            from_value(bad)

    def test_rejects_bad_sign(self):
        with pytest.raises(XnumError):
            LogScalar("negative", 1.0)

    def test_rejects_non_finite_exponent(self):
        with pytest.raises(XnumError):
            LogScalar.from_exp10(math.inf)


class TestArithmetic:
    @given(positive, positive)
    def test_mul_matches_floats(self, x, y):
        assert (from_value(x) * from_value(y)).exp10 == pytest.approx(math.log10(x) + math.log10(y), abs=1e-9)

    @given(positive, positive)
    def test_add_matches_floats(self, x, y):
        expected = math.log10(x + y) if math.isfinite(x + y) else math.log10(x) + math.log10(1 + y / x)
        assert (from_value(x) + from_value(y)).exp10 == pytest.approx(expected, abs=1e-9)

    @given(exponents, exponents)
    def test_add_is_commutative_and_dominates(self, a, b):
        x, y = LogScalar.from_exp10(a), LogScalar.from_exp10(b)
        s = x + y
        assert s == y + x
        assert s >= x and s >= y

    @given(exponents, exponents)
    def test_div_inverts_mul(self, a, b):
        x, y = LogScalar.from_exp10(a), LogScalar.from_exp10(b)
        assert ((x * y) / y).exp10 == pytest.approx(a, abs=1e-9)

    def test_add_far_apart_short_circuits(self):
        big = LogScalar.from_exp10(500.0)
        assert (big + LogScalar.from_exp10(400.0)).exp10 == 500.0

    def test_add_zero_is_identity(self):
        x = LogScalar.from_exp10(7.0)
        assert x + LogScalar.zero() == x

    def test_mul_by_zero(self):
        assert (LogScalar.from_exp10(900.0) * 0).is_zero

    def test_division_by_zero(self):
        with pytest.raises(XnumError):
            LogScalar.from_exp10(1.0) / LogScalar.zero()

    def test_unknown_op(self):
        with pytest.raises(XnumError):
            combine(LogScalar.from_exp10(1.0), LogScalar.from_exp10(2.0), "sub")

    def test_power(self):
        assert power(LogScalar.from_exp10(405.8), -1.5).exp10 == pytest.approx(-608.7)
        assert power(LogScalar.zero(), 2).is_zero
        assert power(LogScalar.zero(), 0) == from_value(1.0)
        with pytest.raises(XnumError):
            power(LogScalar.zero(), -1)

    def test_add_all(self):
        assert to_real(add_all([1.0, 2.0, 3.0])) == pytest.approx(6.0)
        assert add_all([]).is_zero

    def test_ordering_with_zero(self):
        assert LogScalar.zero() < LogScalar.from_exp10(-300.0)
        assert not LogScalar.from_exp10(-300.0) < LogScalar.zero()


class TestConversion:
    def test_to_real_overflow_is_inf(self):
        assert to_real(LogScalar.from_exp10(404.0)) == math.inf

    def test_to_real_underflow_is_zero(self):
        assert to_real(LogScalar.from_exp10(-400.0)) == 0.0

    def test_probability_clamps(self):
        assert to_probability(LogScalar.from_exp10(404.3036)) == 1.0
        assert to_probability(LogScalar.from_exp10(0.0)) == 1.0
        assert to_probability(from_value(0.25)) == pytest.approx(0.25)
        assert clamp_probability(LogScalar.from_exp10(3.0)).exp10 == 0.0
        assert clamp_probability(LogScalar.from_exp10(-3.0)).exp10 == -3.0


class TestFormatting:
    def test_large_exponent(self):
        assert format_scalar(LogScalar.from_exp10(404.30364)) == "10^{404.3036}"

    def test_small_exponent(self):
        assert format_scalar(LogScalar.from_exp10(-20.5)) == "10^{-20.5000}"

    def test_plain_decimal(self):
        assert format_scalar(from_value(9.05)) == "9.05"
        assert format_scalar(from_value(1.0)) == "1"

    def test_zero(self):
        assert format_scalar(LogScalar.zero()) == "0"
        assert str(LogScalar.zero()) == "0"
