"""Tests for kingbound.utils helpers."""

from __future__ import annotations

import pytest

from kingbound.utils import (
    coerce_value,
    derive_seed,
    parse_distribution_literal,
    parse_extra_args,
    parse_float_list,
    parse_kv_options,
)


class TestCoerce:
    @pytest.mark.parametrize("text,expected", [
        ("3", 3), ("0.5", 0.5), ("1e-3", 1e-3), ("yes", True), ("False", False), ("abc", "abc"),
    ])
    def test_coerce_value(self, text, expected):
        assert coerce_value(text) == expected
        assert type(coerce_value(text)) is type(expected)

    def test_kv_options(self):
        assert parse_kv_options(["r=3", " x = 10.5"]) == {"r": 3, "x": 10.5}
        with pytest.raises(ValueError, match="expected key=value"):
            parse_kv_options(["r3"])

    def test_extra_args(self):
        assert parse_extra_args(["--r", "3", "--tail-grid=2", "--mS", "1.5"]) == {"r": 3, "tail_grid": 2, "mS": 1.5}

    def test_extra_args_errors(self):
        with pytest.raises(ValueError, match="Missing value for --x"):
            parse_extra_args(["--x"])
        with pytest.raises(ValueError, match="Unexpected argument"):
            parse_extra_args(["x", "1"])

    def test_float_list(self):
        assert parse_float_list("1, 10,100,") == [1.0, 10.0, 100.0]
        with pytest.raises(ValueError, match="Invalid number list"):
            parse_float_list("1,a")


class TestDistributionLiteral:
    def test_short_form(self):
        assert parse_distribution_literal("erlang:k=2,mean=0.9") == {"family": "erlang", "k": 2, "mean": 0.9}

    def test_short_form_defaults_to_unit_mean(self):
        assert parse_distribution_literal("exponential") == {"family": "exponential", "mean": 1.0}
        assert parse_distribution_literal("exponential:rate=2") == {"family": "exponential", "rate": 2}
        assert parse_distribution_literal("uniform:a=0,b=2") == {"family": "uniform", "a": 0, "b": 2}

    def test_flow_mapping(self):
        assert parse_distribution_literal("{family: pareto, shape: 3.5, mean: 1}") == {
            "family": "pareto", "shape": 3.5, "mean": 1,
        }

    @pytest.mark.parametrize("text", ["{family: [", ":mean=1"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_distribution_literal(text)


class TestDeriveSeed:
    def test_deterministic_and_distinct(self):
        assert derive_seed(7, 0) == derive_seed(7, 0)
        assert len({derive_seed(7, i) for i in range(50)}) == 50
        assert derive_seed(7, 1) != derive_seed(8, 1)

    def test_range(self):
        assert all(0 <= derive_seed(s, i) < 2 ** 63 for s in (0, 1, 2 ** 64 - 1) for i in (0, 9))
