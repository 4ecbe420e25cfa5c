"""Presentation layer formatting functions for kingbound CLI."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Sequence, TYPE_CHECKING

from kingbound.xnum import format_scalar, log10_of, to_probability

if TYPE_CHECKING:
    from kingbound.bounds.registry import Formula, FormulaResult
    from kingbound.estimators import StationaryEstimate, TailCurve
    from kingbound.harness.campaign import CampaignReport
    from kingbound.harness.records import VerificationRecord


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Left-aligned text table with a dashed separator (no trailing newline)."""
    cells = [[str(c) for c in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(headers)]
    header = "  ".join(f"{h:<{w}}" for h, w in zip(headers, widths)).rstrip()
    lines = [header, "-" * len(header)]
    for row in cells:
        lines.append("  ".join(f"{c:<{w}}" for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def format_csv(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def format_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def format_number(value: float | None) -> str:
    if value is None:
        return ""
    return "%.10g" % value


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


def format_formula_table(formulas: list[Formula]) -> str:
    if not formulas:
        return "No formulas registered."
    rows = []
    for f in formulas:
        params = " ".join(p.name if p.required else "[%s]" % p.name for p in f.params)
        if f.open_params:
            params += " ..."
        rows.append((f.name, params, f.summary))
    return format_table(("Name", "Parameters", "Description"), rows)


def result_rows(result: FormulaResult) -> list[tuple[str, str, str, str]]:
    """``(output, exp10, display, probability)`` per formula output."""
    rows = []
    for key, value in result.values.items():
        exp10 = log10_of(value)
        prob = format_number(to_probability(value)) if key in result.probability_keys else ""
        rows.append((key, format_number(exp10) if exp10 is not None else "", format_scalar(value), prob))
    return rows


def result_payload(result: FormulaResult) -> dict[str, Any]:
    values = {}
    for key, value in result.values.items():
        entry: dict[str, Any] = {"exp10": log10_of(value), "display": format_scalar(value)}
        if key in result.probability_keys:
            entry["probability"] = to_probability(value)
        values[key] = entry
    return {"formula": result.name, "params": result.params, "values": values, "flags": result.flags}


def format_formula_result(result: FormulaResult) -> str:
    lines = [result.name]
    for key, _exp10, display, prob in result_rows(result):
        line = "  %s: %s" % (key, display)
        if prob:
            line += "  (probability %s)" % prob
        lines.append(line)
    for key, value in result.flags.items():
        lines.append("  %s: %s" % (key, value))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Estimates
# ---------------------------------------------------------------------------


def estimate_row(label: str, metric: str, est: StationaryEstimate, seed: int) -> tuple[str, str, str, str, int]:
    return label, metric, format_number(est.point), format_number(est.ci_half_width), seed


def tail_rows(label: str, metric: str, curve: TailCurve, seed: int) -> list[tuple[str, str, str, str, int]]:
    return [
        (label, "%s@%s" % (metric, format_number(level)), format_number(s), format_number(c), seed)
        for level, s, c in zip(curve.grid, curve.survival, curve.ci_half_widths)
    ]


ESTIMATE_HEADERS = ("spec", "metric", "point", "ci", "seed")


def format_estimates(rows: list[tuple], fmt: str, payload: dict[str, Any] | None = None) -> str:
    if fmt == "csv":
        return format_csv(ESTIMATE_HEADERS, rows)
    if fmt == "json":
        return format_json(payload if payload is not None else [dict(zip(ESTIMATE_HEADERS, r)) for r in rows])
    return format_table(ESTIMATE_HEADERS, rows)


# ---------------------------------------------------------------------------
# Campaigns
# ---------------------------------------------------------------------------


def format_campaign_table(campaigns: list[dict[str, str]]) -> str:
    if not campaigns:
        return "No campaigns found."
    return format_table(("Name", "File"), [(c["name"], c["file"]) for c in campaigns])


def format_check_table(checks: list[tuple[str, str]]) -> str:
    if not checks:
        return "No checks registered."
    return format_table(("Kind", "Description"), checks)


def format_records(records: list[VerificationRecord]) -> str:
    rows = [
        (r.check_id, r.metadata.get("spec", ""), format_number(r.bound_exp10), format_number(r.estimate),
         format_number(r.estimate_ci), r.verdict)
        for r in records
    ]
    return format_table(("Check", "Spec", "Bound exp10", "Estimate", "CI", "Verdict"), rows)


def format_report_summary(report: CampaignReport) -> str:
    c = report.counts
    return "Campaign %s: %d record(s), %d pass, %d vacuous, %d fail (%.1fs)" % (
        report.name, c["total"], c["pass"], c["vacuous"], c["fail"], report.elapsed_seconds,
    )
