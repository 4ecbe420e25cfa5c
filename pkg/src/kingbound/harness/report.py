"""Byte-deterministic JSON and CSV campaign reports."""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any

from kingbound.harness.campaign import CampaignReport
from kingbound.harness.records import VerificationRecord

logger = logging.getLogger(__name__)

CSV_HEADER = "# kingbound-report v1"
CSV_COLUMNS = ("check_id", "spec", "param", "bound_exp10", "estimate", "ci", "verdict", "seed")

# settings that do not influence any record
_VOLATILE_SETTINGS = ("workers", "sup_workers")

# metadata keys rendered into the csv ``param`` column, in order
_PARAM_KEYS = ("param", "level", "rho", "n", "k", "t", "r", "p", "lemma", "bound_id")


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return "%.10g" % value


def _param_label(meta: dict[str, Any]) -> str:
    parts = []
    for key in _PARAM_KEYS:
        if key in meta:
            value = meta[key]
            parts.append("%s=%s" % (key, _fmt(value) if isinstance(value, float) else value))
    return ";".join(parts)


def record_row(record: VerificationRecord) -> list[str]:
    meta = record.metadata
    return [
        record.check_id,
        str(meta.get("spec", "")),
        _param_label(meta),
        _fmt(record.bound_exp10),
        _fmt(record.estimate),
        _fmt(record.estimate_ci),
        record.verdict,
        str(meta.get("seed", "")),
    ]


def render_csv(report: CampaignReport) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in report.records:
        writer.writerow(record_row(record))
    return buf.getvalue()


def render_json(report: CampaignReport) -> str:
    """JSON report; excludes timing and worker count so identical runs give identical bytes."""
    payload = {
        "campaign": report.name,
        "settings": {k: v for k, v in report.settings.items() if k not in _VOLATILE_SETTINGS},
        "summary": report.counts,
        "exit_code": report.exit_code,
        "records": [r.to_dict() for r in report.records],
    }
    return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"


def write_reports(report: CampaignReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``report.json`` and ``report.csv`` under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    csv_path = out / "report.csv"
    json_path.write_text(render_json(report), encoding="utf-8")
    csv_path.write_text(render_csv(report), encoding="utf-8")
    logger.info("Wrote %s and %s", json_path, csv_path)
    return json_path, csv_path
