"""Verification campaigns: checks, execution and reports."""

from kingbound.harness.campaign import CampaignConfig, CampaignReport, StepContext, run_campaign
from kingbound.harness.checks import (
    HeavyTrafficPoint,
    comparison_check,
    dominance_check,
    halfin_whitt_check,
    heavy_traffic_check,
    heavy_traffic_records,
    lemma_scaling_check,
    oracle_check,
    scaling_check,
)
from kingbound.harness.records import CampaignError, VerificationRecord, summarize
from kingbound.harness.report import render_csv, render_json, write_reports

__all__ = [
    "CampaignConfig",
    "CampaignError",
    "CampaignReport",
    "HeavyTrafficPoint",
    "StepContext",
    "VerificationRecord",
    "comparison_check",
    "dominance_check",
    "halfin_whitt_check",
    "heavy_traffic_check",
    "heavy_traffic_records",
    "lemma_scaling_check",
    "oracle_check",
    "render_csv",
    "render_json",
    "run_campaign",
    "scaling_check",
    "summarize",
    "write_reports",
]
