"""Certified metrics, witness search and certificate reports."""

from src.certify.metrics import CheckOutcome, LevelMetrics, compute_metrics, level_metrics
from src.certify.report import (
    CertificateReport,
    audit_report,
    audit_sequence,
    parse_pairs,
)
from src.certify.schema import CertificateReportModel, report_json_schema
from src.certify.witness import WitnessResult, witness_index

__all__ = [
    "CertificateReport",
    "CertificateReportModel",
    "CheckOutcome",
    "LevelMetrics",
    "WitnessResult",
    "audit_report",
    "audit_sequence",
    "compute_metrics",
    "level_metrics",
    "parse_pairs",
    "report_json_schema",
    "witness_index",
]
