"""Statement registry, sweeps, reports and the command line."""

from .registry import REGISTRY, UsageError, run
from .report import Report, canonical_json, emit_report
from .sweep import SweepSpec, build_report, enumerate_cases, sweep

__all__ = [
    "REGISTRY",
    "UsageError",
    "run",
    "Report",
    "canonical_json",
    "emit_report",
    "SweepSpec",
    "enumerate_cases",
    "sweep",
    "build_report",
]
