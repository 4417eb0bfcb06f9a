"""Sweep reports and their JSON, CSV and text encodings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

# CSV columns; nested values are JSON-encoded in their cell
CSV_FIELDS = (
    "statement",
    "parameters",
    "verdict",
    "multiplicities",
    "stated_multiplicities",
    "valuation",
    "residue",
    "reason",
    "wall_time",
)


@dataclass
class Report:
    spec: dict = field(default_factory=dict)
    records: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {"checked": len(self.records), "held": 0, "failed": 0, "inapplicable": 0}
        for rec in self.records:
            counts[rec["verdict"]] += 1
        return counts

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def as_dict(self, timings: bool = True) -> dict:
        records = self.records
        if not timings:
            records = [{k: v for k, v in r.items() if k != "wall_time"} for r in records]
        return {
            "schema_version": SCHEMA_VERSION,
            "spec": self.spec,
            "records": records,
            "skipped": self.skipped,
            "summary": self.summary,
        }


def canonical_json(report: Report) -> str:
    """Sorted keys, no timings: equal for equal sweeps."""
    return json.dumps(report.as_dict(timings=False), sort_keys=True, separators=(",", ":"))


def to_json(report: Report) -> str:
    return json.dumps(report.as_dict(), sort_keys=True, indent=2) + "\n"


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for rec in report.records:
        row = {}
        for key in CSV_FIELDS:
            value = rec.get(key)
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            row[key] = "" if value is None else value
        writer.writerow(row)
    return buf.getvalue()


def _params_text(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items())


def to_text(report: Report) -> str:
    lines = []
    width = max([len(_params_text(r["parameters"])) for r in report.records] + [10])
    for rec in report.records:
        extra = ""
        if rec.get("multiplicities") is not None:
            extra = f"mult={rec['multiplicities']}"
        elif rec.get("valuation") is not None:
            extra = f"v_p={rec['valuation']}"
        if rec.get("reason"):
            extra = rec["reason"]
        lines.append(f"{rec['statement']:<8} {_params_text(rec['parameters']):<{width}}  {rec['verdict']:<12} {extra}")
        if rec["verdict"] == "failed" and rec.get("residue"):
            lines.append(f"{'':<8} residue: {rec['residue']}")
    s = report.summary
    lines.append(
        f"checked {s['checked']}  held {s['held']}  failed {s['failed']}  "
        f"inapplicable {s['inapplicable']}  skipped {len(report.skipped)}"
    )
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return to_json(report).encode()
    if fmt == "csv":
        return to_csv(report).encode()
    if fmt == "text":
        return to_text(report).encode()
    raise ValueError(f"unknown format {fmt!r}")
