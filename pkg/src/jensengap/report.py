"""Serialization of bound reports and campaign results (JSON + CSV)."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Sequence

from .bounds import BoundReport
from .verify import CampaignReport

__all__ = [
    "bound_reports_json",
    "write_bound_reports",
    "write_campaign",
]

_CSV_FIELDS = ("inequality_id", "lhs", "rhs", "slack", "holds")


def _finite(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def bound_reports_json(reports: Sequence[BoundReport]) -> str:
    payload = []
    for r in reports:
        d = r.to_dict()
        d["context"] = {k: _finite(v) for k, v in d["context"].items()}
        payload.append(d)
    return json.dumps(payload, indent=2, sort_keys=True)


def write_bound_reports(reports: Sequence[BoundReport], path: str,
                        fmt: str = "json") -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        p.write_text(bound_reports_json(reports) + "\n")
    elif fmt == "csv":
        with open(p, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=_CSV_FIELDS)
            w.writeheader()
            for r in reports:
                w.writerow({k: getattr(r, k) for k in _CSV_FIELDS})
    else:
        raise ValueError(f"unknown format {fmt!r}")


def write_campaign(report: CampaignReport, outdir: str,
                   figures: bool = True) -> list[Path]:
    """Write report.json, summary.csv, and slack-histogram figures."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    jpath = out / "report.json"
    jpath.write_text(report.to_json() + "\n")
    written.append(jpath)

    rows = report.summary_rows()
    cpath = out / "summary.csv"
    with open(cpath, "w", newline="") as fh:
        if rows:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    written.append(cpath)

    if figures:
        from .plots import render_slack_figures

        written.extend(render_slack_figures(report, out))
    return written
