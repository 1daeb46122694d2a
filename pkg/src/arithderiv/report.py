"""Serialization and rendering of probe reports.

JSON schema: {"experiment": str, "params": object, "rows": [{"i": int,
"in_val": str, "out_val": str, "aux": str|null}], "verdict": str}.
CSV uses the header i,in_val,out_val,aux with RFC 4180 quoting.
Figures plot the input and output distance valuations against the row
index, marking rows whose output is +infinity along the top edge.
"""

from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction

from .exact import ExtendedValuation
from .lab import ProbeReport, ProbeRow

__all__ = [
    "parse_report_json",
    "render_figure",
    "report_to_csv",
    "report_to_json",
    "write_report_files",
]


def _val_str(v: ExtendedValuation) -> str:
    return str(v)


def report_to_json(report: ProbeReport) -> str:
    doc = {
        "experiment": report.experiment,
        "params": report.params,
        "rows": [
            {
                "i": r.i,
                "in_val": _val_str(r.in_val),
                "out_val": _val_str(r.out_val),
                "aux": None if r.aux is None else str(Fraction(r.aux)),
            }
            for r in report.rows
        ],
        "verdict": report.verdict,
    }
    return json.dumps(doc, indent=2)


def _parse_val(s: str) -> ExtendedValuation:
    if s == "inf":
        return ExtendedValuation.infinity()
    if "/" in s:
        num, den = s.split("/")
        return ExtendedValuation(True, int(num), int(den))
    return ExtendedValuation(True, int(s), 1)


def parse_report_json(text: str) -> ProbeReport:
    doc = json.loads(text)
    rows = tuple(
        ProbeRow(
            r["i"],
            _parse_val(r["in_val"]),
            _parse_val(r["out_val"]),
            None if r["aux"] is None else Fraction(r["aux"]),
        )
        for r in doc["rows"]
    )
    return ProbeReport(doc["experiment"], doc["params"], rows, doc["verdict"])


def report_to_csv(report: ProbeReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["i", "in_val", "out_val", "aux"])
    for r in report.rows:
        writer.writerow([
            r.i,
            _val_str(r.in_val),
            _val_str(r.out_val),
            "" if r.aux is None else str(Fraction(r.aux)),
        ])
    return buf.getvalue()


def render_figure(report: ProbeReport, path: str) -> str:
    """Render the report's valuation rows to an image file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    idx = [r.i for r in report.rows]
    finite_in = [(r.i, float(r.in_val.value)) for r in report.rows
                 if r.in_val.finite]
    finite_out = [(r.i, float(r.out_val.value)) for r in report.rows
                  if r.out_val.finite]
    inf_out = [r.i for r in report.rows if r.out_val.is_infinite]

    fig, ax = plt.subplots(figsize=(7, 4.2))
    if finite_in:
        ax.plot(*zip(*finite_in), "o-", label="input distance valuation",
                color="tab:blue")
    if finite_out:
        ax.plot(*zip(*finite_out), "s-", label="output distance valuation",
                color="tab:red")
    if inf_out:
        top = max(
            [y for _, y in finite_in + finite_out] or [1.0]
        ) + 1.0
        ax.plot(inf_out, [top] * len(inf_out), "^", color="tab:gray",
                label="output = +inf")
    ax.set_xlabel("i")
    ax.set_ylabel("valuation")
    ax.set_title(f"{report.experiment} (verdict: {report.verdict})")
    ax.grid(True, alpha=0.3)
    if idx:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def write_report_files(report: ProbeReport, out_dir: str,
                       prefix: str = "report") -> dict:
    """Write <prefix>.json, <prefix>.csv and <prefix>.png under out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "json": os.path.join(out_dir, prefix + ".json"),
        "csv": os.path.join(out_dir, prefix + ".csv"),
        "png": os.path.join(out_dir, prefix + ".png"),
    }
    with open(paths["json"], "w") as fh:
        fh.write(report_to_json(report))
    with open(paths["csv"], "w", newline="") as fh:
        fh.write(report_to_csv(report))
    render_figure(report, paths["png"])
    return paths
