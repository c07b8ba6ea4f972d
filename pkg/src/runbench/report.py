"""Rendering comparison results as markdown, CSV, JSON and boxplot data."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .measure import SampleSet
from .stats import SummaryRow, relativize, summarize

JSON_FORMAT_VERSION = 1
CSV_COLUMNS = ("command", "mean", "stddev", "min", "max", "relative", "relative_sigma")
MARKDOWN_HEADER = "| Command | Mean [s] | Min [s] | Max [s] | Relative |"
MARKDOWN_RULE = "|:---|---:|---:|---:|---:|"


@dataclass
class ComparisonReport:
    title: str
    rows: list[SummaryRow]
    samples: dict[str, SampleSet] = field(default_factory=dict)


@dataclass(frozen=True)
class BoxplotSummary:
    variant_name: str
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...] = ()


def build_report(title: str, sample_sets: Iterable[SampleSet]) -> ComparisonReport:
    """Summarize and relativize sample sets; keeps them in input order."""
    samples = {}
    for s in sample_sets:
        if s.variant_name in samples:
            raise ValueError(f"duplicate variant {s.variant_name!r}")
        samples[s.variant_name] = s
    stats = {name: summarize(s) for name, s in samples.items()}
    rows = relativize(stats) if stats else []
    return ComparisonReport(title, rows, samples)


def to_markdown(report: ComparisonReport) -> str:
    lines = [MARKDOWN_HEADER, MARKDOWN_RULE]
    for row in report.rows:
        s = row.stats
        if row.relative_sigma is None:
            rel = f"{row.relative:.2f}"
        else:
            rel = f"{row.relative:.2f} ± {row.relative_sigma:.2f}"
        lines.append(f"| {row.variant_name} | {s.mean:.3f} ± {s.stddev:.3f} "
                     f"| {s.min:.3f} | {s.max:.3f} | {rel} |")
    if report.title:
        lines += ["", f"Table: {report.title}"]
    return "\n".join(lines) + "\n"


def to_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        s = row.stats
        sigma = "" if row.relative_sigma is None else repr(row.relative_sigma)
        writer.writerow([row.variant_name, repr(s.mean), repr(s.stddev), repr(s.min),
                         repr(s.max), repr(row.relative), sigma])
    return buf.getvalue()


def to_json(report: ComparisonReport) -> str:
    """Structured export; embeds the raw samples so reports can be replayed.

    ``results`` follows row order (ascending mean) while ``variants`` keeps
    the order in which the variants were measured.
    """
    results = []
    for row in report.rows:
        s = row.stats
        entry = {
            "command": row.variant_name,
            "mean": s.mean,
            "stddev": s.stddev,
            "min": s.min,
            "max": s.max,
            "n": s.n,
            "relative": row.relative,
            "relative_sigma": row.relative_sigma,
        }
        if row.variant_name in report.samples:
            sset = report.samples[row.variant_name]
            entry["samples"] = list(sset.samples)
            entry["exit_codes"] = list(sset.exit_codes)
        results.append(entry)
    doc = {
        "version": JSON_FORMAT_VERSION,
        "title": report.title,
        "variants": list(report.samples),
        "results": results,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def from_json(text: str) -> ComparisonReport:
    """Rebuild a report from a :func:`to_json` export.

    Statistics are recomputed from the embedded samples, so the result is
    exactly what a live run with those samples would have produced.
    """
    doc = json.loads(text)
    if doc.get("version") != JSON_FORMAT_VERSION:
        raise ValueError(f"unsupported export version {doc.get('version')!r}")
    by_name = {}
    for entry in doc["results"]:
        if "samples" not in entry:
            raise ValueError(f"export has no samples for {entry.get('command')!r}; cannot replay")
        by_name[entry["command"]] = SampleSet(entry["command"], [float(x) for x in entry["samples"]],
                                              [int(c) for c in entry.get("exit_codes", [0] * len(entry["samples"]))])
    order = doc.get("variants") or list(by_name)
    if sorted(order) != sorted(by_name):
        raise ValueError("'variants' does not match the exported results")
    return build_report(doc.get("title", ""), [by_name[name] for name in order])


def _quantile(sorted_values: list[float], p: float) -> float:
    # linear interpolation between order statistics (Hyndman & Fan type 7)
    pos = (len(sorted_values) - 1) * p
    lo = math.floor(pos)
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = pos - lo
    a, b = sorted_values[lo], sorted_values[hi]
    return a + (b - a) * frac if frac else a


def boxplot_data(samples) -> BoxplotSummary:
    """Tukey five-number summary with 1.5 IQR whiskers and outliers.

    Quartiles use linear interpolation. Whiskers sit at the most extreme
    samples still inside ``[q1 - 1.5 IQR, q3 + 1.5 IQR]`` (never inside the
    box); everything beyond the fences is an outlier.
    """
    name = getattr(samples, "variant_name", "")
    values = sorted(float(v) for v in getattr(samples, "samples", samples))
    if not values:
        raise ValueError("cannot summarize an empty sample list")
    q1 = _quantile(values, 0.25)
    median = _quantile(values, 0.5)
    q3 = _quantile(values, 0.75)
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = [v for v in values if lo_fence <= v <= hi_fence]
    outliers = tuple(v for v in values if v < lo_fence or v > hi_fence)
    # the fences always enclose at least one sample, so `inside` is never empty.
    # Interpolated quartiles can fall in a gap wider than the fence; clamp the
    # whisker to the quartile then (same rule as matplotlib).
    whisker_low = min(min(inside), q1)
    whisker_high = max(max(inside), q3)
    return BoxplotSummary(name, q1, median, q3, whisker_low, whisker_high, outliers)


def boxplot_json(report: ComparisonReport) -> str:
    summaries = [asdict(boxplot_data(report.samples[name])) for name in report.samples]
    for s in summaries:
        s["outliers"] = list(s["outliers"])
    return json.dumps({"title": report.title, "boxplots": summaries}, indent=2,
                      ensure_ascii=False) + "\n"
