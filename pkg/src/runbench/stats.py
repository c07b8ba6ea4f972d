"""Summary statistics and relative factors for benchmark samples."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    stddev: float
    min: float
    max: float
    n: int


@dataclass(frozen=True)
class SummaryRow:
    variant_name: str
    stats: SummaryStats
    relative: float
    relative_sigma: float | None = None

    @property
    def is_baseline(self) -> bool:
        return self.relative_sigma is None


def summarize(samples) -> SummaryStats:
    """Mean, sample standard deviation (n - 1), min and max.

    Accepts a :class:`~runbench.measure.SampleSet` or a plain sequence of
    durations. A single sample has a standard deviation of 0.
    """
    values: Sequence[float] = getattr(samples, "samples", samples)
    if len(values) == 0:
        raise ValueError("cannot summarize an empty sample list")
    values = [float(v) for v in values]
    mean = statistics.fmean(values)
    lo, hi = min(values), max(values)
    # fmean can round a hair outside [min, max] for near-constant data
    mean = min(max(mean, lo), hi)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return SummaryStats(mean=mean, stddev=sd, min=lo, max=hi, n=len(values))


def relativize(stats: Mapping[str, SummaryStats]) -> list[SummaryRow]:
    """Express every variant's mean relative to the fastest one.

    The fastest variant (ties go to the lexicographically smallest name)
    gets a relative factor of exactly 1.0 and no sigma. For the others the
    ratio's uncertainty assumes independent errors::

        sigma = r * sqrt((sd_i / mean_i)**2 + (sd_base / mean_base)**2)

    Rows come back sorted by mean, baseline first.
    """
    if not stats:
        raise ValueError("need at least one variant to compare")
    for name, s in stats.items():
        if not s.mean > 0:
            raise ValueError(f"variant {name!r} has non-positive mean {s.mean!r}")

    order = sorted(stats, key=lambda name: (stats[name].mean, name))
    base_name = order[0]
    base = stats[base_name]
    base_cv = base.stddev / base.mean

    rows = [SummaryRow(base_name, base, 1.0)]
    for name in order[1:]:
        s = stats[name]
        ratio = s.mean / base.mean
        sigma = ratio * math.hypot(s.stddev / s.mean, base_cv)
        rows.append(SummaryRow(name, s, ratio, sigma))
    return rows
