"""Monthly incident aggregation and sigma-threshold outlier flagging.

Gap months between the first and last event are kept with count zero so the
mean and standard deviation honestly reflect quiet stretches. The flagging
threshold uses the sample (n-1) standard deviation.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, NamedTuple

from .errors import InsufficientDataError
from .ingest import EventRecord


class MonthCount(NamedTuple):
    year: int
    month: int
    count: int


MonthlySeries = list[MonthCount]


def _next_month(year: int, month: int) -> tuple[int, int]:
    return (year + 1, 1) if month == 12 else (year, month + 1)


def monthly_counts(events: Iterable[EventRecord]) -> MonthlySeries:
    """Events bucketed by calendar (year, month), zero-filled over the span."""
    buckets = Counter((ev.date.year, ev.date.month) for ev in events)
    if not buckets:
        return []
    current = min(buckets)
    last = max(buckets)
    series: MonthlySeries = []
    while True:
        series.append(MonthCount(current[0], current[1], buckets.get(current, 0)))
        if current == last:
            return series
        current = _next_month(*current)


def flag_outliers(series: MonthlySeries, factor: float = 1.96) -> list[tuple[int, int]]:
    """Months whose count exceeds mean + factor * sample sd of the whole series."""
    if len(series) < 2:
        raise InsufficientDataError(f"outlier flagging needs >= 2 months, got {len(series)}")
    counts = [b.count for b in series]
    mean = sum(counts) / len(counts)
    sd = math.sqrt(sum((c - mean) ** 2 for c in counts) / (len(counts) - 1))
    threshold = mean + factor * sd
    return [(b.year, b.month) for b in series if b.count > threshold]
