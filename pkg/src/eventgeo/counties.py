"""County assignment, count distributions, outlier z-scores, per-capita ratios.

Moment conventions: standard deviation uses the n-1 denominator; skewness is
g1 = m3 / m2**1.5 and kurtosis is raw (non-excess) b2 = m4 / m2**2, with the
central moments m_i taken over n. A normal distribution therefore has
kurtosis 3. Undefined moments come back as None with an explanatory flag,
never as a silent zero.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, TypeVar

import numpy as np

from .errors import InsufficientDataError
from .geo import GeoPoint, RegionPolygon
from .ingest import EventRecord

log = logging.getLogger(__name__)

K = TypeVar("K")

DEFAULT_POPULATION_YEARS = (2020, 2021, 2022, 2023)


@dataclass
class CountyBoundary:
    """A FIPS-keyed county: name, state, multipolygon geometry, optional population."""

    fips: str
    name: str
    state: str
    geometry: tuple[RegionPolygon, ...]
    population_by_year: Optional[dict[int, float]] = None

    def __post_init__(self):
        if len(self.fips) != 5 or not self.fips.isdigit():
            raise ValueError(f"fips must be 5 digits, got {self.fips!r}")
        if not self.geometry:
            raise ValueError(f"county {self.fips} has no geometry")

    def contains(self, p: GeoPoint) -> bool:
        return any(poly.contains(p) for poly in self.geometry)


def load_county_boundaries(path) -> list[CountyBoundary]:
    """Read a GeoJSON FeatureCollection in the Census cartographic layout
    (properties GEOID, NAME, STUSPS)."""
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("type") != "FeatureCollection":
        raise ValueError(f"expected a FeatureCollection, got {obj.get('type')!r}")
    out = []
    for feat in obj["features"]:
        props = feat.get("properties", {})
        out.append(
            CountyBoundary(
                fips=str(props["GEOID"]),
                name=str(props.get("NAME", "")),
                state=str(props.get("STUSPS", "")),
                geometry=tuple(RegionPolygon.from_geojson(feat["geometry"])),
            )
        )
    return out


def load_population_csv(path) -> dict[str, dict[int, float]]:
    """Read a population CSV with columns fips, year, population."""
    out: dict[str, dict[int, float]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            out.setdefault(row["fips"].strip(), {})[int(row["year"])] = float(row["population"])
    return out


def attach_population(boundaries: Iterable[CountyBoundary], pop: Mapping[str, dict[int, float]]):
    for b in boundaries:
        if b.fips in pop:
            b.population_by_year = dict(pop[b.fips])


def assign_county(
    p: GeoPoint, boundaries: Sequence[CountyBoundary], hint: Optional[str] = None
) -> Optional[str]:
    """FIPS of the first county whose geometry contains p.

    Falls back to a case-insensitive name match on `hint` (the ACLED admin2
    field) when no polygon contains the point, e.g. for coastal coordinates
    that fall just off the cartographic boundary. Returns None when neither
    applies.
    """
    for b in boundaries:
        lat_min, lat_max, lon_min, lon_max = _county_bbox(b)
        if lat_min <= p.lat <= lat_max and lon_min <= p.lon <= lon_max and b.contains(p):
            return b.fips
    if hint:
        wanted = hint.strip().casefold()
        for b in boundaries:
            if b.name.casefold() == wanted:
                return b.fips
    return None


def _county_bbox(b: CountyBoundary):
    boxes = [poly.bbox for poly in b.geometry]
    return (
        min(x[0] for x in boxes),
        max(x[1] for x in boxes),
        min(x[2] for x in boxes),
        max(x[3] for x in boxes),
    )


@dataclass(frozen=True)
class CountResult:
    """Counts keyed by county or location, plus the events that took no key."""

    counts: dict
    unassigned: tuple[EventRecord, ...]

    @property
    def total(self) -> int:
        return sum(self.counts.values()) + len(self.unassigned)


def count_by_county(
    events: Iterable[EventRecord],
    boundaries: Sequence[CountyBoundary],
    use_hint: bool = True,
) -> CountResult:
    """Incidents per county FIPS; events matching no county are reported separately."""
    counts: Counter = Counter()
    unassigned = []
    for ev in events:
        fips = assign_county(ev.point, boundaries, ev.county_hint if use_hint else None)
        if fips is None:
            unassigned.append(ev)
        else:
            counts[fips] += 1
    return CountResult(counts=dict(counts), unassigned=tuple(unassigned))


def count_by_location(events: Iterable[EventRecord], precision: int = 4) -> CountResult:
    """Incidents per rounded (lat, lon); the same rounding as unique_locations."""
    counts: Counter = Counter()
    for ev in events:
        counts[(round(ev.point.lat, precision), round(ev.point.lon, precision))] += 1
    return CountResult(counts=dict(counts), unassigned=())


@dataclass(frozen=True)
class DistributionStats:
    """Moments of a count vector; None means undefined, with the reason in flags."""

    n: int
    mean: float
    sample_sd: Optional[float]
    skewness: Optional[float]
    kurtosis: Optional[float]
    max: float
    flags: tuple[str, ...] = ()


def distribution_stats(counts: Sequence[float], sd_ddof: int = 1) -> DistributionStats:
    """Mean, sample sd, skewness, raw kurtosis, and max of a count vector.

    sd needs n >= 2; skewness/kurtosis need n >= 3 and nonzero variance.
    """
    x = np.asarray(list(counts), dtype=float)
    n = len(x)
    if n == 0:
        raise InsufficientDataError("cannot summarize an empty count vector")
    mean = float(x.mean())
    flags: list[str] = []

    if n > sd_ddof:
        sample_sd = float(math.sqrt(float(np.sum((x - mean) ** 2)) / (n - sd_ddof)))
    else:
        sample_sd = None
        flags.append(f"sd undefined: needs n > {sd_ddof}")

    skewness = kurtosis = None
    if n < 3:
        flags.append("skewness/kurtosis undefined: needs n >= 3")
    else:
        dev = x - mean
        m2 = float(np.mean(dev**2))
        if m2 == 0.0:
            flags.append("skewness/kurtosis undefined: zero variance")
        else:
            skewness = float(np.mean(dev**3)) / m2**1.5
            kurtosis = float(np.mean(dev**4)) / m2**2

    return DistributionStats(
        n=n,
        mean=mean,
        sample_sd=sample_sd,
        skewness=skewness,
        kurtosis=kurtosis,
        max=float(x.max()),
        flags=tuple(flags),
    )


def z_scores(counts: Mapping[K, float], mean: float, sd: float) -> dict[K, float]:
    """(count - mean) / sd per key."""
    if sd <= 0:
        raise ValueError(f"sd must be positive, got {sd}")
    return {k: (v - mean) / sd for k, v in counts.items()}


def share_with_at_least(counts: Mapping, total_units: int, threshold: int) -> float:
    """Percentage of total_units whose count meets the threshold.

    Keys absent from `counts` are units with count zero, hence total_units
    must cover at least the keyed units.
    """
    if total_units <= 0:
        raise ValueError(f"total_units must be positive, got {total_units}")
    if total_units < len(counts):
        raise ValueError(f"total_units={total_units} is less than the {len(counts)} keyed units")
    hits = sum(1 for v in counts.values() if v >= threshold)
    return 100.0 * hits / total_units


def per_capita_ratio(count: float, avg_population: float) -> float:
    """Incidents per 1000 residents."""
    if not avg_population > 0:
        raise ValueError(f"avg_population must be positive, got {avg_population}")
    return 1000.0 * count / avg_population


def average_population(
    population_by_year: Mapping[int, float],
    years: Sequence[int] = DEFAULT_POPULATION_YEARS,
    label: str = "",
) -> Optional[float]:
    """Arithmetic mean of the yearly estimates over `years`.

    Years missing from the table are skipped with a warning; returns None when
    none of the requested years are present.
    """
    present = [population_by_year[y] for y in years if y in population_by_year]
    if not present:
        return None
    if len(present) < len(years):
        missing = [y for y in years if y not in population_by_year]
        log.warning("population for %s missing years %s; averaging the rest", label or "county", missing)
    return sum(present) / len(present)


def rank_by(values: Mapping[K, float], descending: bool = True) -> list[tuple[K, float, int]]:
    """(key, value, 1-based rank) sorted by value; ties fall back to key order."""
    items = sorted(values.items())  # key-lexicographic base order for ties
    items.sort(key=lambda kv: kv[1], reverse=descending)
    return [(k, v, i) for i, (k, v) in enumerate(items, start=1)]
