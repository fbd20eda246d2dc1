"""Shared synthetic world for the demo scripts.

Three rectangular "counties" on a continent-sized canvas, a few thousand
dated incidents concentrated around urban hotspots, ~11% of them fatal.
Everything is seeded, so every demo prints the same story on every run.
"""

import datetime as dt
import math

import numpy as np

from eventgeo import EventRecord, GeoPoint, RegionPolygon

COUNTIES = {
    "10001": ("Alpha", "AA", (40.0, 44.0, -120.0, -116.0)),
    "10003": ("Bravo", "AA", (30.0, 34.0, -90.0, -86.0)),
    "10005": ("Charlie", "BB", (36.0, 38.0, -100.0, -98.0)),
}

POPULATION = {
    "10001": {2020: 750000, 2021: 754000, 2022: 758000, 2023: 762968},
    "10003": {2020: 24000, 2021: 24500, 2022: 25000, 2023: 25500},
    "10005": {2020: 110000, 2021: 112000, 2022: 114000, 2023: 116000},
}

NOTE_WORDS = [
    "police", "protest", "riot", "tear", "gas", "crowd", "fire", "march",
    "downtown", "arrested", "demonstrators", "violence", "the", "a", "and",
    "clashed", "dispersed", "courthouse", "rally", "curfew", "masked",
]


def county_polygon(fips: str) -> RegionPolygon:
    lat_min, lat_max, lon_min, lon_max = COUNTIES[fips][2]
    return RegionPolygon(
        [[(lat_min, lon_min), (lat_min, lon_max), (lat_max, lon_max), (lat_max, lon_min)]]
    )


def make_events(n: int = 2000, seed: int = 20200525) -> list[EventRecord]:
    rng = np.random.default_rng(seed)
    start = dt.date(2020, 1, 1).toordinal()
    end = dt.date(2024, 7, 31).toordinal()
    fips_keys = sorted(COUNTIES)
    county_weights = [0.55, 0.15, 0.30]  # Alpha dominates raw counts
    hotspots = {f: ((b[0] + b[1]) / 2, (b[2] + b[3]) / 2) for f, (_n, _s, b) in COUNTIES.items()}
    # Zipf-ish note vocabulary so the term ranking has shape.
    word_p = np.array([1.0 / (i + 2) for i in range(len(NOTE_WORDS))])
    word_p /= word_p.sum()
    events = []
    for _ in range(n):
        date = dt.date.fromordinal(int(rng.integers(start, end + 1)))
        fips = rng.choice(fips_keys, p=county_weights)
        name, state, (lat_min, lat_max, lon_min, lon_max) = COUNTIES[fips]
        at_hotspot = rng.random() < 0.15
        if at_hotspot:
            lat, lon = hotspots[fips]  # exact repeat: a named intersection
        elif rng.random() < 0.35:
            clat, clon = hotspots[fips]
            lat = clat + rng.normal(0, 0.05)
            lon = clon + rng.normal(0, 0.05)
        else:
            lat = rng.uniform(lat_min + 0.05, lat_max - 0.05)
            lon = rng.uniform(lon_min + 0.05, lon_max - 0.05)
        if rng.random() < 0.75:
            event_type, sub = "Riots", "Violent demonstration"
        else:
            event_type, sub = "Violence against civilians", "Attack"
        # Fatality risk is geographic: Bravo is rough, its hotspot much worse.
        if fips == "10003":
            p_fatal = 0.70 if at_hotspot else 0.15
        else:
            p_fatal = 0.05
        fatalities = 1 + int(rng.poisson(0.4)) if rng.random() < p_fatal else 0
        events.append(
            EventRecord(
                date=date,
                point=GeoPoint(round(float(lat), 4), round(float(lon), 4)),
                event_type=event_type,
                sub_event_type=sub,
                fatalities=fatalities,
                notes=" ".join(rng.choice(NOTE_WORDS, size=10, p=word_p)),
                source="Synthetic Wire",
                county_hint=name,
                state=state,
            )
        )
    return events


def continental_square(area: float, radius: float) -> RegionPolygon:
    """Equator-centered rectangle with the given spherical area."""
    side = math.sqrt(area)
    half_lon = math.degrees(side / radius) / 2
    half_lat = math.degrees(math.asin(side / (2 * radius)))
    return RegionPolygon(
        [[(-half_lat, -half_lon), (-half_lat, half_lon), (half_lat, half_lon), (half_lat, -half_lon)]]
    )
