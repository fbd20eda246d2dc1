"""Shared fixtures: hand-built data files plus a deterministic synthetic corpus."""

import datetime as dt
import json
import math
from pathlib import Path

import numpy as np
import pytest

from eventgeo.geo import EARTH_RADIUS_MI, GeoPoint, RegionPolygon
from eventgeo.ingest import EventRecord, write_events

DATA_DIR = Path(__file__).parent / "data"

# (lat_min, lat_max, lon_min, lon_max) boxes of the fixture counties; Bravo has
# a hole at [31.5, 32.5] x [-88.5, -87.5] and Charlie is a two-part MultiPolygon.
COUNTY_BOXES = {
    "10001": (40.0, 44.0, -120.0, -116.0),
    "10003": (30.0, 34.0, -90.0, -86.0),
    "10005": (36.0, 38.0, -100.0, -98.0),
}


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def events_small_path() -> Path:
    return DATA_DIR / "events_small.csv"


@pytest.fixture(scope="session")
def events_bad_path() -> Path:
    return DATA_DIR / "events_bad.csv"


@pytest.fixture(scope="session")
def counties_path() -> Path:
    return DATA_DIR / "counties_fixture.geojson"


@pytest.fixture(scope="session")
def population_path() -> Path:
    return DATA_DIR / "population_fixture.csv"


def make_synthetic_events(n: int = 1000, seed: int = 20200525) -> list[EventRecord]:
    """Deterministic ACLED-shaped corpus spread over the fixture counties.

    Roughly 70% of events are political violence per the default filter, 11%
    carry fatalities, a hotspot location repeats often, and a few points fall
    outside every county.
    """
    rng = np.random.default_rng(seed)
    start = dt.date(2020, 1, 1).toordinal()
    end = dt.date(2024, 7, 31).toordinal()
    type_pool = [
        ("Riots", "Violent demonstration"),
        ("Riots", "Mob violence"),
        ("Violence against civilians", "Attack"),
        ("Protests", "Peaceful protest"),
        ("Protests", "Violent demonstration"),
    ]
    word_pool = [
        "police", "protest", "riot", "tear", "gas", "crowd", "fire", "march",
        "downtown", "arrested", "demonstrators", "violence", "the", "a", "and",
        "clashed", "dispersed", "courthouse", "rally", "curfew",
    ]
    names = {"10001": ("Alpha", "AA"), "10003": ("Bravo", "AA"), "10005": ("Charlie", "BB")}
    fips_keys = sorted(COUNTY_BOXES)
    events = []
    for _ in range(n):
        date = dt.date.fromordinal(int(rng.integers(start, end + 1)))
        roll = rng.random()
        if roll < 0.05:  # open water, matches no county
            lat, lon = 10.0 + rng.random() * 5.0, -60.0 + rng.random() * 5.0
            hint, state = None, None
        else:
            fips = fips_keys[int(rng.integers(len(fips_keys)))]
            lat_min, lat_max, lon_min, lon_max = COUNTY_BOXES[fips]
            if roll < 0.15:  # hotspot: repeat the county box center exactly
                lat, lon = (lat_min + lat_max) / 2, (lon_min + lon_max) / 2
            else:
                lat = lat_min + 0.1 + rng.random() * (lat_max - lat_min - 0.2)
                lon = lon_min + 0.1 + rng.random() * (lon_max - lon_min - 0.2)
            hint, state = names[fips]
        event_type, sub_event_type = type_pool[int(rng.integers(len(type_pool)))]
        fatalities = int(rng.poisson(0.4)) if rng.random() < 0.11 else 0
        notes = " ".join(rng.choice(word_pool, size=8))
        events.append(
            EventRecord(
                date=date,
                point=GeoPoint(round(float(lat), 4), round(float(lon), 4)),
                event_type=event_type,
                sub_event_type=sub_event_type,
                fatalities=fatalities,
                notes=notes,
                source="Synthetic Wire",
                county_hint=hint,
                state=state,
            )
        )
    return events


@pytest.fixture(scope="session")
def synthetic_events() -> list[EventRecord]:
    return make_synthetic_events()


@pytest.fixture(scope="session")
def synthetic_csv(tmp_path_factory, synthetic_events) -> Path:
    path = tmp_path_factory.mktemp("synthetic") / "events_synthetic.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_events(synthetic_events, fh)
    return path


def equal_area_square(area: float, unit_radius: float = EARTH_RADIUS_MI) -> RegionPolygon:
    """Equator-centered lat/lon rectangle whose spherical area is exactly `area`.

    A rectangle spanning dlon radians of longitude and latitudes [-h, h] has
    spherical area R^2 * dlon * 2*sin(h); choosing dlon = side/R and
    sin(h) = side/(2R) makes that side^2 with side = sqrt(area). Area-uniform
    sampling over its bbox is then exactly uniform over the region.
    """
    side = math.sqrt(area)
    half_lon = math.degrees(side / unit_radius) / 2
    half_lat = math.degrees(math.asin(side / (2 * unit_radius)))
    return RegionPolygon(
        [[(-half_lat, -half_lon), (-half_lat, half_lon), (half_lat, half_lon), (half_lat, -half_lon)]]
    )


def clustered_pattern(seed: int = 7, area: float = 3706269.0) -> list[tuple[float, float]]:
    """600 points in 3 clusters inside the equal-area square: two dense, one sparse.

    Heterogeneous density is what drives the clustered-pattern variance
    signature: most points sit in dense clumps with tiny nearest-neighbor
    distances while the sparse cluster contributes a fat tail of large ones.
    """
    side = math.sqrt(area)
    half_lon = math.degrees(side / EARTH_RADIUS_MI) / 2
    half_lat = math.degrees(math.asin(side / (2 * EARTH_RADIUS_MI)))
    deg_per_mi = 180.0 / (math.pi * EARTH_RADIUS_MI)
    rng = np.random.default_rng(seed)
    pts: list[tuple[float, float]] = []
    for clat, clon, sigma_mi, n in [
        (-10.0, -11.0, 40.0, 280),
        (10.0, 9.0, 120.0, 280),
        (-8.0, 11.0, 500.0, 40),
    ]:
        kept = 0
        while kept < n:
            lat = clat + rng.normal(0.0, sigma_mi * deg_per_mi)
            lon = clon + rng.normal(0.0, sigma_mi * deg_per_mi / math.cos(math.radians(clat)))
            if abs(lat) <= half_lat and abs(lon) <= half_lon:
                pts.append((lat, lon))
                kept += 1
    return pts


@pytest.fixture(scope="session")
def region_box_path(tmp_path_factory) -> Path:
    """A single rectangular region covering all three fixture counties."""
    path = tmp_path_factory.mktemp("region") / "box.geojson"
    geom = {
        "type": "Polygon",
        "coordinates": [
            [[-125.0, 25.0], [-80.0, 25.0], [-80.0, 48.0], [-125.0, 48.0], [-125.0, 25.0]]
        ],
    }
    path.write_text(json.dumps(geom), encoding="utf-8")
    return path
