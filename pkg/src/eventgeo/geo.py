"""Geodesic primitives: great-circle distance, polygon containment, area-uniform sampling.

Distances use a spherical Earth of mean radius 6371.0088 km (3958.7613 mi).
Containment is planar even-odd ray casting in lat/lon space, which is the
standard approximation for county-scale polygons.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidGeometryError, RegionTooThinError

EARTH_RADIUS_KM = 6371.0088  # IUGG mean radius
EARTH_RADIUS_MI = 3958.7613
KM_PER_MILE = 1.609344

_RADIUS = {"km": EARTH_RADIUS_KM, "mi": EARTH_RADIUS_MI}

# Rejection-sampling guard rails: raise once acceptance is hopeless.
_MIN_ACCEPT_RATIO = 1e-4
_WARMUP_PROPOSALS = 20_000


def _radius(unit: str) -> float:
    try:
        return _RADIUS[unit]
    except KeyError:
        raise ValueError(f"unit must be one of {sorted(_RADIUS)}, got {unit!r}") from None


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in degrees.

    Latitude must lie in [-90, 90]; longitude outside [-180, 180] is wrapped
    into that range (180 wraps to -180).
    """

    lat: float
    lon: float

    def __post_init__(self):
        lat = float(self.lat)
        lon = float(self.lon)
        if not (math.isfinite(lat) and math.isfinite(lon)):
            raise ValueError(f"coordinates must be finite, got ({self.lat}, {self.lon})")
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            lon = ((lon + 180.0) % 360.0) - 180.0
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", lon)


PointLike = Union[GeoPoint, Sequence[float]]


def as_latlon_array(points: Union[Iterable[PointLike], np.ndarray]) -> np.ndarray:
    """Coerce GeoPoints, (lat, lon) pairs, or an (n, 2) array to a float array."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        rows = []
        for p in points:
            if isinstance(p, GeoPoint):
                rows.append((p.lat, p.lon))
            else:
                rows.append((float(p[0]), float(p[1])))
        arr = np.asarray(rows, dtype=float).reshape(-1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of lat/lon, got shape {arr.shape}")
    return arr


def _central_angle(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Haversine central angle in radians between two points given in degrees."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * math.asin(min(1.0, math.sqrt(h)))


def geo_distance(a: PointLike, b: PointLike, unit: str = "km") -> float:
    """Great-circle distance between two points.

    Parameters
    ----------
    a, b : GeoPoint or (lat, lon) pair
    unit : "km" or "mi"

    Returns
    -------
    float
        Haversine distance on the mean-radius sphere. Symmetric, non-negative,
        and zero iff the coordinates are identical.
    """
    r = _radius(unit)
    alat, alon = (a.lat, a.lon) if isinstance(a, GeoPoint) else (float(a[0]), float(a[1]))
    blat, blon = (b.lat, b.lon) if isinstance(b, GeoPoint) else (float(b[0]), float(b[1]))
    return r * _central_angle(alat, alon, blat, blon)


def distance_matrix(a, b, unit: str = "km") -> np.ndarray:
    """Pairwise haversine distances, shape (len(a), len(b))."""
    r = _radius(unit)
    A = np.radians(as_latlon_array(a))
    B = np.radians(as_latlon_array(b))
    lat1 = A[:, 0][:, None]
    lat2 = B[:, 0][None, :]
    dlat = lat2 - lat1
    dlon = B[:, 1][None, :] - A[:, 1][:, None]
    h = np.sin(dlat / 2.0) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2.0) ** 2
    return 2.0 * r * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


class RegionPolygon:
    """A polygon in lat/lon space: one outer ring plus optional hole rings.

    Rings are stored as (m, 2) float arrays of (lat, lon) without a duplicated
    closing vertex; the last vertex implicitly connects back to the first.
    Containment uses the even-odd rule, so the hole rings simply toggle
    crossings; points exactly on an edge follow the half-open ray convention
    and are not given a defined answer.
    """

    __slots__ = ("rings", "bbox")

    def __init__(self, rings: Sequence):
        cleaned = []
        for ring in rings:
            arr = as_latlon_array(ring)
            if len(arr) > 1 and np.array_equal(arr[0], arr[-1]):
                arr = arr[:-1]  # drop explicit GeoJSON-style closure
            if len(np.unique(arr, axis=0)) < 3:
                raise InvalidGeometryError(
                    f"ring needs >= 3 distinct vertices, got {len(np.unique(arr, axis=0))}"
                )
            arr.setflags(write=False)
            cleaned.append(arr)
        if not cleaned:
            raise InvalidGeometryError("polygon needs at least an outer ring")
        self.rings = tuple(cleaned)
        allv = np.vstack(cleaned)
        self.bbox = (
            float(allv[:, 0].min()),
            float(allv[:, 0].max()),
            float(allv[:, 1].min()),
            float(allv[:, 1].max()),
        )

    def contains(self, p: PointLike) -> bool:
        lat, lon = (p.lat, p.lon) if isinstance(p, GeoPoint) else (float(p[0]), float(p[1]))
        return bool(self.contains_many(np.array([lat]), np.array([lon]))[0])

    def contains_many(self, lats: np.ndarray, lons: np.ndarray) -> np.ndarray:
        """Vectorized even-odd ray cast with a bbox fast-reject."""
        lats = np.asarray(lats, dtype=float)
        lons = np.asarray(lons, dtype=float)
        inside = np.zeros(lats.shape, dtype=bool)
        lat_min, lat_max, lon_min, lon_max = self.bbox
        cand = (lats >= lat_min) & (lats <= lat_max) & (lons >= lon_min) & (lons <= lon_max)
        if not cand.any():
            return inside
        py = lats[cand][:, None]
        px = lons[cand][:, None]
        crossings = np.zeros(py.shape[0], dtype=np.int64)
        for ring in self.rings:
            y1 = ring[:, 0][None, :]
            x1 = ring[:, 1][None, :]
            y2 = np.roll(ring[:, 0], -1)[None, :]
            x2 = np.roll(ring[:, 1], -1)[None, :]
            straddles = (y1 > py) != (y2 > py)
            with np.errstate(divide="ignore", invalid="ignore"):
                x_at_ray = (x2 - x1) * (py - y1) / (y2 - y1) + x1
            crossings += np.sum(straddles & (px < x_at_ray), axis=1)
        inside[cand] = (crossings % 2).astype(bool)
        return inside

    @classmethod
    def from_geojson(cls, geometry: dict) -> list["RegionPolygon"]:
        """Build polygons from a GeoJSON Polygon/MultiPolygon geometry (or Feature).

        GeoJSON positions are (lon, lat) per RFC 7946; they are flipped to the
        (lat, lon) order used everywhere in this package. A MultiPolygon yields
        one RegionPolygon per part.
        """
        if geometry.get("type") == "Feature":
            geometry = geometry["geometry"]
        gtype = geometry.get("type")
        coords = geometry.get("coordinates")
        if gtype == "Polygon":
            polys = [coords]
        elif gtype == "MultiPolygon":
            polys = coords
        else:
            raise InvalidGeometryError(f"unsupported geometry type {gtype!r}")
        out = []
        for rings in polys:
            out.append(cls([[(pos[1], pos[0]) for pos in ring] for ring in rings]))
        return out


def point_in_polygon(p: PointLike, poly: RegionPolygon) -> bool:
    """True iff p falls inside poly's outer ring and outside its holes."""
    return poly.contains(p)


def load_regions(path) -> list[RegionPolygon]:
    """Load every polygon from a GeoJSON file (geometry, Feature, or FeatureCollection)."""
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("type") == "FeatureCollection":
        features = obj["features"]
    else:
        features = [obj]
    regions: list[RegionPolygon] = []
    for feat in features:
        regions.extend(RegionPolygon.from_geojson(feat))
    return regions


def _combined_bbox(regions: Sequence[RegionPolygon]):
    boxes = np.array([r.bbox for r in regions])
    return (
        float(boxes[:, 0].min()),
        float(boxes[:, 1].max()),
        float(boxes[:, 2].min()),
        float(boxes[:, 3].max()),
    )


def sample_uniform(
    region: Union[RegionPolygon, Sequence[RegionPolygon]],
    n: int,
    seed: int,
) -> list[GeoPoint]:
    """Draw n points uniformly by spherical area from a region.

    Longitude is uniform over the bbox and latitude is drawn as
    asin(uniform(sin(lat_min), sin(lat_max))), which is area-uniform on the
    sphere; draws outside the region are rejected and resampled. Output is
    deterministic for a fixed seed.

    Raises
    ------
    RegionTooThinError
        If, after a warm-up volume of proposals, the acceptance ratio stays
        below 1e-4 (the region is far too thin relative to its bbox).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return []
    regions = [region] if isinstance(region, RegionPolygon) else list(region)
    if not regions:
        raise ValueError("need at least one region polygon")
    lat_min, lat_max, lon_min, lon_max = _combined_bbox(regions)
    if not (lat_max > lat_min and lon_max > lon_min):
        raise ValueError("region bbox has zero extent")

    rng = np.random.default_rng(seed)
    sin_lo = math.sin(math.radians(lat_min))
    sin_hi = math.sin(math.radians(lat_max))

    out_lat: list[np.ndarray] = []
    out_lon: list[np.ndarray] = []
    kept = 0
    proposed = 0
    accepted = 0
    while kept < n:
        batch = max(1024, 2 * (n - kept))
        lons = rng.uniform(lon_min, lon_max, batch)
        lats = np.degrees(np.arcsin(rng.uniform(sin_lo, sin_hi, batch)))
        inside = np.zeros(batch, dtype=bool)
        for poly in regions:
            inside |= poly.contains_many(lats, lons)
        proposed += batch
        accepted += int(inside.sum())
        if proposed >= _WARMUP_PROPOSALS and accepted / proposed < _MIN_ACCEPT_RATIO:
            raise RegionTooThinError(
                f"acceptance ratio {accepted / proposed:.2e} after {proposed} proposals"
            )
        out_lat.append(lats[inside])
        out_lon.append(lons[inside])
        kept += int(inside.sum())
    lat_all = np.concatenate(out_lat)[:n]
    lon_all = np.concatenate(out_lon)[:n]
    return [GeoPoint(float(la), float(lo)) for la, lo in zip(lat_all, lon_all)]
