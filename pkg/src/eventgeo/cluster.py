"""k-means over geographic points: geodesic assignment, chordal centroid updates.

The assignment step uses great-circle distance; the update step averages each
cluster's points as 3D unit vectors and renormalizes (the chordal Frechet
mean). For compact continental clusters the chordal mean is an excellent
stand-in for the true geodesic mean and keeps the update a single vector op.

Runs are deterministic for a fixed seed, including across worker counts: the
assignment step is elementwise (chunking cannot change any point's nearest
centroid) and reductions happen serially in index order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geo import GeoPoint, as_latlon_array, distance_matrix

_DEGENERATE_NORM = 1e-12  # antipodal cancellation guard


@dataclass(frozen=True)
class ClusterResult:
    k: int
    assignments: np.ndarray  # (n,) cluster index per point
    centroids: tuple[GeoPoint, ...]
    objective: float  # sum of squared geodesic distances to assigned centroid
    iterations: int
    converged: bool
    objective_trace: tuple[float, ...]
    unit: str


@dataclass(frozen=True)
class ClusterSummary:
    cluster: int
    size: int
    centroid: GeoPoint
    mean_distance: float


def _to_unit_vectors(latlon: np.ndarray) -> np.ndarray:
    lat = np.radians(latlon[:, 0])
    lon = np.radians(latlon[:, 1])
    cos_lat = np.cos(lat)
    return np.column_stack((cos_lat * np.cos(lon), cos_lat * np.sin(lon), np.sin(lat)))


def _vector_to_latlon(v: np.ndarray) -> tuple[float, float]:
    return (
        float(np.degrees(np.arcsin(np.clip(v[2], -1.0, 1.0)))),
        float(np.degrees(np.arctan2(v[1], v[0]))),
    )


def _assign(pts: np.ndarray, centroids: np.ndarray, unit: str, workers: int):
    """Nearest centroid (first index wins ties) and its distance, per point."""
    n = len(pts)
    if workers <= 1 or n < 2048:
        d = distance_matrix(pts, centroids, unit)
        return d.argmin(axis=1), d.min(axis=1)
    assign = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=float)
    bounds = np.linspace(0, n, workers + 1, dtype=int)

    def fill(lo: int, hi: int):
        d = distance_matrix(pts[lo:hi], centroids, unit)
        assign[lo:hi] = d.argmin(axis=1)
        dist[lo:hi] = d.min(axis=1)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda b: fill(*b), zip(bounds[:-1], bounds[1:])))
    return assign, dist


def _init_plusplus(pts: np.ndarray, k: int, rng: np.random.Generator, unit: str) -> np.ndarray:
    """k-means++ seeding: each next center drawn with probability proportional
    to squared geodesic distance from the nearest chosen center."""
    n = len(pts)
    centroids = np.empty((k, 2), dtype=float)
    centroids[0] = pts[rng.integers(n)]
    if k == 1:
        return centroids
    d2 = distance_matrix(pts, centroids[:1], unit).ravel() ** 2
    for j in range(1, k):
        total = d2.sum()
        idx = int(rng.choice(n, p=d2 / total))
        centroids[j] = pts[idx]
        d2 = np.minimum(d2, distance_matrix(pts, centroids[j : j + 1], unit).ravel() ** 2)
    return centroids


def _update_centroids(
    pts: np.ndarray, vectors: np.ndarray, assignments: np.ndarray, k: int
) -> np.ndarray:
    out = np.empty((k, 2), dtype=float)
    for c in range(k):
        members = np.flatnonzero(assignments == c)
        mean_vec = vectors[members].mean(axis=0)
        norm = np.linalg.norm(mean_vec)
        if norm < _DEGENERATE_NORM:
            out[c] = pts[members[0]]  # antipodal-degenerate mean: fall back to a member
        else:
            out[c] = _vector_to_latlon(mean_vec / norm)
    return out


def _repair_empty_clusters(
    assignments: np.ndarray, dist: np.ndarray, centroids: np.ndarray, pts: np.ndarray, k: int
):
    """Reseed each empty cluster's centroid to the point currently farthest
    from its assigned centroid. Other points keep their assignment until the
    next sweep."""
    for c in range(k):
        if not (assignments == c).any():
            idx = int(np.argmax(dist))
            centroids[c] = pts[idx]
            assignments[idx] = c
            dist[idx] = 0.0


def kmeans_geo(
    points,
    k: int,
    seed: int,
    max_iter: int = 200,
    tol: float = 1e-6,
    unit: str = "km",
    workers: int = 1,
) -> ClusterResult:
    """Partition points into k clusters by geodesic k-means.

    Parameters
    ----------
    points : GeoPoints, (lat, lon) pairs, or an (n, 2) array
    k : cluster count; must not exceed the number of distinct points
    seed : RNG seed for k-means++ initialization
    max_iter : assignment-sweep budget
    tol : stop once the relative change in the objective falls below this
    unit : "km" or "mi" (the objective is in this unit squared)
    workers : threads for the assignment step; results are identical for any value

    Returns
    -------
    ClusterResult
        Assignments consistent with the final centroids, the squared-distance
        objective, and its per-sweep trace.
    """
    pts = as_latlon_array(points)
    n = len(pts)
    if n == 0:
        raise ValueError("points must be nonempty")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n_distinct = len(np.unique(pts, axis=0))
    if k > n_distinct:
        raise ValueError(f"k={k} exceeds the {n_distinct} distinct points")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    rng = np.random.default_rng(seed)
    vectors = _to_unit_vectors(pts)
    centroids = _init_plusplus(pts, k, rng, unit)

    assignments, dist = _assign(pts, centroids, unit, workers)
    _repair_empty_clusters(assignments, dist, centroids, pts, k)
    objective = float(np.sum(dist**2))
    trace = [objective]
    iterations = 1
    converged = objective == 0.0

    while not converged and iterations < max_iter:
        centroids = _update_centroids(pts, vectors, assignments, k)
        assignments, dist = _assign(pts, centroids, unit, workers)
        _repair_empty_clusters(assignments, dist, centroids, pts, k)
        new_objective = float(np.sum(dist**2))
        iterations += 1
        trace.append(new_objective)
        converged = abs(objective - new_objective) < tol * objective or new_objective == 0.0
        objective = new_objective

    return ClusterResult(
        k=k,
        assignments=assignments,
        centroids=tuple(GeoPoint(c[0], c[1]) for c in centroids),
        objective=objective,
        iterations=iterations,
        converged=converged,
        objective_trace=tuple(trace),
        unit=unit,
    )


def cluster_summary(result: ClusterResult, points) -> list[ClusterSummary]:
    """Per-cluster size, centroid, and mean member distance to the centroid."""
    pts = as_latlon_array(points)
    if len(pts) != len(result.assignments):
        raise ValueError(
            f"{len(pts)} points inconsistent with {len(result.assignments)} assignments"
        )
    centroid_arr = as_latlon_array(result.centroids)
    d = distance_matrix(pts, centroid_arr, result.unit)
    out = []
    for c in range(result.k):
        members = np.flatnonzero(result.assignments == c)
        mean_d = float(d[members, c].mean()) if len(members) else float("nan")
        out.append(
            ClusterSummary(
                cluster=c,
                size=len(members),
                centroid=result.centroids[c],
                mean_distance=mean_d,
            )
        )
    return out
