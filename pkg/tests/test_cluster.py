import math

import numpy as np
import pytest

from eventgeo.cluster import _repair_empty_clusters, cluster_summary, kmeans_geo
from eventgeo.geo import GeoPoint, distance_matrix, geo_distance


def _chordal_centroid(pts):
    lat = np.radians([p[0] for p in pts])
    lon = np.radians([p[1] for p in pts])
    v = np.column_stack((np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat))).mean(axis=0)
    v = v / np.linalg.norm(v)
    return (math.degrees(math.asin(v[2])), math.degrees(math.atan2(v[1], v[0])))


def _partition_objective(pts, sides):
    total = 0.0
    for side in sides:
        if not side:
            return math.inf
        c = _chordal_centroid([pts[i] for i in side])
        total += sum(geo_distance(pts[i], c) ** 2 for i in side)
    return total


def best_two_partition(pts):
    """Exhaustive search over all bipartitions for the minimum objective."""
    n = len(pts)
    best_obj, best_sides = math.inf, None
    for mask in range(2 ** (n - 1)):  # point 0 pinned to side A
        a = [0] + [i for i in range(1, n) if (mask >> (i - 1)) & 1]
        b = [i for i in range(1, n) if not (mask >> (i - 1)) & 1]
        obj = _partition_objective(pts, [a, b])
        if obj < best_obj:
            best_obj, best_sides = obj, (frozenset(a), frozenset(b))
    return best_obj, frozenset(best_sides)


def _grouped(assignments):
    groups = {}
    for i, c in enumerate(assignments):
        groups.setdefault(int(c), set()).add(i)
    return frozenset(frozenset(g) for g in groups.values())


def _random_us_points(rng, n):
    return np.column_stack((rng.uniform(25, 48, n), rng.uniform(-124, -67, n)))


class TestKMeansGeo:
    def test_identical_points_single_cluster(self):
        pts = [GeoPoint(45.5, -122.7)] * 8
        result = kmeans_geo(pts, k=1, seed=0)
        assert result.objective == 0.0
        assert result.converged
        assert result.centroids[0].lat == pytest.approx(45.5, abs=1e-9)
        assert result.centroids[0].lon == pytest.approx(-122.7, abs=1e-9)

    def test_two_tight_groups_recovered_exactly(self):
        rng = np.random.default_rng(3)
        group_a = [(45 + rng.normal(0, 0.3), -120 + rng.normal(0, 0.3)) for _ in range(4)]
        group_b = [(30 + rng.normal(0, 0.3), -85 + rng.normal(0, 0.3)) for _ in range(4)]
        pts = group_a + group_b
        result = kmeans_geo(pts, k=2, seed=1)
        _best_obj, best_sides = best_two_partition(pts)
        assert _grouped(result.assignments) == best_sides
        assert best_sides == frozenset({frozenset({0, 1, 2, 3}), frozenset({4, 5, 6, 7})})

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_three_separated_clusters_recovered(self, seed):
        rng = np.random.default_rng(100 + seed)
        centers = [(45, -120), (30, -85), (40, -75)]
        pts, want = [], []
        for g, (clat, clon) in enumerate(centers):
            for _ in range(30):
                pts.append((clat + rng.normal(0, 0.4), clon + rng.normal(0, 0.4)))
                want.append(g)
        result = kmeans_geo(pts, k=3, seed=seed)
        # Same partition up to label permutation.
        mapping = {}
        for assigned, truth in zip(result.assignments, want):
            mapping.setdefault(int(assigned), truth)
            assert mapping[int(assigned)] == truth

    def test_objective_trace_non_increasing(self):
        rng = np.random.default_rng(12)
        pts = _random_us_points(rng, 300)
        for seed in (0, 5, 9):
            result = kmeans_geo(pts, k=4, seed=seed)
            trace = result.objective_trace
            for prev, cur in zip(trace, trace[1:]):
                assert cur <= prev * (1 + 1e-12) + 1e-9

    def test_fixed_seed_reproducible(self):
        rng = np.random.default_rng(4)
        pts = _random_us_points(rng, 200)
        a = kmeans_geo(pts, k=3, seed=7)
        b = kmeans_geo(pts, k=3, seed=7)
        assert np.array_equal(a.assignments, b.assignments)
        assert a.centroids == b.centroids
        assert a.objective == b.objective

    def test_workers_bit_identical(self):
        rng = np.random.default_rng(8)
        pts = _random_us_points(rng, 3000)  # large enough to engage the threaded path
        serial = kmeans_geo(pts, k=4, seed=11, workers=1)
        threaded = kmeans_geo(pts, k=4, seed=11, workers=4)
        assert np.array_equal(serial.assignments, threaded.assignments)
        assert serial.centroids == threaded.centroids
        assert serial.objective == threaded.objective
        assert serial.objective_trace == threaded.objective_trace

    def test_assignments_are_nearest_at_termination(self):
        rng = np.random.default_rng(21)
        pts = _random_us_points(rng, 150)
        result = kmeans_geo(pts, k=3, seed=2)
        d = distance_matrix(pts, [(c.lat, c.lon) for c in result.centroids])
        assert np.array_equal(d.argmin(axis=1), result.assignments)

    def test_objective_matches_assigned_distances(self):
        rng = np.random.default_rng(22)
        pts = _random_us_points(rng, 80)
        result = kmeans_geo(pts, k=2, seed=3)
        d = distance_matrix(pts, [(c.lat, c.lon) for c in result.centroids])
        manual = float((d[np.arange(len(pts)), result.assignments] ** 2).sum())
        assert result.objective == pytest.approx(manual, rel=1e-12)

    def test_infeasible_k_rejected(self):
        pts = [(1, 1), (1, 1), (2, 2)]
        with pytest.raises(ValueError, match="distinct"):
            kmeans_geo(pts, k=3, seed=0)
        with pytest.raises(ValueError):
            kmeans_geo(pts, k=0, seed=0)
        with pytest.raises(ValueError):
            kmeans_geo([], k=1, seed=0)

    def test_duplicates_allowed_when_k_fits(self):
        pts = [(1, 1), (1, 1), (2, 2), (2, 2)]
        result = kmeans_geo(pts, k=2, seed=0)
        assert result.assignments[0] == result.assignments[1]
        assert result.assignments[2] == result.assignments[3]
        assert result.objective == pytest.approx(0.0, abs=1e-9)


class TestEmptyClusterRepair:
    def test_repair_reseeds_to_worst_point(self):
        pts = np.array([(0.0, 0.0), (0.0, 1.0), (0.0, 10.0)])
        centroids = np.array([(0.0, 0.0), (50.0, 50.0)])
        d = distance_matrix(pts, centroids)
        assignments = d.argmin(axis=1)  # everything lands in cluster 0
        dist = d.min(axis=1)
        assert not (assignments == 1).any()
        _repair_empty_clusters(assignments, dist, centroids, pts, k=2)
        assert (assignments == 1).sum() == 1
        assert assignments[2] == 1  # farthest-from-assigned-centroid point moved
        assert tuple(centroids[1]) == (0.0, 10.0)
        assert dist[2] == 0.0

    def test_sizes_always_positive_across_seeds(self):
        rng = np.random.default_rng(31)
        for trial in range(20):
            pts = _random_us_points(rng, 40)
            k = int(rng.integers(2, 6))
            result = kmeans_geo(pts, k=k, seed=trial)
            sizes = [s.size for s in cluster_summary(result, pts)]
            assert all(size >= 1 for size in sizes)
            assert sum(sizes) == 40


class TestClusterSummary:
    def test_single_cluster_size(self):
        pts = [(10, 10), (10.1, 10.1), (9.9, 9.9)]
        result = kmeans_geo(pts, k=1, seed=0)
        (summary,) = cluster_summary(result, pts)
        assert summary.size == 3
        assert summary.mean_distance >= 0

    def test_two_group_sizes(self):
        pts = [(45, -120), (45.1, -120.1), (45.2, -119.9), (30, -85), (30.1, -85.1)]
        result = kmeans_geo(pts, k=2, seed=1)
        sizes = sorted(s.size for s in cluster_summary(result, pts))
        assert sizes == [2, 3]

    def test_mismatched_points_rejected(self):
        pts = [(45, -120), (30, -85)]
        result = kmeans_geo(pts, k=1, seed=0)
        with pytest.raises(ValueError, match="inconsistent"):
            cluster_summary(result, pts + [(0, 0)])
