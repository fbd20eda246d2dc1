"""Acceptance suite: one test per criterion, printing one PASS/FAIL line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

from contextlib import contextmanager

import numpy as np
import pytest

from conftest import clustered_pattern, equal_area_square
from eventgeo.cli import main
from eventgeo.cluster import kmeans_geo
from eventgeo.counties import distribution_stats, per_capita_ratio, z_scores
from eventgeo.spatial import clark_evans, monte_carlo_csr, nn_distances
from eventgeo.stknn import evaluate, knn_classify
from eventgeo.timeseries import MonthCount, flag_outliers
from test_stknn import _oracle_classify, _random_instance

STUDY_N = 600
STUDY_AREA = 3706269.0


@contextmanager
def criterion(number, title):
    try:
        yield
    except Exception:
        print(f"FAIL criterion {number}: {title}")
        raise
    print(f"PASS criterion {number}: {title}")


def test_criterion_1_clark_evans_closed_form():
    with criterion(1, "Clark-Evans closed form at the study density"):
        base = clark_evans(STUDY_N, STUDY_AREA)
        assert base.expected_variance == pytest.approx(421.96, abs=0.01)


def test_criterion_2_top_county_z_scores():
    with criterion(2, "z-scores of the six outlier county counts"):
        counts = {"c167": 167, "c102": 102, "c88": 88, "c54": 54, "c53": 53, "c44": 44}
        z = z_scores(counts, mean=4.61, sd=12.22)
        expected = {"c167": 13.29, "c102": 7.97, "c88": 6.82, "c54": 4.04, "c53": 3.96, "c44": 3.22}
        for key, want in expected.items():
            assert z[key] == pytest.approx(want, abs=0.01)


def test_criterion_3_monte_carlo_csr():
    with criterion(3, "Monte Carlo CSR matches the closed forms (edge bias tolerated)"):
        square = equal_area_square(STUDY_AREA)
        sim = monte_carlo_csr(square, STUDY_AREA, STUDY_N, trials=30, seed=42, unit="mi")
        assert sim.mean_of_variances == pytest.approx(421.96, rel=0.15)
        assert sim.mean_of_means == pytest.approx(39.30, rel=0.05)


def test_criterion_4_clustered_vs_csr_discrimination():
    with criterion(4, "3-cluster pattern exceeds twice the CSR variance"):
        pts = clustered_pattern(seed=7)
        assert len(pts) == STUDY_N
        observed = nn_distances(pts, unit="mi")
        assert observed.sample_variance > 2 * clark_evans(STUDY_N, STUDY_AREA).expected_variance


def test_criterion_5_kmeans_properties():
    with criterion(5, "k-means recovery, monotone objective, thread determinism"):
        centers = [(45.0, -120.0), (30.0, -85.0), (40.0, -75.0)]
        for seed in range(5):
            rng = np.random.default_rng(1000 + seed)
            pts, want = [], []
            for g, (clat, clon) in enumerate(centers):
                for _ in range(50):
                    pts.append((clat + rng.normal(0, 0.5), clon + rng.normal(0, 0.5)))
                    want.append(g)
            result = kmeans_geo(pts, k=3, seed=seed)
            mapping = {}
            for assigned, truth in zip(result.assignments, want):
                mapping.setdefault(int(assigned), truth)
                assert mapping[int(assigned)] == truth  # exact recovery
            for prev, cur in zip(result.objective_trace, result.objective_trace[1:]):
                assert cur <= prev * (1 + 1e-12) + 1e-9  # non-increasing objective

        big = np.column_stack(
            (
                np.random.default_rng(2).uniform(25, 48, 3000),
                np.random.default_rng(3).uniform(-124, -67, 3000),
            )
        )
        one = kmeans_geo(big, k=4, seed=5, workers=1)
        many = kmeans_geo(big, k=4, seed=5, workers=4)
        assert np.array_equal(one.assignments, many.assignments)
        assert one.centroids == many.centroids
        assert one.objective == many.objective


def test_criterion_6_knn_oracle_equivalence():
    with criterion(6, "k-NN matches the exhaustive oracle; self-test is 100%"):
        rng = np.random.default_rng(1234)
        for _ in range(200):
            train = _random_instance(rng, int(rng.integers(5, 51)))
            query = _random_instance(rng, 1)[0]
            for k in (1, 3, 5):
                assert knn_classify(train, query, k) == _oracle_classify(train, query, k)
        train = _random_instance(rng, 40)
        curve = evaluate(train, train, ks=[1])
        assert curve[0].accuracy == 100.0


def test_criterion_7_moment_conventions():
    with criterion(7, "moment conventions: exact small case and normal draws"):
        s = distribution_stats([1, 2, 3])
        assert s.skewness == 0.0
        assert s.kurtosis == pytest.approx(1.5, rel=1e-12)
        draws = np.random.default_rng(606).standard_normal(100_000)
        big = distribution_stats(draws)
        assert abs(big.skewness) < 0.05
        assert big.kurtosis == pytest.approx(3.0, abs=0.15)


def test_criterion_8_per_capita_ratio():
    with criterion(8, "per-1000 ratio formula"):
        assert per_capita_ratio(167, 756242) == pytest.approx(0.220829, abs=1e-5)
        assert per_capita_ratio(1, 1000) == 1.0


def test_criterion_9_timeseries_flagging():
    with criterion(9, "sigma-threshold flagging of the spike fixture"):
        series = [MonthCount(2020, m, 1) for m in range(1, 10)] + [MonthCount(2020, 10, 100)]
        assert flag_outliers(series, factor=1.96) == [(2020, 10)]
        constant = [MonthCount(2021, m, 6) for m in range(1, 13)]
        assert flag_outliers(constant, factor=1.96) == []


def test_criterion_10_cli_determinism(
    synthetic_csv, counties_path, population_path, region_box_path, tmp_path
):
    with criterion(10, "every CLI subcommand is byte-identical across reruns"):
        def run_all(out):
            base = [
                "--csv", str(synthetic_csv), "--out-dir", str(out),
                "--label", "acc", "--seed", "11",
            ]
            commands = [
                ["ingest", *base],
                ["spatial", *base, "--unit", "mi", "--area", str(STUDY_AREA),
                 "--region", str(region_box_path), "--mc-trials", "3"],
                ["cluster", *base, "--k", "3"],
                ["counties", *base, "--boundaries", str(counties_path)],
                ["locations", *base],
                ["ratio", *base, "--boundaries", str(counties_path),
                 "--population", str(population_path)],
                ["timeseries", *base],
                ["knn", *base, "--kmax", "9"],
                ["terms", *base, "--where", "42,-118"],
            ]
            for argv in commands:
                assert main(argv) == 0, argv[0]

        out_a, out_b = tmp_path / "a", tmp_path / "b"
        run_all(out_a)
        run_all(out_b)
        names = sorted(p.name for p in out_a.iterdir())
        assert len(names) >= 9
        assert names == sorted(p.name for p in out_b.iterdir())
        for name in names:
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name
