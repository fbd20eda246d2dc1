"""Command-line front end: one subcommand per analysis, file-based reports.

Settings resolve flag > config file > built-in default. The config file is
INI: a [run] section with the same keys as the long flags (underscores for
dashes) and an optional [columns] section mapping logical field names to CSV
headers. Every report embeds the resolved configuration, and identical
configuration plus seeds reproduces byte-identical report content.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .counties import (
    DEFAULT_POPULATION_YEARS,
    assign_county,
    attach_population,
    average_population,
    count_by_county,
    count_by_location,
    distribution_stats,
    load_county_boundaries,
    load_population_csv,
    per_capita_ratio,
    rank_by,
    share_with_at_least,
    z_scores,
)
from .cluster import cluster_summary, kmeans_geo
from .errors import InsufficientDataError, InvalidGeometryError, RegionTooThinError, SchemaError
from .geo import load_regions
from .ingest import ColumnMap, EventFilter, filter_events, parse_events, unique_locations
from .reports import write_csv_report, write_json_report
from .spatial import clark_evans, monte_carlo_csr, nn_distances
from .stknn import evaluate, split_by_year
from .text import load_stopwords, term_frequencies
from .timeseries import flag_outliers, monthly_counts

log = logging.getLogger("eventgeo")

MOMENT_CONVENTIONS = "sd ddof=1; skewness m3/m2^1.5; kurtosis raw m4/m2^2"


@dataclass
class RunConfig:
    csv: Path
    columns: ColumnMap
    event_filter: EventFilter
    unit: str
    lam: float
    seed: Optional[int]
    strict: bool
    out_dir: Path
    fmt: str
    label: str
    precision: int


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _load_config_file(path: Path) -> tuple[dict, dict]:
    cp = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    run = dict(cp["run"]) if cp.has_section("run") else {}
    cols = dict(cp["columns"]) if cp.has_section("columns") else {}
    return run, cols


def _pick(flag_value, cfg: dict, key: str, default=None, cast=None):
    if flag_value is not None:
        return flag_value
    if key in cfg:
        raw = cfg[key]
        return cast(raw) if cast else raw
    return default


def _as_bool(text) -> bool:
    return str(text).strip().lower() in ("1", "true", "yes", "on")


def _resolve_config(args) -> RunConfig:
    run_cfg: dict = {}
    col_cfg: dict = {}
    if args.config:
        run_cfg, col_cfg = _load_config_file(Path(args.config))

    csv_path = _pick(args.csv, run_cfg, "csv")
    if not csv_path:
        raise ValueError("an input CSV is required (--csv or csv= in the config file)")
    csv_path = Path(csv_path)
    if not csv_path.exists():
        raise ValueError(f"input CSV not found: {csv_path}")

    known = {f.name for f in fields(ColumnMap)}
    unknown = set(col_cfg) - known
    if unknown:
        raise ValueError(f"unknown [columns] keys: {sorted(unknown)}")
    columns = ColumnMap(**{k: (v or None) for k, v in col_cfg.items()}) if col_cfg else ColumnMap()

    accept_all = _pick(args.accept_all, run_cfg, "accept_all", False, _as_bool)
    ev_types = _pick(args.event_types, run_cfg, "event_types")
    sub_types = _pick(args.sub_event_types, run_cfg, "sub_event_types")
    if accept_all:
        event_filter = EventFilter.everything()
    elif ev_types is None and sub_types is None:
        event_filter = EventFilter.political_violence()
    else:
        event_filter = EventFilter(
            event_types=frozenset(_split_list(ev_types or "")),
            sub_event_types=frozenset(_split_list(sub_types or "")),
        )

    out_dir = Path(_pick(args.out_dir, run_cfg, "out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    return RunConfig(
        csv=csv_path,
        columns=columns,
        event_filter=event_filter,
        unit=_pick(args.unit, run_cfg, "unit", "km"),
        lam=_pick(args.lam, run_cfg, "lambda", 1.0, float),
        seed=_pick(args.seed, run_cfg, "seed", None, int),
        strict=_pick(args.strict, run_cfg, "strict", False, _as_bool),
        out_dir=out_dir,
        fmt=_pick(args.format, run_cfg, "format", "csv"),
        label=args.label or time.strftime("%Y%m%dT%H%M%SZ", time.gmtime()),
        precision=_pick(args.precision, run_cfg, "precision", 4, int),
    )


def _require_seed(rc: RunConfig) -> int:
    """Randomized subcommands need a seed; generate and announce one if absent."""
    if rc.seed is None:
        rc.seed = int.from_bytes(os.urandom(4), "big")
        log.warning("no seed given; generated seed=%d (recorded in the report)", rc.seed)
    return rc.seed


def _load_events(rc: RunConfig):
    with open(rc.csv, encoding="utf-8-sig", newline="") as fh:
        records, errors = parse_events(fh, rc.columns, strict=rc.strict)
    if errors:
        log.warning("%d malformed rows skipped (see ingest report for details)", len(errors))
    return records, errors


def _filtered_events(rc: RunConfig):
    records, _ = _load_events(rc)
    return filter_events(records, rc.event_filter)


def _snapshot(rc: RunConfig, subcommand: str, **extra) -> dict:
    snap = {
        "subcommand": subcommand,
        "input_csv": str(rc.csv),
        "filter_accept_all": rc.event_filter.accept_all,
        "filter_event_types": "|".join(sorted(rc.event_filter.event_types)),
        "filter_sub_event_types": "|".join(sorted(rc.event_filter.sub_event_types)),
        "strict": rc.strict,
        "unit": rc.unit,
    }
    snap.update(extra)
    return snap


def _path(rc: RunConfig, stem: str, ext: Optional[str] = None) -> Path:
    return rc.out_dir / f"{stem}_{rc.label}.{ext or rc.fmt}"


def _write_table(rc: RunConfig, path: Path, snap: dict, columns, rows, json_key: str):
    if path.suffix == ".json":
        write_json_report(path, snap, {json_key: [dict(zip(columns, r)) for r in rows]})
    else:
        write_csv_report(path, snap, columns, rows)


def _stats_payload(stats) -> dict:
    return {
        "n": stats.n,
        "mean": stats.mean,
        "sample_sd": stats.sample_sd,
        "skewness": stats.skewness,
        "kurtosis": stats.kurtosis,
        "max": stats.max,
        "flags": list(stats.flags),
    }


# ---------------------------------------------------------------- subcommands


def cmd_ingest(rc: RunConfig, args) -> int:
    records, errors = _load_events(rc)
    matched = filter_events(records, rc.event_filter)
    dates = sorted(ev.date for ev in records)
    summary = [
        ("records", len(records)),
        ("row_errors", len(errors)),
        ("first_date", dates[0].isoformat() if dates else ""),
        ("last_date", dates[-1].isoformat() if dates else ""),
        ("total_fatalities", sum(ev.fatalities for ev in records)),
        ("fatal_events", sum(1 for ev in records if ev.fatalities > 0)),
        ("filter_matches", len(matched)),
    ]
    snap = _snapshot(rc, "ingest")
    out = _path(rc, "ingest")
    _write_table(rc, out, snap, ("metric", "value"), summary, "summary")
    written = [out]
    if errors:
        err_path = _path(rc, "ingest_errors")
        _write_table(
            rc, err_path, snap, ("row", "field", "message"),
            [(e.row, e.field, e.message) for e in errors], "errors",
        )
        written.append(err_path)
    print(f"{len(records)} records, {len(errors)} malformed rows, {len(matched)} match the filter")
    for p in written:
        print(f"wrote {p}")
    return 0


def cmd_spatial(rc: RunConfig, args) -> int:
    locations = unique_locations(_filtered_events(rc), precision=rc.precision)
    summary = nn_distances(locations, unit=rc.unit)
    snap = _snapshot(rc, "spatial", precision=rc.precision, moment_conventions=MOMENT_CONVENTIONS)
    if args.area is not None:
        snap["area"] = args.area

    out = _path(rc, "spatial")
    rows = [
        (i, p.lat, p.lon, d)
        for i, (p, d) in enumerate(zip(locations, summary.distances))
    ]
    _write_table(rc, out, snap, ("index", "lat", "lon", f"nn_distance_{rc.unit}"), rows, "distances")

    payload: dict = {
        "n_locations": len(locations),
        "nn_mean": summary.mean,
        "nn_sample_variance": summary.sample_variance,
        "unit": rc.unit,
    }
    if args.area is not None:
        base = clark_evans(len(locations), args.area, observed_mean=summary.mean)
        payload["csr_baseline"] = {
            "density": base.density,
            "expected_mean": base.expected_mean,
            "expected_variance": base.expected_variance,
            "clark_evans_ratio": base.ratio,
        }
    if args.mc_trials:
        if args.area is None or not args.region:
            raise ValueError("--mc-trials needs both --area and --region")
        seed = _require_seed(rc)
        snap["seed"] = seed
        sim = monte_carlo_csr(
            load_regions(args.region), args.area, len(locations),
            args.mc_trials, seed, unit=rc.unit, workers=args.workers,
        )
        payload["monte_carlo"] = {
            "trials": [{"mean": m, "sample_variance": v} for m, v in sim.trial_stats],
            "mean_of_means": sim.mean_of_means,
            "mean_of_variances": sim.mean_of_variances,
        }
    summary_path = _path(rc, "spatial_summary", "json")
    write_json_report(summary_path, snap, payload)
    print(
        f"{len(locations)} unique locations; NN mean {summary.mean:.2f} {rc.unit}, "
        f"sample variance {summary.sample_variance:.2f}"
    )
    print(f"wrote {out}\nwrote {summary_path}")
    return 0


def cmd_cluster(rc: RunConfig, args) -> int:
    events = _filtered_events(rc)
    if args.points == "locations":
        pts = unique_locations(events, precision=rc.precision)
    else:
        pts = [ev.point for ev in events]
    seed = _require_seed(rc)
    result = kmeans_geo(
        pts, args.k, seed, max_iter=args.max_iter, tol=args.tol, unit=rc.unit,
        workers=args.workers,
    )
    snap = _snapshot(
        rc, "cluster", k=args.k, seed=seed, points=args.points,
        max_iter=args.max_iter, tol=args.tol, precision=rc.precision,
    )
    out = _path(rc, "cluster")
    rows = [
        (i, p.lat, p.lon, int(c))
        for i, (p, c) in enumerate(zip(pts, result.assignments))
    ]
    _write_table(rc, out, snap, ("point_index", "lat", "lon", "cluster"), rows, "assignments")

    cents = cluster_summary(result, pts)
    cent_path = _path(rc, "cluster_centroids", "json")
    write_json_report(
        cent_path,
        snap,
        {
            "objective": result.objective,
            "iterations": result.iterations,
            "converged": result.converged,
            "centroids": [
                {
                    "cluster": s.cluster,
                    "lat": s.centroid.lat,
                    "lon": s.centroid.lon,
                    "size": s.size,
                    "mean_distance": s.mean_distance,
                }
                for s in cents
            ],
        },
    )
    sizes = ", ".join(f"{s.cluster}:{s.size}" for s in cents)
    print(f"k={args.k} on {len(pts)} points -> sizes {sizes} (objective {result.objective:.2f})")
    print(f"wrote {out}\nwrote {cent_path}")
    return 0


def _county_table(rc: RunConfig, args):
    boundaries = load_county_boundaries(args.boundaries)
    events = _filtered_events(rc)
    result = count_by_county(events, boundaries)
    meta = {b.fips: b for b in boundaries}
    return boundaries, events, result, meta


def cmd_counties(rc: RunConfig, args) -> int:
    _, _, result, meta = _county_table(rc, args)
    stats = distribution_stats(list(result.counts.values())) if result.counts else None
    z = (
        z_scores(result.counts, stats.mean, stats.sample_sd)
        if stats and stats.sample_sd
        else {}
    )
    snap = _snapshot(
        rc, "counties", boundaries=str(args.boundaries),
        total_counties=args.total_counties, moment_conventions=MOMENT_CONVENTIONS,
    )
    rows = [
        (fips, meta[fips].name, meta[fips].state, count, z.get(fips))
        for fips, count, _rank in rank_by(result.counts)
    ]
    out = _path(rc, "counties")
    _write_table(rc, out, snap, ("fips", "name", "state", "count", "z_score"), rows, "counties")

    shares = {
        str(t): share_with_at_least(result.counts, args.total_counties, t)
        for t in args.thresholds
    }
    stats_path = _path(rc, "counties_stats", "json")
    write_json_report(
        stats_path,
        snap,
        {
            "stats": _stats_payload(stats) if stats else None,
            "share_with_at_least_pct": shares,
            "counties_with_events": len(result.counts),
            "unassigned_events": len(result.unassigned),
        },
    )
    print(
        f"{len(result.counts)} counties with events, {len(result.unassigned)} events unassigned"
    )
    print(f"wrote {out}\nwrote {stats_path}")
    return 0


def cmd_locations(rc: RunConfig, args) -> int:
    events = _filtered_events(rc)
    result = count_by_location(events, precision=rc.precision)
    stats = distribution_stats(list(result.counts.values())) if result.counts else None
    z = (
        z_scores(result.counts, stats.mean, stats.sample_sd)
        if stats and stats.sample_sd
        else {}
    )
    snap = _snapshot(
        rc, "locations", precision=rc.precision, moment_conventions=MOMENT_CONVENTIONS
    )
    rows = [
        (key[0], key[1], count, z.get(key))
        for key, count, _rank in rank_by(result.counts)
    ]
    out = _path(rc, "locations")
    _write_table(rc, out, snap, ("lat", "lon", "count", "z_score"), rows, "locations")
    stats_path = _path(rc, "locations_stats", "json")
    write_json_report(stats_path, snap, {"stats": _stats_payload(stats) if stats else None})
    print(f"{len(result.counts)} distinct locations")
    print(f"wrote {out}\nwrote {stats_path}")
    return 0


def cmd_ratio(rc: RunConfig, args) -> int:
    boundaries, _, result, meta = _county_table(rc, args)
    attach_population(boundaries, load_population_csv(args.population))
    years = tuple(int(y) for y in args.pop_years)
    ratios = {}
    populations = {}
    skipped = []
    for fips, count in result.counts.items():
        pop = meta[fips].population_by_year
        avg = average_population(pop, years, label=meta[fips].name) if pop else None
        if avg is None:
            skipped.append(fips)
            continue
        populations[fips] = avg
        ratios[fips] = per_capita_ratio(count, avg)
    if skipped:
        log.warning("%d counties skipped for missing population data", len(skipped))
    ratio_rank = {fips: r for fips, _v, r in rank_by(ratios)}
    count_rank = {
        fips: r for fips, _v, r in rank_by({f: result.counts[f] for f in ratios})
    }
    snap = _snapshot(
        rc, "ratio", boundaries=str(args.boundaries), population=str(args.population),
        population_years="|".join(str(y) for y in years),
        skipped_no_population=len(skipped),
    )
    rows = [
        (
            fips,
            meta[fips].name,
            meta[fips].state,
            result.counts[fips],
            populations[fips],
            ratios[fips],
            ratio_rank[fips],
            count_rank[fips],
        )
        for fips, _v, _r in rank_by(ratios)
    ]
    out = _path(rc, "ratio")
    _write_table(
        rc, out, snap,
        ("fips", "name", "state", "incidents", "avg_population", "ratio_per_1000",
         "ratio_rank", "count_rank"),
        rows, "ratios",
    )
    print(f"{len(ratios)} counties ranked by incidents per 1000 residents")
    print(f"wrote {out}")
    return 0


def cmd_timeseries(rc: RunConfig, args) -> int:
    series = monthly_counts(_filtered_events(rc))
    flagged = set(flag_outliers(series, factor=args.factor)) if len(series) >= 2 else set()
    snap = _snapshot(rc, "timeseries", factor=args.factor, moment_conventions=MOMENT_CONVENTIONS)
    rows = [
        (b.year, b.month, b.count, (b.year, b.month) in flagged)
        for b in series
    ]
    out = _path(rc, "timeseries")
    _write_table(rc, out, snap, ("year", "month", "count", "flagged"), rows, "months")
    print(f"{len(series)} months, {len(flagged)} flagged above mean + {args.factor} sd")
    print(f"wrote {out}")
    return 0


def cmd_knn(rc: RunConfig, args) -> int:
    events = _filtered_events(rc)
    train, test = split_by_year(events, args.train_years, args.test_years)
    ks = [k for k in range(1, args.kmax + 1, 2)]
    curve = evaluate(train, test, ks, unit=rc.unit, lam=rc.lam, workers=args.workers)
    snap = _snapshot(
        rc, "knn", lam=rc.lam,
        train_years="|".join(str(y) for y in args.train_years),
        test_years="|".join(str(y) for y in args.test_years),
        n_train=len(train), n_test=len(test),
    )
    out = _path(rc, "knn")
    rows = [(p.k, p.accuracy, p.n_test) for p in curve]
    _write_table(rc, out, snap, ("k", "accuracy_pct", "n_test"), rows, "curve")
    conf_path = _path(rc, "knn_confusion", "json")
    write_json_report(
        conf_path,
        snap,
        {
            "per_k": [
                {"k": p.k, "tp": p.tp, "tn": p.tn, "fp": p.fp, "fn": p.fn,
                 "accuracy_pct": p.accuracy}
                for p in curve
            ]
        },
    )
    best = max(curve, key=lambda p: p.accuracy)
    print(
        f"train {len(train)} / test {len(test)}; best accuracy {best.accuracy:.1f}% at k={best.k}"
    )
    print(f"wrote {out}\nwrote {conf_path}")
    return 0


def cmd_terms(rc: RunConfig, args) -> int:
    events = _filtered_events(rc)
    where = args.where or "all"
    if where != "all":
        if where.startswith("fips:"):
            if not args.boundaries:
                raise ValueError("--where fips:... needs --boundaries")
            wanted = where[len("fips:"):]
            boundaries = load_county_boundaries(args.boundaries)
            events = [
                ev for ev in events
                if assign_county(ev.point, boundaries, ev.county_hint) == wanted
            ]
        else:
            parts = _split_list(where)
            if len(parts) != 2:
                raise ValueError(f"--where must be 'all', 'lat,lon', or 'fips:XXXXX', got {where!r}")
            lat, lon = round(float(parts[0]), rc.precision), round(float(parts[1]), rc.precision)
            events = [
                ev for ev in events
                if (round(ev.point.lat, rc.precision), round(ev.point.lon, rc.precision))
                == (lat, lon)
            ]
    stopwords = load_stopwords(args.stopwords) if args.stopwords else load_stopwords()
    freqs = term_frequencies(events, stopwords)
    if args.top:
        freqs = freqs[: args.top]
    snap = _snapshot(rc, "terms", where=where, top=args.top or 0)
    out = _path(rc, "terms")
    _write_table(rc, out, snap, ("term", "count"), freqs, "terms")
    print(f"{len(events)} events matched; {len(freqs)} terms reported")
    print(f"wrote {out}")
    return 0


# -------------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="INI config file ([run] and [columns] sections)")
    p.add_argument("--csv", help="input events CSV (ACLED schema)")
    p.add_argument("--out-dir", help="report directory (default .)")
    p.add_argument("--format", choices=("csv", "json"), help="primary report format")
    p.add_argument("--label", help="report filename label (default: UTC timestamp)")
    p.add_argument("--unit", choices=("km", "mi"), help="distance unit (default km)")
    p.add_argument("--seed", type=int, help="RNG seed for randomized analyses")
    p.add_argument("--lambda", dest="lam", type=float, help="distance weight in the space-time metric")
    p.add_argument("--precision", type=int, help="coordinate rounding decimals (default 4)")
    p.add_argument("--strict", action="store_const", const=True, help="abort on malformed rows")
    p.add_argument("--event-types", help="comma-separated accepted event types")
    p.add_argument("--sub-event-types", help="comma-separated accepted sub-event types")
    p.add_argument("--accept-all", action="store_const", const=True, help="disable the type filter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventgeo",
        description="Spatial and temporal statistics for geolocated event data",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.set_defaults(func=func)
        return p

    add("ingest", cmd_ingest, "validate the input CSV and summarize it")

    p = add("spatial", cmd_spatial, "nearest-neighbor distances and CSR comparison")
    p.add_argument("--area", type=float, help="study-area size in squared distance units")
    p.add_argument("--region", help="GeoJSON region for Monte Carlo CSR sampling")
    p.add_argument("--mc-trials", type=int, default=0, help="Monte Carlo CSR trial count")
    p.add_argument("--workers", type=int, default=1, help="parallel trial workers")

    p = add("cluster", cmd_cluster, "geodesic k-means clustering")
    p.add_argument("--k", type=int, required=True, help="cluster count")
    p.add_argument("--points", choices=("locations", "incidents"), default="locations",
                   help="cluster unique locations or every incident")
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--workers", type=int, default=1)

    p = add("counties", cmd_counties, "county incident counts and outlier z-scores")
    p.add_argument("--boundaries", required=True, help="county GeoJSON FeatureCollection")
    p.add_argument("--total-counties", type=int, default=3143,
                   help="denominator for share-of-counties percentages")
    p.add_argument("--thresholds", type=lambda s: [int(t) for t in _split_list(s)],
                   default=[1, 2, 5], help="comma-separated count thresholds")

    add("locations", cmd_locations, "per-location incident counts and z-scores")

    p = add("ratio", cmd_ratio, "incidents per 1000 residents by county")
    p.add_argument("--boundaries", required=True)
    p.add_argument("--population", required=True, help="CSV with fips,year,population")
    p.add_argument("--pop-years", type=lambda s: [int(t) for t in _split_list(s)],
                   default=list(DEFAULT_POPULATION_YEARS))

    p = add("timeseries", cmd_timeseries, "monthly counts with sigma-threshold flags")
    p.add_argument("--factor", type=float, default=1.96)

    p = add("knn", cmd_knn, "space-time k-NN fatality classifier evaluation")
    p.add_argument("--train-years", type=lambda s: [int(t) for t in _split_list(s)],
                   default=[2020, 2021, 2022])
    p.add_argument("--test-years", type=lambda s: [int(t) for t in _split_list(s)],
                   default=[2023, 2024])
    p.add_argument("--kmax", type=int, default=31, help="evaluate odd k from 1 to kmax")
    p.add_argument("--workers", type=int, default=1)

    p = add("terms", cmd_terms, "ranked term frequencies from event notes")
    p.add_argument("--where", help="'all', 'lat,lon', or 'fips:XXXXX'")
    p.add_argument("--boundaries", help="county GeoJSON (needed for fips selection)")
    p.add_argument("--stopwords", help="custom stopword file, one word per line")
    p.add_argument("--top", type=int, help="keep only the top N terms")

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = _resolve_config(args)
        return args.func(rc, args)
    except (
        ValueError,
        OSError,
        KeyError,
        SchemaError,
        InvalidGeometryError,
        InsufficientDataError,
        RegionTooThinError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
