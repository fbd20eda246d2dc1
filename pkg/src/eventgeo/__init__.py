"""Spatial and temporal statistics for geolocated event data.

Ingests ACLED-schema CSV exports and provides: nearest-neighbor spatial
randomness testing against Clark-Evans baselines, geodesic k-means
clustering, county-level count distributions with z-score outliers,
per-capita scaling, monthly outlier flagging, term-frequency extraction from
event notes, and a space-time k-nearest-neighbor fatality classifier.
"""

from .errors import (
    InsufficientDataError,
    InvalidGeometryError,
    RegionTooThinError,
    SchemaError,
)
from .geo import (
    EARTH_RADIUS_KM,
    EARTH_RADIUS_MI,
    KM_PER_MILE,
    GeoPoint,
    RegionPolygon,
    distance_matrix,
    geo_distance,
    load_regions,
    point_in_polygon,
    sample_uniform,
)
from .ingest import (
    ColumnMap,
    EventFilter,
    EventRecord,
    RowError,
    filter_events,
    parse_events,
    to_epoch_day,
    unique_locations,
    write_events,
)
from .spatial import CSRBaseline, CSRSimulation, NNSummary, clark_evans, monte_carlo_csr, nn_distances
from .cluster import ClusterResult, ClusterSummary, cluster_summary, kmeans_geo
from .counties import (
    CountResult,
    CountyBoundary,
    DistributionStats,
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
from .timeseries import MonthCount, MonthlySeries, flag_outliers, monthly_counts
from .stknn import (
    AccuracyCurve,
    CurvePoint,
    SpaceTimeEvent,
    evaluate,
    knn_classify,
    split_by_year,
    st_distance,
)
from .text import TermFrequencies, load_stopwords, term_frequencies, tokenize

__version__ = "0.1.0"

__all__ = [
    "EARTH_RADIUS_KM",
    "EARTH_RADIUS_MI",
    "KM_PER_MILE",
    "AccuracyCurve",
    "CSRBaseline",
    "CSRSimulation",
    "ClusterResult",
    "ClusterSummary",
    "ColumnMap",
    "CountResult",
    "CountyBoundary",
    "CurvePoint",
    "DistributionStats",
    "EventFilter",
    "EventRecord",
    "GeoPoint",
    "InsufficientDataError",
    "InvalidGeometryError",
    "MonthCount",
    "MonthlySeries",
    "NNSummary",
    "RegionPolygon",
    "RegionTooThinError",
    "RowError",
    "SchemaError",
    "SpaceTimeEvent",
    "TermFrequencies",
    "assign_county",
    "attach_population",
    "average_population",
    "clark_evans",
    "cluster_summary",
    "count_by_county",
    "count_by_location",
    "distance_matrix",
    "distribution_stats",
    "evaluate",
    "filter_events",
    "flag_outliers",
    "geo_distance",
    "kmeans_geo",
    "knn_classify",
    "load_county_boundaries",
    "load_population_csv",
    "load_regions",
    "load_stopwords",
    "monte_carlo_csr",
    "monthly_counts",
    "nn_distances",
    "parse_events",
    "per_capita_ratio",
    "point_in_polygon",
    "rank_by",
    "sample_uniform",
    "share_with_at_least",
    "split_by_year",
    "st_distance",
    "term_frequencies",
    "to_epoch_day",
    "tokenize",
    "unique_locations",
    "write_events",
    "z_scores",
]
