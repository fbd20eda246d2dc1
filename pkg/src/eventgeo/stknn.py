"""Space-time k-nearest-neighbor classifier for the binary fatality label.

The metric is |day gap| + lambda * geodesic distance. Days and distance are
added with no inherently shared unit, so the distance unit and the weight
lambda are explicit parameters everywhere and belong in any report produced
from these results. Neighbor search is a brute-force scan: event datasets at
this scale fit comfortably, and the scan parallelizes over queries.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .geo import GeoPoint, distance_matrix, geo_distance
from .ingest import EventRecord, to_epoch_day


@dataclass(frozen=True)
class SpaceTimeEvent:
    """(epoch day, location, binary label); label 1 means one or more fatalities."""

    epoch_day: int
    point: GeoPoint
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")

    @classmethod
    def from_event(cls, ev: EventRecord) -> "SpaceTimeEvent":
        return cls(
            epoch_day=to_epoch_day(ev.date),
            point=ev.point,
            label=1 if ev.fatalities >= 1 else 0,
        )


@dataclass(frozen=True)
class CurvePoint:
    k: int
    accuracy: float  # percentage of test events predicted correctly
    n_test: int
    tp: int
    tn: int
    fp: int
    fn: int


AccuracyCurve = list[CurvePoint]


def st_distance(a: SpaceTimeEvent, b: SpaceTimeEvent, unit: str = "km", lam: float = 1.0) -> float:
    """|day gap| + lam * great-circle distance. A metric for lam >= 0."""
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    return abs(a.epoch_day - b.epoch_day) + lam * geo_distance(a.point, b.point, unit)


def _train_arrays(train: Sequence[SpaceTimeEvent]):
    days = np.array([e.epoch_day for e in train], dtype=float)
    latlon = np.array([(e.point.lat, e.point.lon) for e in train], dtype=float)
    labels = np.array([e.label for e in train], dtype=np.int64)
    return days, latlon, labels


def _distance_block(
    q_days: np.ndarray, q_latlon: np.ndarray, t_days: np.ndarray, t_latlon: np.ndarray,
    unit: str, lam: float,
) -> np.ndarray:
    return np.abs(q_days[:, None] - t_days[None, :]) + lam * distance_matrix(
        q_latlon, t_latlon, unit
    )


def knn_classify(
    train: Sequence[SpaceTimeEvent],
    query: SpaceTimeEvent,
    k: int,
    unit: str = "km",
    lam: float = 1.0,
) -> int:
    """Majority label of the k nearest training events.

    k must be odd (no vote ties) and at most the training size. Distance ties
    are broken by training-set index order, so output is deterministic for a
    fixed training order.
    """
    _check_k(k, len(train))
    t_days, t_latlon, labels = _train_arrays(train)
    q_days = np.array([query.epoch_day], dtype=float)
    q_latlon = np.array([(query.point.lat, query.point.lon)], dtype=float)
    d = _distance_block(q_days, q_latlon, t_days, t_latlon, unit, lam)[0]
    order = np.argsort(d, kind="stable")
    votes = int(labels[order[:k]].sum())
    return 1 if 2 * votes > k else 0


def _check_k(k: int, n_train: int):
    if k % 2 == 0 or k < 1:
        raise ValueError(f"k must be a positive odd number, got {k}")
    if k > n_train:
        raise ValueError(f"k={k} exceeds the {n_train} training events")


def evaluate(
    train: Sequence[SpaceTimeEvent],
    test: Sequence[SpaceTimeEvent],
    ks: Iterable[int],
    unit: str = "km",
    lam: float = 1.0,
    workers: int = 1,
) -> AccuracyCurve:
    """Accuracy of knn_classify over the test set for each odd k.

    Each test event is classified independently against the full training
    set; the curve also carries the confusion counts per k. Chunked parallel
    runs merge in test-index order and match the serial result exactly.
    """
    train = list(train)
    test = list(test)
    if not train or not test:
        raise ValueError("train and test must both be nonempty")
    ks = sorted(set(int(k) for k in ks))
    for k in ks:
        _check_k(k, len(train))
    if not ks:
        raise ValueError("ks must be nonempty")

    t_days, t_latlon, labels = _train_arrays(train)
    q_days, q_latlon, true_labels = _train_arrays(test)
    kmax = ks[-1]

    def predict_chunk(lo: int, hi: int) -> np.ndarray:
        d = _distance_block(q_days[lo:hi], q_latlon[lo:hi], t_days, t_latlon, unit, lam)
        order = np.argsort(d, axis=1, kind="stable")[:, :kmax]
        neighbor_labels = labels[order]  # (chunk, kmax)
        cum = np.cumsum(neighbor_labels, axis=1)
        preds = np.empty((hi - lo, len(ks)), dtype=np.int64)
        for j, k in enumerate(ks):
            preds[:, j] = (2 * cum[:, k - 1] > k).astype(np.int64)
        return preds

    n = len(test)
    if workers > 1:
        bounds = np.linspace(0, n, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: predict_chunk(*b), zip(bounds[:-1], bounds[1:])))
        preds = np.vstack(parts)
    else:
        preds = predict_chunk(0, n)

    curve: AccuracyCurve = []
    for j, k in enumerate(ks):
        p = preds[:, j]
        tp = int(np.sum((p == 1) & (true_labels == 1)))
        tn = int(np.sum((p == 0) & (true_labels == 0)))
        fp = int(np.sum((p == 1) & (true_labels == 0)))
        fn = int(np.sum((p == 0) & (true_labels == 1)))
        curve.append(
            CurvePoint(
                k=k,
                accuracy=100.0 * (tp + tn) / n,
                n_test=n,
                tp=tp,
                tn=tn,
                fp=fp,
                fn=fn,
            )
        )
    return curve


def split_by_year(
    events: Iterable[EventRecord],
    train_years: Iterable[int],
    test_years: Iterable[int],
) -> tuple[list[SpaceTimeEvent], list[SpaceTimeEvent]]:
    """Label events and split them into train/test by calendar year."""
    train_years = frozenset(train_years)
    test_years = frozenset(test_years)
    train: list[SpaceTimeEvent] = []
    test: list[SpaceTimeEvent] = []
    for ev in events:
        if ev.date.year in train_years:
            train.append(SpaceTimeEvent.from_event(ev))
        elif ev.date.year in test_years:
            test.append(SpaceTimeEvent.from_event(ev))
    return train, test
