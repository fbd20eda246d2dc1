"""Nearest-neighbor distance statistics and complete-spatial-randomness baselines.

Under complete spatial randomness (a homogeneous Poisson process at density
rho points per unit area), nearest-neighbor distances have expected mean
1/(2*sqrt(rho)) and variance (4 - pi)/(4*pi*rho). Observed patterns are
compared against these closed forms and against Monte Carlo resampling of
area-uniform points.

Sample variance uses the n-1 denominator throughout. No edge-effect
correction is applied; Monte Carlo trials carry the same boundary bias as any
observed pattern inside the same region, and tolerances absorb it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InsufficientDataError
from .geo import RegionPolygon, as_latlon_array, distance_matrix, sample_uniform


@dataclass(frozen=True)
class NNSummary:
    """Per-point nearest-neighbor distances with their mean and sample variance."""

    distances: tuple[float, ...]
    mean: float
    sample_variance: float
    unit: str


@dataclass(frozen=True)
class CSRBaseline:
    """Clark-Evans expectations for a pattern of the given density.

    ratio is the Clark-Evans R (observed mean / expected mean): below 1 means
    more clustered than random, above 1 more dispersed.
    """

    density: float
    expected_mean: float
    expected_variance: float
    ratio: Optional[float] = None


def nn_distances(points, unit: str = "km") -> NNSummary:
    """Distance from each point to its nearest other point.

    Needs at least two points. Duplicate coordinates are legitimate and give
    a nearest-neighbor distance of zero.
    """
    arr = as_latlon_array(points)
    n = len(arr)
    if n < 2:
        raise InsufficientDataError(f"nearest-neighbor distances need >= 2 points, got {n}")
    d = distance_matrix(arr, arr, unit)
    np.fill_diagonal(d, np.inf)
    nearest = d.min(axis=1)
    return NNSummary(
        distances=tuple(float(x) for x in nearest),
        mean=float(nearest.mean()),
        sample_variance=float(nearest.var(ddof=1)),
        unit=unit,
    )


def clark_evans(n: int, area: float, observed_mean: Optional[float] = None) -> CSRBaseline:
    """Closed-form CSR baseline at density n/area.

    Area units are the caller's choice and must match the distance unit
    squared; they are configuration, never derived from geometry here.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not area > 0:
        raise ValueError(f"area must be positive, got {area}")
    rho = n / area
    expected_mean = 1.0 / (2.0 * math.sqrt(rho))
    expected_variance = (4.0 - math.pi) / (4.0 * math.pi * rho)
    ratio = None if observed_mean is None else observed_mean / expected_mean
    return CSRBaseline(
        density=rho,
        expected_mean=expected_mean,
        expected_variance=expected_variance,
        ratio=ratio,
    )


@dataclass(frozen=True)
class CSRSimulation:
    """Monte Carlo CSR trials next to their closed-form baseline."""

    trial_stats: tuple[tuple[float, float], ...]  # (mean, sample_variance) per trial
    baseline: CSRBaseline
    n: int
    trials: int
    seed: int
    unit: str

    @property
    def mean_of_means(self) -> float:
        return float(np.mean([m for m, _ in self.trial_stats]))

    @property
    def mean_of_variances(self) -> float:
        return float(np.mean([v for _, v in self.trial_stats]))


def _trial_seed(seed: int, trial: int) -> int:
    # Stable per-trial stream so parallel and serial runs agree exactly.
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def monte_carlo_csr(
    region: Union[RegionPolygon, Sequence[RegionPolygon]],
    area: float,
    n: int,
    trials: int,
    seed: int,
    unit: str = "km",
    workers: int = 1,
) -> CSRSimulation:
    """Sample `trials` patterns of n area-uniform points and summarize each.

    Each trial draws its own seed from (seed, trial index), computes the
    nearest-neighbor distances of the sampled pattern, and records their mean
    and sample variance. `area` feeds the attached Clark-Evans baseline; it is
    not used for sampling, which is bounded by the region itself.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")

    def one_trial(t: int) -> tuple[float, float]:
        pts = sample_uniform(region, n, _trial_seed(seed, t))
        s = nn_distances(pts, unit=unit)
        return (s.mean, s.sample_variance)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = tuple(pool.map(one_trial, range(trials)))
    else:
        stats = tuple(one_trial(t) for t in range(trials))
    return CSRSimulation(
        trial_stats=stats,
        baseline=clark_evans(n, area),
        n=n,
        trials=trials,
        seed=seed,
        unit=unit,
    )
