"""Is a point pattern spatially random? Nearest-neighbor distances vs CSR.

Complete spatial randomness (CSR) at density rho predicts nearest-neighbor
distances with mean 1/(2 sqrt(rho)) and variance (4 - pi)/(4 pi rho). A
clustered pattern betrays itself twice over: dense clumps pull the mean NN
distance below the CSR expectation, and the mix of tiny in-clump distances
with a fat tail of isolated points inflates the variance well past it.
"""

import math

import numpy as np

from eventgeo import EARTH_RADIUS_MI, clark_evans, monte_carlo_csr, nn_distances, sample_uniform
from _synthetic import continental_square

AREA_SQ_MI = 3_706_269.0  # continent-sized study region
N_POINTS = 600

square = continental_square(AREA_SQ_MI, EARTH_RADIUS_MI)
baseline = clark_evans(N_POINTS, AREA_SQ_MI)
print(f"CSR expectations at {N_POINTS} points over {AREA_SQ_MI:,.0f} sq mi:")
print(f"  mean NN distance  {baseline.expected_mean:8.2f} mi")
print(f"  NN variance       {baseline.expected_variance:8.2f} sq mi")

# A genuinely uniform pattern should track those numbers (edge effects push
# both slightly up, since boundary points have no neighbors outside).
uniform = nn_distances(sample_uniform(square, N_POINTS, seed=42), unit="mi")
ratio = clark_evans(N_POINTS, AREA_SQ_MI, observed_mean=uniform.mean).ratio
print(f"\nOne uniform draw: mean {uniform.mean:.2f}, variance {uniform.sample_variance:.2f}, "
      f"Clark-Evans R = {ratio:.3f}")

sim = monte_carlo_csr(square, AREA_SQ_MI, N_POINTS, trials=30, seed=42, unit="mi")
print(f"30 uniform trials: mean of means {sim.mean_of_means:.2f}, "
      f"mean of variances {sim.mean_of_variances:.2f}")

# Now a clustered pattern of the same size: two dense clumps, one sparse one.
rng = np.random.default_rng(7)
deg_per_mi = 180.0 / (math.pi * EARTH_RADIUS_MI)
pts = []
for clat, clon, sigma_mi, n in [(-10, -11, 40, 280), (10, 9, 120, 280), (-8, 11, 500, 40)]:
    kept = 0
    while kept < n:
        lat = clat + rng.normal(0, sigma_mi * deg_per_mi)
        lon = clon + rng.normal(0, sigma_mi * deg_per_mi / math.cos(math.radians(clat)))
        if square.contains((lat, lon)):
            pts.append((lat, lon))
            kept += 1
clustered = nn_distances(pts, unit="mi")
ratio = clark_evans(N_POINTS, AREA_SQ_MI, observed_mean=clustered.mean).ratio

print(f"\nClustered pattern: mean {clustered.mean:.2f}, variance {clustered.sample_variance:.2f}, "
      f"Clark-Evans R = {ratio:.3f}")
print(f"  variance is {clustered.sample_variance / baseline.expected_variance:.1f}x the CSR "
      "expectation -- far from random.")
