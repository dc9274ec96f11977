"""Fuzzy c-means on two well separated blobs.

Shows the soft memberships of a few points, the cost trace, and how a larger
fuzzifier spreads membership across clusters.
"""
import numpy as np

from softclust import RunConfig, fcm_fit, generate
from softclust.fcm import update_memberships

data = generate("two_separate", seed=1)
res = fcm_fit(data.data, RunConfig(c=2, seed=1))

print("centroids:")
print(np.round(res.centroids.theta, 3))
print(f"converged={res.converged} after {res.iterations} iterations")
print("cost trace (first 5):", np.round(res.cost_trace[:5], 2))

# a point between the blobs is shared, a point inside one is not
probe = np.array([[5.0, 5.0], [0.2, -0.3]])
for q in (1.5, 2.0, 4.0):
    fit_q = fcm_fit(data.data, RunConfig(c=2, q=q, seed=1))
    u = update_memberships(probe, fit_q.centroids, q).u
    print(f"q={q}: midpoint u={np.round(u[:, 0], 3)}  inner u={np.round(u[:, 1], 3)}")
