"""One far outlier versus fuzzy and possibilistic c-means.

Fuzzy memberships must sum to one, so the outlier still belongs fully to
some cluster and drags its centroid.  Typicalities do not have that
constraint and the outlier ends up with near-zero typicality everywhere.
"""
import numpy as np

from softclust import RunConfig, fcm_fit, pcm_fit
from softclust.datagen import ClusterSpec, Scenario, add_outlier, generate

blobs = Scenario("blobs", (ClusterSpec((0.0, 0.0), (1.0, 1.0), 100),
                           ClusterSpec((10.0, 0.0), (1.0, 1.0), 100)))
clean = generate(blobs, seed=3)
noisy = add_outlier(clean, (50.0, 50.0))
cfg = RunConfig(c=2, seed=3)


def shift(a, b):
    d = np.linalg.norm(a[:, None] - b[None], axis=2)
    return d.min(axis=1).mean()


for name, fitter in (("fcm", fcm_fit), ("pcm", pcm_fit)):
    before = fitter(clean.data, cfg)
    after = fitter(noisy.data, cfg)
    u_out = after.memberships.u[:, -1]
    print(f"{name}: centroid shift {shift(before.centroids.theta, after.centroids.theta):.4f}, "
          f"outlier memberships {np.round(u_out, 4)}")
    if name == "pcm":
        print("     eta per cluster:", np.round(after.eta, 3))
