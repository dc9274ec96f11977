"""Fuzzy c-means by alternating minimisation.

Cost::

    J(theta, U) = sum_i sum_j u_ij**q * d2(x_i, theta_j)

with every column of ``U`` summing to one.  ``d2`` is the squared Euclidean
or squared Mahalanobis distance; the membership update raises ratios of
squared distances to ``1 / (q - 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (CentroidSet, ClusteringResult, MembershipMatrix, RunConfig,
                   as_centroids, as_memberships, as_points, seeded_rng)
from .distance import cross_sq_distances, metric_for

# squared distances below this count as "point sits on the centroid"
COINCIDENCE_SQ = 1e-24
# weight sums below this mean a cluster has lost all its points
EMPTY_WEIGHT = 1e-30


class EmptyClusterError(RuntimeError):
    """A cluster's total weight vanished during the centroid update."""


@dataclass(frozen=True)
class FcmState:
    centroids: CentroidSet
    memberships: MembershipMatrix
    iteration: int = 0
    last_cost: float = float("nan")


def fcm_cost(data, centroids, memberships, q: float, metric=None) -> float:
    """Weighted within-cluster squared distance, ``sum u**q * d2``."""
    x = as_points(data)
    u = as_memberships(memberships)
    d2 = cross_sq_distances(x, as_centroids(centroids), metric)
    if u.shape != d2.shape:
        raise ValueError(f"memberships {u.shape} do not match (c, n) = {d2.shape}")
    return float(np.sum(u ** q * d2))


def memberships_from_sq_distances(d2: np.ndarray, q: float) -> np.ndarray:
    """Fuzzy memberships from a ``(c, n)`` array of squared distances.

    Points lying on one or more centroids (``d2 < 1e-24``) split their
    membership equally among those centroids.
    """
    if not q > 1.0:
        raise ValueError(f"fuzzifier q must be > 1, got {q}")
    d2 = np.asarray(d2, dtype=float)
    u = np.empty_like(d2)
    hit = d2 < COINCIDENCE_SQ
    on_centroid = hit.any(axis=0)
    free = ~on_centroid
    if free.any():
        # u_ij = d_ij^(-p) / sum_k d_ik^(-p), done as a softmax in log space
        w = -np.log(d2[:, free]) / (q - 1.0)
        w -= w.max(axis=0)
        e = np.exp(w)
        u[:, free] = e / e.sum(axis=0)
    if on_centroid.any():
        h = hit[:, on_centroid].astype(float)
        u[:, on_centroid] = h / h.sum(axis=0)
    return u


def update_memberships(data, centroids, q: float, metric=None) -> MembershipMatrix:
    d2 = cross_sq_distances(as_points(data), as_centroids(centroids), metric)
    return MembershipMatrix(memberships_from_sq_distances(d2, q), "fuzzy")


def weighted_centroids(data, weights: np.ndarray) -> np.ndarray:
    """Rows of ``weights`` (c, n) are per-cluster point weights; returns (c, d)."""
    x = as_points(data)
    tot = weights.sum(axis=1)
    empty = np.flatnonzero(tot < EMPTY_WEIGHT)
    if empty.size:
        raise EmptyClusterError(
            f"cluster(s) {empty.tolist()} have no weight; try another seed or fewer clusters")
    return (weights @ x) / tot[:, None]


def update_centroids(data, memberships, q: float) -> CentroidSet:
    u = as_memberships(memberships)
    return CentroidSet(weighted_centroids(data, u ** q))


def harden_by_nearest_centroid(data, centroids, metric=None) -> np.ndarray:
    """Index of the nearest centroid for each point; ties go to the lowest index."""
    d2 = cross_sq_distances(as_points(data), as_centroids(centroids), metric)
    return np.argmin(d2, axis=0)


def fcm_step(data, state: FcmState, q: float, metric=None) -> FcmState:
    """One membership update followed by one centroid update."""
    u = update_memberships(data, state.centroids, q, metric)
    theta = update_centroids(data, u, q)
    return FcmState(theta, u, state.iteration + 1, fcm_cost(data, theta, u, q, metric))


def initial_centroids(points: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    """``c`` distinct data points drawn without replacement."""
    _, first = np.unique(points, axis=0, return_index=True)
    candidates = np.sort(first)
    if candidates.size < c:
        raise ValueError(f"need {c} distinct points to initialise, dataset has {candidates.size}")
    pick = rng.choice(candidates.size, size=c, replace=False)
    return points[candidates[pick]].copy()


def _check_c(points, c):
    if not 2 <= c <= points.shape[0]:
        raise ValueError(f"need 2 <= c <= n, got c={c}, n={points.shape[0]}")


def fcm_fit(data, config: RunConfig, metric=None, init=None) -> ClusteringResult:
    """Run fuzzy c-means to convergence.

    Parameters
    ----------
    data : Dataset or array-like, shape (n, d)
    config : RunConfig
        ``c``, ``q``, ``tol`` (max-abs centroid move), ``max_iter``, ``seed``.
    metric : CovarianceModel, optional
        Overrides ``config.distance_kind``.  When omitted and the config asks
        for Mahalanobis, a global covariance is fitted to ``data``.
    init : array-like, shape (c, d), optional
        Starting centroids.  Default: ``c`` distinct data points picked with
        the seeded generator.

    Returns
    -------
    ClusteringResult
        Labels are nearest-centroid assignments.  ``cost_trace[k]`` is the cost
        after the k-th full (memberships, centroids) update.
    """
    x = as_points(data)
    _check_c(x, config.c)
    if metric is None:
        metric = metric_for(x, config.distance_kind)
    if init is None:
        theta = initial_centroids(x, config.c, seeded_rng(config.seed))
    else:
        theta = np.array(as_centroids(init), dtype=float)
        if theta.shape != (config.c, x.shape[1]):
            raise ValueError(f"init must have shape {(config.c, x.shape[1])}, got {theta.shape}")

    state = None
    trace = []
    converged = False
    while len(trace) < config.max_iter:
        prev = theta
        state = fcm_step(x, FcmState(CentroidSet(theta), None, len(trace)), config.q, metric)
        theta = state.centroids.theta
        trace.append(state.last_cost)
        if np.abs(theta - prev).max() < config.tol:
            converged = True
            break

    centroids = state.centroids
    return ClusteringResult(
        centroids=centroids,
        memberships=state.memberships,
        labels=harden_by_nearest_centroid(x, centroids, metric),
        cost_trace=trace,
        iterations=state.iteration,
        converged=converged,
        algorithm="fcm",
        config=config,
    )
