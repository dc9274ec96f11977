"""Possibilistic c-means.

Cost::

    J(theta, U) = sum_i sum_j u_ij**q * d2(x_i, theta_j)
                  + sum_j eta_j * sum_i (1 - u_ij)**q

There is no column constraint on ``U``; each typicality depends only on its
own cluster.  Setting the derivative in ``u_ij`` to zero gives::

    u_ij = 1 / (1 + (d2(x_i, theta_j) / eta_j) ** (1 / (q - 1)))

``eta`` is estimated from a fuzzy c-means warm start and held fixed while
iterating, so both half-steps decrease ``J``.  By default a second pass
re-estimates ``eta`` from the first pass's typicalities and iterates again
with that (again fixed) ``eta``: a far outlier gets a sizeable fuzzy
membership and inflates the FCM-based scale, but has near-zero typicality.
"""
from __future__ import annotations

import numpy as np

from .core import (CentroidSet, ClusteringResult, MembershipMatrix, RunConfig,
                   as_centroids, as_memberships, as_points)
from .distance import cross_sq_distances, metric_for
from .fcm import _check_c, fcm_fit, weighted_centroids


class DegenerateClusterError(ValueError):
    """A cluster has zero scatter, so its eta would be zero."""


def _check_eta(eta, c=None) -> np.ndarray:
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if eta.ndim != 1 or not np.all(np.isfinite(eta)) or not np.all(eta > 0):
        raise ValueError(f"eta must be a vector of positive reals, got {eta}")
    if c is not None and eta.shape[0] != c:
        raise ValueError(f"need one eta per cluster ({c}), got {eta.shape[0]}")
    return eta


def pcm_cost(data, centroids, typicalities, eta, q: float, metric=None) -> float:
    x = as_points(data)
    u = as_memberships(typicalities)
    d2 = cross_sq_distances(x, as_centroids(centroids), metric)
    if u.shape != d2.shape:
        raise ValueError(f"typicalities {u.shape} do not match (c, n) = {d2.shape}")
    eta = _check_eta(eta, u.shape[0])
    return float(np.sum(u ** q * d2) + np.sum(eta * np.sum((1.0 - u) ** q, axis=1)))


def typicalities_from_sq_distances(d2: np.ndarray, eta, q: float) -> np.ndarray:
    if not q > 1.0:
        raise ValueError(f"q must be > 1, got {q}")
    eta = _check_eta(eta, d2.shape[0])
    ratio = np.asarray(d2, dtype=float) / eta[:, None]
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + ratio ** (1.0 / (q - 1.0)))


def update_typicalities(data, centroids, eta, q: float, metric=None) -> MembershipMatrix:
    d2 = cross_sq_distances(as_points(data), as_centroids(centroids), metric)
    return MembershipMatrix(typicalities_from_sq_distances(d2, eta, q), "possibilistic")


def estimate_eta(data, fcm_result: ClusteringResult, q: float, K: float = 1.0,
                 metric=None) -> np.ndarray:
    """Per-cluster scale ``K * sum u**q d2 / sum u**q`` from a fuzzy partition.

    The result is in squared-distance units: a point at squared distance
    ``eta_j`` from centroid j gets typicality 0.5 there.
    """
    if not K > 0:
        raise ValueError(f"K must be > 0, got {K}")
    x = as_points(data)
    u = as_memberships(fcm_result.memberships)
    d2 = cross_sq_distances(x, fcm_result.centroids.theta, metric)
    w = u ** q
    tot = w.sum(axis=1)
    num = (w * d2).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = K * num / tot
    bad = np.flatnonzero(~(eta > 0) | ~np.isfinite(eta))
    if bad.size:
        raise DegenerateClusterError(
            f"cluster(s) {bad.tolist()} have zero weighted scatter; eta undefined")
    return eta


def _iterate(x, theta, eta, config: RunConfig, metric):
    q = config.q
    trace = []
    u = None
    while len(trace) < config.max_iter:
        u = update_typicalities(x, theta, eta, q, metric)
        new_theta = weighted_centroids(x, u.u ** q)
        trace.append(pcm_cost(x, new_theta, u, eta, q, metric))
        shift = np.abs(new_theta - theta).max()
        theta = new_theta
        if shift < config.tol:
            return theta, u, trace, True
    return theta, u, trace, False


def pcm_fit(data, config: RunConfig, K: float = 1.0, metric=None,
            fcm_init: ClusteringResult | None = None, eta_passes: int = 2) -> ClusteringResult:
    """Possibilistic c-means warm-started from fuzzy c-means.

    The FCM run uses the same ``config`` (same seed).  Each of the
    ``eta_passes`` passes estimates ``eta`` from the previous partition (FCM
    memberships first, then the previous pass's typicalities) and iterates
    with it frozen.  ``cost_trace`` belongs to the last pass.

    Labels are the argmax typicality per point.  ``coincident_centroids`` is
    set when two final centroids are closer than ``config.tol``; that is a
    legitimate outcome here, not an error.
    """
    x = as_points(data)
    _check_c(x, config.c)
    if eta_passes < 1:
        raise ValueError("eta_passes must be >= 1")
    if metric is None:
        metric = metric_for(x, config.distance_kind)
    prev = fcm_init if fcm_init is not None else fcm_fit(x, config, metric)
    fcm_iterations = prev.iterations

    etas = []
    for _ in range(eta_passes):
        eta = estimate_eta(x, prev, config.q, K, metric)
        etas.append(eta.tolist())
        theta, u, trace, converged = _iterate(x, prev.centroids.theta, eta, config, metric)
        prev = ClusteringResult(CentroidSet(theta), u, np.argmax(u.u, axis=0),
                                trace, len(trace), converged, "pcm", config)

    gaps = [np.sqrt(np.sum((theta[a] - theta[b]) ** 2))
            for a in range(len(theta)) for b in range(a + 1, len(theta))]
    eta = eta.copy()
    eta.setflags(write=False)
    return ClusteringResult(
        centroids=prev.centroids,
        memberships=u,
        labels=prev.labels,
        cost_trace=trace,
        iterations=len(trace),
        converged=converged,
        algorithm="pcm",
        config=config,
        eta=eta,
        coincident_centroids=bool(min(gaps) < config.tol),
        extra={"K": float(K), "fcm_iterations": fcm_iterations, "eta_history": etas},
    )
