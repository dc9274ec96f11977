"""Euclidean / Mahalanobis distances and dissimilarity matrices.

The clustering code works with *squared* distances throughout; the
dissimilarity matrices fed to VAT hold plain (non-squared) distances.

A "metric" argument anywhere in the package is either ``None`` (Euclidean)
or a :class:`CovarianceModel` (Mahalanobis with that inverse covariance).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .core import as_points

SYMMETRY_TOL = 1e-10
# relative eigenvalue floor below which a covariance is treated as singular
SINGULAR_RTOL = 1e-12


class SingularCovarianceError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class CovarianceModel:
    """Inverse covariance for Mahalanobis distances.

    ``sigma_inv`` must be symmetric (to 1e-10) and positive definite; both are
    checked on construction.
    """

    sigma_inv: np.ndarray
    regularization: float = 0.0

    def __post_init__(self):
        s = np.array(self.sigma_inv, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError(f"sigma_inv must be square, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("sigma_inv must be finite")
        if np.abs(s - s.T).max() > SYMMETRY_TOL:
            raise ValueError("sigma_inv is not symmetric")
        if self.regularization < 0:
            raise ValueError("regularization must be >= 0")
        try:
            np.linalg.cholesky(s)
        except np.linalg.LinAlgError:
            raise SingularCovarianceError("sigma_inv is not positive definite") from None
        s.setflags(write=False)
        object.__setattr__(self, "sigma_inv", s)

    @property
    def d(self) -> int:
        return self.sigma_inv.shape[0]

    @classmethod
    def identity(cls, d: int) -> "CovarianceModel":
        return cls(np.eye(d))


def _vec(a) -> np.ndarray:
    return np.atleast_1d(np.asarray(a, dtype=float))


def sq_euclidean(a, b) -> float:
    a, b = _vec(a), _vec(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(diff @ diff)


def mahalanobis_sq(a, b, cov: CovarianceModel) -> float:
    a, b = _vec(a), _vec(b)
    if a.shape != b.shape or a.shape[0] != cov.d:
        raise ValueError(f"dimension mismatch: {a.shape}, {b.shape}, covariance {cov.d}")
    diff = a - b
    return float(diff @ cov.sigma_inv @ diff)


def default_regularization(points) -> float:
    pts = as_points(points)
    if pts.shape[0] < 2:
        return 0.0
    cov = np.atleast_2d(np.cov(pts, rowvar=False))
    return 1e-9 * float(np.trace(cov)) / pts.shape[1]


def fit_covariance(data, regularization: float | None = None) -> CovarianceModel:
    """Inverse of the sample covariance of ``data`` with a ridge on the diagonal.

    ``regularization=None`` uses ``1e-9 * trace(cov) / d``.  Raises
    :class:`SingularCovarianceError` when the regularized covariance is not
    positive definite.
    """
    pts = as_points(data)
    n, d = pts.shape
    if n < 2:
        raise ValueError("need at least 2 points to fit a covariance")
    if regularization is None:
        regularization = default_regularization(pts)
    if regularization < 0:
        raise ValueError("regularization must be >= 0")
    cov = np.atleast_2d(np.cov(pts, rowvar=False)) + regularization * np.eye(d)
    eig = np.linalg.eigvalsh(cov)
    if eig[0] <= SINGULAR_RTOL * max(eig[-1], 0.0) or eig[0] <= 0.0:
        raise SingularCovarianceError(
            f"covariance is singular (eigenvalues {eig[0]:.3g} .. {eig[-1]:.3g}); "
            "increase the regularization")
    inv = np.linalg.inv(cov)
    return CovarianceModel(0.5 * (inv + inv.T), float(regularization))


def cross_sq_distances(points, centers, metric: CovarianceModel | None = None) -> np.ndarray:
    """Squared distances as a ``(c, n)`` array: entry ``[j, i]`` is point i to center j."""
    pts = as_points(points)
    cen = np.atleast_2d(np.asarray(centers, dtype=float))
    if cen.shape[1] != pts.shape[1]:
        raise ValueError(f"dimension mismatch: points d={pts.shape[1]}, centers d={cen.shape[1]}")
    if metric is not None and metric.d != pts.shape[1]:
        raise ValueError(f"covariance is {metric.d}-d, points are {pts.shape[1]}-d")
    out = np.empty((cen.shape[0], pts.shape[0]))
    for j, center in enumerate(cen):
        diff = pts - center
        if metric is None:
            out[j] = np.einsum("ij,ij->i", diff, diff)
        else:
            out[j] = np.einsum("ij,jk,ik->i", diff, metric.sigma_inv, diff)
    np.maximum(out, 0.0, out=out)
    return out


def pairwise_matrix(data, kind: str = "euclidean",
                    cov: CovarianceModel | None = None) -> np.ndarray:
    """Symmetric ``(n, n)`` matrix of (non-squared) point distances, zero diagonal."""
    pts = as_points(data)
    if kind == "euclidean":
        if pts.shape[0] == 1:
            return np.zeros((1, 1))
        return squareform(pdist(pts, "euclidean"))
    if kind == "mahalanobis":
        if cov is None:
            raise ValueError("mahalanobis distances need a covariance model")
        if cov.d != pts.shape[1]:
            raise ValueError(f"covariance is {cov.d}-d, points are {pts.shape[1]}-d")
        if pts.shape[0] == 1:
            return np.zeros((1, 1))
        return squareform(pdist(pts, "mahalanobis", VI=cov.sigma_inv))
    raise ValueError(f"unknown distance kind {kind!r}")


def check_dissimilarity(dmat) -> np.ndarray:
    """Validate a dissimilarity matrix: square, finite, non-negative, symmetric, zero diagonal."""
    d = np.asarray(dmat, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise ValueError(f"dissimilarity matrix must be square and non-empty, got {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("dissimilarity matrix has non-finite entries")
    if d.min() < 0:
        raise ValueError("dissimilarity matrix has negative entries")
    if not np.array_equal(d, d.T):
        raise ValueError("dissimilarity matrix is not symmetric")
    if np.any(np.diag(d) != 0):
        raise ValueError("dissimilarity matrix needs a zero diagonal")
    return d


def metric_for(data, distance_kind: str, regularization: float | None = None):
    """Resolve a distance kind into the metric object used by the fitters."""
    if distance_kind == "euclidean":
        return None
    if distance_kind == "mahalanobis":
        return fit_covariance(data, regularization)
    raise ValueError(f"unknown distance kind {distance_kind!r}")

