"""Shared value types, CSV ingestion and seeded randomness.

Layout conventions used across the package:

* points are rows: a dataset is an ``(n, d)`` array
* memberships / typicalities are ``(c, n)``: one row per cluster
* centroids are ``(c, d)``

Random streams come from numpy's ``PCG64`` bit generator (the default of
``numpy.random.default_rng``), seeded through ``SeedSequence``.  Streams for
sub-tasks (one per ``c`` in a sweep, say) are derived from ``(seed, index)``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

COLUMN_SUM_TOL = 1e-9
SEED_MAX = 2**64 - 1


class DataError(ValueError):
    """Malformed input data (ragged CSV rows, non-finite values, ...)."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """An ``(n, d)`` matrix of finite observations, one point per row."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError(f"dataset must be a non-empty 2-d array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DataError("dataset contains NaN or infinite values")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n


def as_points(data) -> np.ndarray:
    """Return the ``(n, d)`` float array behind ``data`` (Dataset or array-like)."""
    if isinstance(data, Dataset):
        return data.points
    return Dataset(data).points


@dataclass(frozen=True)
class MembershipMatrix:
    """``(c, n)`` soft assignment matrix.

    ``kind="fuzzy"`` requires every column to sum to one; ``kind="possibilistic"``
    only requires each column to have some positive entry.
    """

    u: np.ndarray
    kind: str = "fuzzy"

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 2:
            raise ValueError(f"membership matrix must be 2-d (c, n), got shape {u.shape}")
        if self.kind not in ("fuzzy", "possibilistic"):
            raise ValueError(f"unknown membership kind {self.kind!r}")
        if not np.all(np.isfinite(u)) or u.min() < 0.0 or u.max() > 1.0:
            raise ValueError("membership entries must lie in [0, 1]")
        if self.kind == "fuzzy":
            dev = np.abs(u.sum(axis=0) - 1.0).max()
            if dev > COLUMN_SUM_TOL:
                raise ValueError(f"fuzzy columns must sum to 1 (max deviation {dev:.3g})")
        elif not np.all(u.max(axis=0) > 0.0):
            raise ValueError("every possibilistic column needs a positive entry")
        object.__setattr__(self, "u", _frozen(u))

    @property
    def c(self) -> int:
        return self.u.shape[0]

    @property
    def n(self) -> int:
        return self.u.shape[1]


@dataclass(frozen=True)
class CentroidSet:
    """``(c, d)`` matrix of cluster representatives."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim == 1:
            theta = theta[:, None]
        if theta.ndim != 2 or theta.shape[0] < 1:
            raise ValueError(f"centroids must be a (c, d) array, got shape {theta.shape}")
        if not np.all(np.isfinite(theta)):
            raise ValueError("centroids must be finite")
        object.__setattr__(self, "theta", _frozen(theta))

    @property
    def c(self) -> int:
        return self.theta.shape[0]


def as_centroids(centroids) -> np.ndarray:
    if isinstance(centroids, CentroidSet):
        return centroids.theta
    return CentroidSet(centroids).theta


def as_memberships(u) -> np.ndarray:
    if isinstance(u, MembershipMatrix):
        return u.u
    return np.asarray(u, dtype=float)


DISTANCE_KINDS = ("euclidean", "mahalanobis")


@dataclass(frozen=True)
class RunConfig:
    c: int
    q: float = 2.0
    max_iter: int = 300
    tol: float = 1e-6
    seed: int = 0
    distance_kind: str = "euclidean"

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 2:
            raise ValueError(f"cluster count must be an integer >= 2, got {self.c}")
        if not self.q > 1.0:
            raise ValueError(f"fuzzifier q must be > 1, got {self.q}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        check_seed(self.seed)
        if self.distance_kind not in DISTANCE_KINDS:
            raise ValueError(f"distance_kind must be one of {DISTANCE_KINDS}")


@dataclass(frozen=True)
class ClusteringResult:
    centroids: CentroidSet
    memberships: MembershipMatrix
    labels: np.ndarray
    cost_trace: tuple[float, ...]
    iterations: int
    converged: bool
    algorithm: str = "fcm"
    config: RunConfig | None = None
    eta: np.ndarray | None = None
    coincident_centroids: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.intp)
        c = self.centroids.c
        if labels.shape != (self.memberships.n,):
            raise ValueError("one label per point required")
        if labels.size and (labels.min() < 0 or labels.max() >= c):
            raise ValueError("labels must lie in [0, c)")
        labels = labels.copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "cost_trace", tuple(float(v) for v in self.cost_trace))

    @property
    def final_cost(self) -> float:
        return self.cost_trace[-1] if self.cost_trace else float("nan")


# ---------------------------------------------------------------- CSV

def load_csv(path, has_header: bool = False) -> Dataset:
    """Read a comma-separated file of floats into a Dataset.

    Accepts LF or CRLF line endings and skips blank lines.  Errors name the
    1-based row (as counted in the file) and column.
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if lineno == 1 and has_header:
                continue
            if not rec or all(not f.strip() for f in rec):
                continue
            if width is None:
                width = len(rec)
            elif len(rec) != width:
                raise DataError(
                    f"{path}: row {lineno} has {len(rec)} fields, expected {width}")
            vals = []
            for col, field_ in enumerate(rec, start=1):
                try:
                    v = float(field_)
                except ValueError:
                    raise DataError(
                        f"{path}: row {lineno}, column {col}: cannot parse {field_!r}") from None
                if not np.isfinite(v):
                    raise DataError(
                        f"{path}: row {lineno}, column {col}: non-finite value {field_!r}")
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return Dataset(np.array(rows))


def write_csv(data, path, header: Sequence[str] | None = None) -> None:
    """Write points with ``repr`` precision so that ``load_csv`` round-trips exactly."""
    pts = as_points(data)
    with open(path, "w", newline="") as fh:
        if header is not None:
            fh.write(",".join(header) + "\n")
        for row in pts:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_labels(labels, path) -> None:
    Path(path).write_text("".join(f"{int(v)}\n" for v in labels))


def read_labels(path) -> np.ndarray:
    return np.array([int(s) for s in Path(path).read_text().split()], dtype=np.intp)


# ---------------------------------------------------------------- randomness

def check_seed(seed) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= int(seed) <= SEED_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def seeded_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for ``seed``; same seed, same stream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed))))


def derive_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit child seed for sub-task ``index`` of ``seed``."""
    ss = np.random.SeedSequence([check_seed(seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
