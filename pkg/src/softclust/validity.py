"""Cluster validity indices (partition coefficient, Dunn, Davies-Bouldin) and c-sweeps."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .core import (ClusteringResult, RunConfig, as_centroids, as_memberships, as_points,
                   derive_seed)
from .distance import cross_sq_distances, metric_for, pairwise_matrix
from .fcm import fcm_fit
from .pcm import pcm_fit

COINCIDENT_CENTROIDS = 1e-12


class IndexUndefinedError(ValueError):
    """The index cannot be computed for this partition."""


def partition_coefficient(u) -> float:
    """Mean over points of the summed squared memberships.

    In ``[1/c, 1]`` for fuzzy partitions.  Typicality matrices are accepted as
    is, in which case the value can exceed 1.
    """
    u = as_memberships(u)
    return float(np.sum(u * u) / u.shape[1])


def _groups(labels):
    labels = np.asarray(labels, dtype=np.intp)
    ids = np.unique(labels)
    return labels, ids


def _point_distances(points, metric):
    if metric is None:
        return pairwise_matrix(points)
    return pairwise_matrix(points, "mahalanobis", metric)


def dunn_index(data, labels, metric=None) -> float:
    """Smallest single-linkage gap between clusters over the largest cluster diameter.

    Returns ``inf`` when every cluster has zero diameter (all singletons).
    """
    x = as_points(data)
    labels, ids = _groups(labels)
    if labels.shape != (x.shape[0],):
        raise ValueError("one label per point required")
    if ids.size < 2:
        raise IndexUndefinedError("Dunn index needs at least two non-empty clusters")
    dist = _point_distances(x, metric)
    same = labels[:, None] == labels[None, :]
    diameter = dist[same].max()
    separation = dist[~same].min()
    if diameter == 0.0:
        return math.inf
    return float(separation / diameter)


def davies_bouldin(data, labels, centroids, scatter_q: float = 2.0, metric=None) -> float:
    """Davies-Bouldin index with a power-mean scatter of order ``scatter_q``.

    Cluster ``j`` is the set of points labelled ``j`` and ``centroids[j]`` its
    representative; every centroid must own at least one point.
    """
    x = as_points(data)
    v = as_centroids(centroids)
    labels = np.asarray(labels, dtype=np.intp)
    c = v.shape[0]
    if c < 2:
        raise IndexUndefinedError("Davies-Bouldin needs at least two clusters")
    if labels.shape != (x.shape[0],):
        raise ValueError("one label per point required")
    counts = np.bincount(labels, minlength=c)
    if counts.shape[0] > c or np.any(counts == 0):
        raise IndexUndefinedError(
            f"empty cluster(s) {np.flatnonzero(counts[:c] == 0).tolist()}")

    dist = np.sqrt(cross_sq_distances(x, v, metric))
    scatter = np.array([
        np.mean(dist[j, labels == j] ** scatter_q) ** (1.0 / scatter_q) for j in range(c)])
    sep = np.sqrt(cross_sq_distances(v, v, metric))
    off = ~np.eye(c, dtype=bool)
    if np.any(sep[off] <= COINCIDENT_CENTROIDS):
        raise IndexUndefinedError("coincident centroids")
    ratio = np.where(off, (scatter[:, None] + scatter[None, :]) / np.where(off, sep, 1.0), -np.inf)
    return float(ratio.max(axis=1).mean())


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class ValidityRow:
    c: int
    pc: float | None
    di: float | None
    dbi: float | None
    algorithm: str
    seed: int
    flags: tuple[str, ...] = ()
    base_seed: int | None = None

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["flags"] = list(self.flags)
        return rec


@dataclass(frozen=True)
class ValidityReport:
    rows: tuple[ValidityRow, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = tuple(sorted(self.rows, key=lambda r: r.c))
        cs = [r.c for r in rows]
        if len(set(cs)) != len(cs):
            raise ValueError("duplicate c in report")
        object.__setattr__(self, "rows", rows)

    def best(self) -> dict:
        """c with max PC, max DI and min DBI; undefined entries are skipped, ties go to the smaller c."""
        out = {}
        for key in ("pc", "di", "dbi"):
            vals = [(getattr(r, key), r.c) for r in self.rows if getattr(r, key) is not None]
            if not vals:
                out[key] = None
            elif key == "dbi":
                out[key] = min(vals)[1]
            else:
                out[key] = max(vals, key=lambda t: (t[0], -t[1]))[1]
        return out

    def to_json(self) -> str:
        return json.dumps([r.as_record() for r in self.rows], indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["c", "pc", "di", "dbi", "flags"])
        for r in self.rows:
            w.writerow([r.c] + ["" if v is None else repr(v) for v in (r.pc, r.di, r.dbi)]
                       + [";".join(r.flags)])
        return buf.getvalue()

    def format_table(self) -> str:
        best = self.best()
        lines = [f"{'c':>3}  {'PC':>12}  {'DI':>12}  {'DBI':>12}  flags"]
        for r in self.rows:
            cells = []
            for key in ("pc", "di", "dbi"):
                v = getattr(r, key)
                s = "-" if v is None else f"{v:.4g}"
                cells.append(f"{s + ('*' if best[key] == r.c else ' '):>12}")
            lines.append(f"{r.c:>3}  " + "  ".join(cells) + "  " + ",".join(r.flags))
        lines.append("* best: max PC, max DI, min DBI")
        return "\n".join(lines)


def report_from_json(text: str) -> ValidityReport:
    return ValidityReport(tuple(
        ValidityRow(r["c"], r["pc"], r["di"], r["dbi"], r["algorithm"], r["seed"], tuple(r["flags"]),
                    r.get("base_seed"))
        for r in json.loads(text)))


def evaluate(data, result: ClusteringResult, metric=None, scatter_q: float = 2.0,
             seed: int | None = None) -> ValidityRow:
    """PC on the soft matrix, DI and DBI on the result's labels and centroids.

    Indices that cannot be computed are ``None`` with a flag explaining why.
    """
    flags = []
    pc = partition_coefficient(result.memberships)
    if result.memberships.kind == "possibilistic":
        flags.append("unnormalized")
    try:
        di = dunn_index(data, result.labels, metric)
        if math.isinf(di):
            flags.append("di_degenerate")
            di = None
    except IndexUndefinedError:
        di = None
        flags.append("di_undefined")
    try:
        dbi = davies_bouldin(data, result.labels, result.centroids, scatter_q, metric)
    except IndexUndefinedError:
        dbi = None
        flags.append("dbi_undefined")
    if result.coincident_centroids:
        flags.append("coincident_centroids")
    if not result.converged:
        flags.append("not_converged")
    if seed is None:
        seed = result.config.seed if result.config is not None else 0
    return ValidityRow(result.centroids.c, pc, di, dbi, result.algorithm, int(seed), tuple(flags))


def fit(data, algorithm: str, config: RunConfig, metric=None, K: float = 1.0) -> ClusteringResult:
    if algorithm == "fcm":
        return fcm_fit(data, config, metric)
    if algorithm == "pcm":
        return pcm_fit(data, config, K, metric)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def sweep_c(data, algorithm: str, c_range, config: RunConfig, K: float = 1.0,
            scatter_q: float = 2.0, on_result=None) -> ValidityReport:
    """Fit ``algorithm`` for every c in the inclusive ``c_range`` and score each fit.

    Each c gets its own seed ``derive_seed(config.seed, c)``.  A fit that
    raises is recorded as a row with ``failed`` set; the sweep carries on.
    ``on_result(c, result_or_exception)`` is called after every fit.
    """
    x = as_points(data)
    c_lo, c_hi = c_range
    if not 2 <= c_lo <= c_hi <= x.shape[0]:
        raise ValueError(f"need 2 <= c_min <= c_max <= n, got {c_lo}..{c_hi} with n={x.shape[0]}")
    metric = metric_for(x, config.distance_kind)
    rows = []
    for c in range(c_lo, c_hi + 1):
        cfg = replace(config, c=c, seed=derive_seed(config.seed, c))
        try:
            result = fit(x, algorithm, cfg, metric, K)
        except (ArithmeticError, RuntimeError, ValueError) as exc:
            rows.append(ValidityRow(c, None, None, None, algorithm, cfg.seed,
                                    ("failed", type(exc).__name__), config.seed))
            if on_result is not None:
                on_result(c, exc)
            continue
        if on_result is not None:
            on_result(c, result)
        row = evaluate(x, result, metric, scatter_q, cfg.seed)
        rows.append(replace(row, base_seed=config.seed))
    return ValidityReport(tuple(rows), {"algorithm": algorithm, "base_seed": config.seed})
