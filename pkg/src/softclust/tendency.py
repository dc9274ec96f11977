"""Visual assessment of cluster tendency (VAT / iVAT) and PGM export."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distance import check_dissimilarity


@dataclass(frozen=True)
class VatResult:
    ordering: np.ndarray
    reordered: np.ndarray


def vat_order(dmat) -> VatResult:
    """Prim-order the objects of a dissimilarity matrix.

    Start from the row of the largest entry (lexicographically first when
    several entries tie), then repeatedly append the unvisited object closest
    to the visited set.  Ties go to the smallest object index.
    """
    d = check_dissimilarity(dmat)
    n = d.shape[0]
    order = np.empty(n, dtype=np.intp)
    order[0] = np.argmax(d) // n
    visited = np.zeros(n, dtype=bool)
    visited[order[0]] = True
    reach = d[order[0]].copy()
    for k in range(1, n):
        cand = np.where(visited, np.inf, reach)
        nxt = int(np.argmin(cand))
        order[k] = nxt
        visited[nxt] = True
        np.minimum(reach, d[nxt], out=reach)
    reordered = d[np.ix_(order, order)]
    order.setflags(write=False)
    reordered.setflags(write=False)
    return VatResult(order, reordered)


def _minimax_in_vat_order(r: np.ndarray) -> np.ndarray:
    # r is VAT-ordered: each object's nearest predecessor is its MST parent,
    # so its min-max distance to every earlier object goes through that parent.
    n = r.shape[0]
    out = np.zeros_like(r)
    for k in range(1, n):
        j = int(np.argmin(r[k, :k]))
        out[k, :k] = np.maximum(r[k, j], out[j, :k])
        out[:k, k] = out[k, :k]
    return out


def ivat_transform(dmat) -> np.ndarray:
    """Min-max path distances, returned in the input's object order.

    Entry ``[i, j]`` is the smallest achievable largest hop over all paths
    from i to j in the complete graph weighted by ``dmat``.
    """
    d = check_dissimilarity(dmat)
    vat = vat_order(d)
    inv = np.argsort(vat.ordering)
    out = _minimax_in_vat_order(vat.reordered)[np.ix_(inv, inv)]
    return out


def ivat(dmat) -> VatResult:
    """VAT ordering of ``dmat`` with the min-max transformed matrix in that order."""
    d = check_dissimilarity(dmat)
    vat = vat_order(d)
    reordered = _minimax_in_vat_order(vat.reordered)
    reordered.setflags(write=False)
    return VatResult(vat.ordering, reordered)


def to_gray(mat) -> np.ndarray:
    """Linear 8-bit scaling by the global max; an all-zero matrix maps to black."""
    m = np.asarray(mat, dtype=float)
    top = m.max() if m.size else 0.0
    if top <= 0:
        return np.zeros(m.shape, dtype=np.uint8)
    # round half up
    return np.floor(255.0 * m / top + 0.5).astype(np.uint8)


def render_pgm(reordered, path) -> None:
    """Write ``reordered`` as a binary (P5) 8-bit PGM: black = 0, white = max."""
    pix = to_gray(reordered)
    h, w = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pix.tobytes(order="C"))


def read_pgm(path) -> np.ndarray:
    """Read back a P5 file written by :func:`render_pgm`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    parts = raw.split(b"\n", 3)
    if parts[0] != b"P5" or len(parts) < 4:
        raise ValueError(f"{path}: not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    if int(parts[2]) != 255:
        raise ValueError(f"{path}: only 8-bit PGM supported")
    return np.frombuffer(parts[3], dtype=np.uint8, count=w * h).reshape(h, w)
