"""Synthetic Gaussian-blob scenarios with ground-truth labels.

Scenario parameters live in an INI file (``scenarios.ini`` ships with the
package); :func:`load_scenarios` reads that or any file in the same format.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .core import Dataset, as_points, read_labels, seeded_rng, write_csv, write_labels, load_csv

NOISE_LABEL = -1


@dataclass(frozen=True)
class ClusterSpec:
    center: tuple[float, ...]
    spread: tuple[float, ...]
    count: int
    rotation: float = 0.0  # degrees, 2-d only

    def __post_init__(self):
        if len(self.center) != len(self.spread):
            raise ValueError("center and spread must have the same dimension")
        if self.count < 1 or min(self.spread) <= 0:
            raise ValueError("cluster counts and spreads must be positive")
        if self.rotation and len(self.center) != 2:
            raise ValueError("rotation is only defined for 2-d clusters")


@dataclass(frozen=True)
class Scenario:
    name: str
    clusters: tuple[ClusterSpec, ...]
    noise_count: int = 0
    noise_box: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self):
        if not self.clusters:
            raise ValueError(f"scenario {self.name!r} has no clusters")
        dims = {len(cl.center) for cl in self.clusters}
        if len(dims) != 1:
            raise ValueError(f"scenario {self.name!r} mixes dimensions {sorted(dims)}")
        if self.noise_count < 0:
            raise ValueError("noise_count must be >= 0")
        if self.noise_count and self.noise_box is None:
            raise ValueError("noise points need a noise_box")

    @property
    def d(self) -> int:
        return len(self.clusters[0].center)

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)


@dataclass(frozen=True)
class LabeledDataset:
    data: Dataset
    truth: np.ndarray

    def __post_init__(self):
        truth = np.asarray(self.truth, dtype=np.intp)
        if truth.shape != (self.data.n,):
            raise ValueError("need one truth label per point")
        truth = truth.copy()
        truth.setflags(write=False)
        object.__setattr__(self, "truth", truth)

    @property
    def points(self) -> np.ndarray:
        return self.data.points


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(",", " ").split())


def load_scenarios(path=None) -> dict[str, Scenario]:
    cp = configparser.ConfigParser()
    if path is None:
        cp.read_string(resources.files("softclust").joinpath("scenarios.ini").read_text())
    else:
        with open(path) as fh:
            cp.read_file(fh)
    out = {}
    for name in cp.sections():
        if "/" in name:
            continue
        sec = cp[name]
        members = sorted((s for s in cp.sections() if s.startswith(name + "/")),
                         key=lambda s: int(s.split("/", 1)[1]))
        clusters = tuple(
            ClusterSpec(center=_floats(cp[s]["center"]), spread=_floats(cp[s]["spread"]),
                        count=cp[s].getint("count"), rotation=cp[s].getfloat("rotation", 0.0))
            for s in members)
        box = None
        if "noise_box" in sec:
            vals = _floats(sec["noise_box"])
            half = len(vals) // 2
            box = (vals[:half], vals[half:])
        out[name] = Scenario(name, clusters, sec.getint("noise_count", 0), box)
    return out


SCENARIOS = load_scenarios()


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise KeyError(
            f"unknown scenario {name!r}; choose from {', '.join(sorted(SCENARIOS))}") from None


def _rotation(deg: float) -> np.ndarray:
    t = np.deg2rad(deg)
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def generate(scenario: Scenario | str, seed: int = 0) -> LabeledDataset:
    """Draw every cluster (in order) and then the uniform noise from one seeded stream."""
    if isinstance(scenario, str):
        scenario = get_scenario(scenario)
    rng = seeded_rng(seed)
    parts, truth = [], []
    for k, cl in enumerate(scenario.clusters):
        z = rng.standard_normal((cl.count, len(cl.center))) * np.asarray(cl.spread)
        if cl.rotation:
            z = z @ _rotation(cl.rotation).T
        parts.append(z + np.asarray(cl.center))
        truth.append(np.full(cl.count, k))
    if scenario.noise_count:
        lo, hi = (np.asarray(b, dtype=float) for b in scenario.noise_box)
        parts.append(rng.uniform(lo, hi, size=(scenario.noise_count, scenario.d)))
        truth.append(np.full(scenario.noise_count, NOISE_LABEL))
    return LabeledDataset(Dataset(np.vstack(parts)), np.concatenate(truth))


def add_outlier(labeled: LabeledDataset, position) -> LabeledDataset:
    pos = np.asarray(position, dtype=float).reshape(1, -1)
    pts = as_points(labeled.data)
    if pos.shape[1] != pts.shape[1]:
        raise ValueError(f"outlier has {pos.shape[1]} coordinates, data has {pts.shape[1]}")
    return LabeledDataset(Dataset(np.vstack([pts, pos])),
                          np.append(labeled.truth, NOISE_LABEL))


def truth_path_for(data_path) -> Path:
    p = Path(data_path)
    return p.with_name(p.stem + ".truth.csv")


def save_labeled(labeled: LabeledDataset, data_path, truth_path=None) -> Path:
    """Write the points CSV and the sidecar truth-label file; returns the truth path."""
    truth_path = truth_path_for(data_path) if truth_path is None else Path(truth_path)
    write_csv(labeled.data, data_path)
    write_labels(labeled.truth, truth_path)
    return truth_path


def load_labeled(data_path, truth_path=None) -> LabeledDataset:
    truth_path = truth_path_for(data_path) if truth_path is None else truth_path
    return LabeledDataset(load_csv(data_path), read_labels(truth_path))
