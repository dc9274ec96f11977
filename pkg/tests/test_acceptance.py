"""Acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (printed immediately and again in
the terminal summary) and then asserts, so a failing criterion stays red.
"""
import time

import numpy as np

from oracles import dbi_bruteforce, dunn_bruteforce, pc_bruteforce, minimax_bruteforce
from softclust.cli import main
from softclust.core import CentroidSet, ClusteringResult, MembershipMatrix, RunConfig
from softclust.datagen import ClusterSpec, Scenario, add_outlier, generate
from softclust.distance import pairwise_matrix
from softclust.fcm import fcm_fit, update_memberships
from softclust.pcm import pcm_fit
from softclust.tendency import ivat_transform, vat_order
from softclust.validity import (davies_bouldin, dunn_index, evaluate, partition_coefficient,
                                sweep_c)

RESULTS = {}


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    print(f"\nAC{key}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


# ---------------------------------------------------------------- 1

def test_ac1_fcm_cost_monotone():
    t0 = time.perf_counter()
    bad = []
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(20, 201))
        c = int(rng.integers(2, 6))
        centers = rng.uniform(-10, 10, size=(c, 2))
        x = centers[rng.integers(0, c, size=n)] + rng.normal(size=(n, 2))
        tr = np.array(fcm_fit(x, RunConfig(c=c, seed=seed)).cost_trace)
        if np.any(np.diff(tr) > 1e-9):
            bad.append(seed)
    dt = time.perf_counter() - t0
    record("1 fcm cost monotonicity", not bad and dt < 10,
           f"non-monotone seeds={bad}, runtime {dt:.2f}s (< 10s)")


# ---------------------------------------------------------------- 2

def test_ac2_fcm_memberships():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 5))
        c = int(rng.integers(2, 7))
        pt = rng.normal(size=(1, d)) * rng.uniform(0.1, 10)
        cen = rng.normal(size=(c, d)) * rng.uniform(0.1, 10)
        q = float(rng.uniform(1.1, 4.0))
        u = update_memberships(pt, cen, q).u
        worst = max(worst, abs(u.sum() - 1.0))
    sums_ok = worst <= 1e-9

    # stated example: x = 1, centroids (0, 3), q = 2, expected u = (0.9, 0.1)
    got = update_memberships([[1.0]], [[0.0], [3.0]], 2.0).u[:, 0]
    hand_ok = np.allclose(got, [0.9, 0.1], rtol=0, atol=1e-12)
    record("2 fcm membership correctness", sums_ok and hand_ok,
           f"max |column sum - 1| = {worst:.1e} (<= 1e-9); "
           f"x=1, theta=(0,3): u={np.round(got, 12).tolist()} vs expected [0.9, 0.1]")


# ---------------------------------------------------------------- 3

BLOBS = Scenario("two_blobs", (ClusterSpec((0.0, 0.0), (1.0, 1.0), 100),
                               ClusterSpec((10.0, 0.0), (1.0, 1.0), 100)))


def _displacement(clean, noisy):
    # pair every clean centroid with its nearest noisy centroid
    d = np.linalg.norm(clean[:, None, :] - noisy[None, :, :], axis=2)
    return d.min(axis=1).mean()


def test_ac3_pcm_noise_robustness():
    t0 = time.perf_counter()
    wins = 0
    for seed in range(20):
        base = generate(BLOBS, seed)
        noisy = add_outlier(base, (50.0, 50.0))
        cfg = RunConfig(c=2, seed=seed)
        f_clean, f_noisy = fcm_fit(base.data, cfg), fcm_fit(noisy.data, cfg)
        p_clean, p_noisy = pcm_fit(base.data, cfg), pcm_fit(noisy.data, cfg)
        fd = _displacement(f_clean.centroids.theta, f_noisy.centroids.theta)
        pd = _displacement(p_clean.centroids.theta, p_noisy.centroids.theta)
        wins += fd > pd
    dt = time.perf_counter() - t0
    record("3 pcm noise robustness", wins >= 18 and dt < 20,
           f"fcm displaced more in {wins}/20 seeds (>= 18), runtime {dt:.2f}s (< 20s)")


# ---------------------------------------------------------------- 4

def test_ac4_validity_direction():
    t0 = time.perf_counter()
    truth = {"two_separate": 2, "three_close": 3, "four_clusters": 4}
    hits = {}
    min_pc_two = np.inf
    for name, k in truth.items():
        pc_hits = dbi_hits = 0
        for seed in range(20):
            ld = generate(name, seed)
            rep = sweep_c(ld.data, "fcm", (2, 6), RunConfig(c=2, seed=seed))
            best = rep.best()
            pc_hits += best["pc"] == k
            dbi_hits += best["dbi"] == k
            if name == "two_separate":
                min_pc_two = min(min_pc_two, next(r.pc for r in rep.rows if r.c == 2))
        hits[name] = (pc_hits, dbi_hits)
    ok = all(p >= 18 and d >= 18 for p, d in hits.values()) and min_pc_two > 0.85
    detail = ", ".join(f"{n}: PC {p}/20 DBI {d}/20" for n, (p, d) in hits.items())
    record("4 validity index direction", ok,
           f"{detail}; min PC at c=2 on two_separate {min_pc_two:.4f} (> 0.85); "
           f"{time.perf_counter() - t0:.1f}s")


# ---------------------------------------------------------------- 5

def test_ac5_index_oracles():
    di_err = dbi_err = pc_err = 0.0
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        n = int(rng.integers(4, 51))
        c = int(rng.integers(2, min(6, n) + 1))
        lab = np.concatenate([np.arange(c), rng.integers(0, c, size=n - c)])
        rng.shuffle(lab)
        x = rng.normal(size=(n, int(rng.integers(1, 4)))) * 2 + lab[:, None] * 3.0
        cen = np.array([x[lab == k].mean(axis=0) for k in range(c)])
        di_err = max(di_err, abs(dunn_index(x, lab) - dunn_bruteforce(x.tolist(), lab.tolist())))
        dbi_err = max(dbi_err, abs(davies_bouldin(x, lab, cen)
                                   - dbi_bruteforce(x.tolist(), lab.tolist(), cen.tolist(), 2.0)))
        raw = rng.random((c, n))
        u = raw / raw.sum(axis=0)
        pc_err = max(pc_err, abs(partition_coefficient(u) - pc_bruteforce(u.tolist())))
    di_ex = dunn_index([[0.0], [1.0], [10.0], [11.0]], [0, 0, 1, 1])
    dbi_ex = davies_bouldin([[-1.0], [1.0], [9.0], [11.0]], [0, 0, 1, 1], [[0.0], [10.0]])
    ok = di_err <= 1e-9 and dbi_err <= 1e-9 and pc_err <= 1e-12 and di_ex == 9.0 and dbi_ex == 0.2
    record("5 index oracles", ok,
           f"max err DI {di_err:.1e}, DBI {dbi_err:.1e} (<= 1e-9), PC {pc_err:.1e} (<= 1e-12); "
           f"DI example {di_ex}, DBI example {dbi_ex}")


# ---------------------------------------------------------------- 6

def test_ac6_vat():
    perm_ok = True
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 40))
        a = np.triu(rng.uniform(0, 10, size=(n, n)), 1)
        d = a + a.T
        res = vat_order(d)
        o = res.ordering
        same_multiset = np.array_equal(np.sort(res.reordered, axis=None), np.sort(d, axis=None))
        spots = rng.integers(0, n, size=(10, 2))
        spot_ok = all(res.reordered[i, j] == d[o[i], o[j]] for i, j in spots)
        perm_ok &= sorted(o.tolist()) == list(range(n)) and same_multiset and spot_ok
    hand = vat_order(pairwise_matrix(np.array([[0.0], [10.0], [1.0]]))).ordering.tolist()
    blocks = 0
    for seed in range(20):
        ld = generate("two_separate", seed)
        res = vat_order(pairwise_matrix(ld.data))
        lab = ld.truth[res.ordering]
        same = lab[:, None] == lab[None, :]
        blocks += res.reordered[same].max() < res.reordered[~same].min()
    record("6 vat correctness", perm_ok and hand == [0, 2, 1] and blocks == 20,
           f"permutation checks {'ok' if perm_ok else 'failed'} on 100 matrices; "
           f"hand ordering {hand}; block structure {blocks}/20")


# ---------------------------------------------------------------- 7

def test_ac7_ivat():
    worst = 0.0
    for seed in range(200):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        a = np.triu(rng.uniform(0.1, 10, size=(n, n)), 1)
        d = a + a.T
        worst = max(worst, float(np.abs(ivat_transform(d) - np.array(minimax_bruteforce(d.tolist())))
                                 .max(initial=0.0)))
    idem = True
    for seed in range(50):
        rng = np.random.default_rng(500 + seed)
        n = int(rng.integers(1, 51))
        t = ivat_transform(pairwise_matrix(rng.normal(size=(n, 2))))
        idem &= np.array_equal(ivat_transform(t), t)
    record("7 ivat oracle", worst <= 1e-12 and idem,
           f"max |ivat - path enumeration| {worst:.1e} over 200 cases (<= 1e-12); "
           f"idempotent on 50 cases n <= 50: {idem}")


# ---------------------------------------------------------------- 8

def test_ac8_pipeline_determinism(tmp_path):
    args = ["pipeline", "--scenario", "three_close", "--algorithm", "pcm", "--c-min", "2",
            "--c-max", "4", "--seed", "11"]
    codes = [main(args + ["--out", str(tmp_path / r)]) for r in ("a", "b")]
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    diff = [n for n in names if (tmp_path / "a" / n).read_bytes() != (tmp_path / "b" / n).read_bytes()]
    kinds = {n.rsplit(".", 1)[-1] for n in names}
    same_names = names == sorted(p.name for p in (tmp_path / "b").iterdir())
    ok = codes == [0, 0] and same_names and not diff and {"csv", "json", "pgm"} <= kinds
    record("8 pipeline determinism", ok,
           f"exit codes {codes}; {len(names)} artifacts compared; differing: {diff}")


# ---------------------------------------------------------------- 9

def test_ac9_possibilistic_pc():
    x = np.array([[0.0], [1.0], [10.0], [11.0]])
    u = MembershipMatrix([[0.95, 0.9, 0.6, 0.5], [0.5, 0.6, 0.9, 0.95]], "possibilistic")
    assert np.all(u.u.sum(axis=0) > 1)
    res = ClusteringResult(CentroidSet([[0.5], [10.5]]), u, [0, 0, 1, 1], [0.0], 5, True, "pcm")
    row = evaluate(x, res)
    record("9 possibilistic pc above one", row.pc > 1 and "unnormalized" in row.flags,
           f"PC={row.pc:.4f}, flags={list(row.flags)}")
