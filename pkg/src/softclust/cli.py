"""``softclust`` command line: gen, fit, vat, validate, pipeline.

Exit status: 0 success, 1 runtime or I/O failure, 2 usage/validation error.
``--seed`` falls back to ``$SOFTCLUST_SEED`` and then to 0.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from .core import RunConfig, check_seed, derive_seed, load_csv, write_csv
from .datagen import SCENARIOS, generate, save_labeled, truth_path_for
from .distance import metric_for, pairwise_matrix
from .tendency import ivat, render_pgm, vat_order
from .validity import ValidityReport, evaluate, fit, sweep_c

SEED_ENV = "SOFTCLUST_SEED"


class UsageError(Exception):
    pass


def _seed_type(text):
    try:
        return check_seed(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an unsigned 64-bit integer: {text!r}") from None


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
        return v
    return conv


def effective_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return check_seed(int(env))
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an unsigned 64-bit integer") from None


def _dump(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def _config(args, c) -> RunConfig:
    try:
        return RunConfig(c=c, q=args.q, max_iter=args.max_iter, tol=args.tol,
                         seed=effective_seed(args), distance_kind=args.metric)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def result_record(result, K=None) -> dict:
    cfg = result.config
    rec = {
        "algorithm": result.algorithm,
        "seed": cfg.seed,
        "config": asdict(cfg),
        "centroids": result.centroids.theta.tolist(),
        "labels": result.labels.tolist(),
        "memberships": result.memberships.u.T.tolist(),
        "membership_kind": result.memberships.kind,
        "iterations": result.iterations,
        "converged": result.converged,
        "final_cost": result.final_cost,
        "cost_trace": list(result.cost_trace),
    }
    if result.algorithm == "pcm":
        rec["K"] = K
        rec["eta"] = result.eta.tolist()
        rec["coincident_centroids"] = result.coincident_centroids
    return rec


def _load(path):
    return load_csv(path, has_header=False)


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    seed = effective_seed(args)
    labeled = generate(args.scenario, seed)
    truth = save_labeled(labeled, args.out, args.truth)
    sc = SCENARIOS[args.scenario]
    print(f"{args.scenario}: n={labeled.data.n} d={labeled.data.d} "
          f"clusters={sc.n_clusters} seed={seed} -> {args.out}, {truth}")
    return 0


def cmd_fit(args) -> int:
    data = _load(args.data)
    if not 2 <= args.c <= data.n:
        raise UsageError(f"--c must satisfy 2 <= c <= n (n={data.n}), got {args.c}")
    cfg = _config(args, args.c)
    result = fit(data, args.algorithm, cfg, K=args.K)
    _dump(result_record(result, args.K), args.out)
    print(f"{args.algorithm} c={cfg.c} seed={cfg.seed}: iterations={result.iterations} "
          f"converged={result.converged} cost={result.final_cost:.6g} -> {args.out}")
    return 0


def write_vat(dmat, out, use_ivat: bool) -> Path:
    """Write the (i)VAT image and its ordering sidecar; returns the sidecar path."""
    res = ivat(dmat) if use_ivat else vat_order(dmat)
    render_pgm(res.reordered, out)
    order_path = Path(out).with_suffix(".order.txt")
    order_path.write_text("".join(f"{i}\n" for i in res.ordering))
    return order_path


def _dissimilarity(data, metric_kind):
    if metric_kind == "mahalanobis" and data.n >= 2:
        return pairwise_matrix(data, "mahalanobis", metric_for(data, "mahalanobis"))
    return pairwise_matrix(data)


def cmd_vat(args) -> int:
    data = _load(args.data)
    order_path = write_vat(_dissimilarity(data, args.metric), args.out, args.ivat)
    print(f"{'iVAT' if args.ivat else 'VAT'} {data.n}x{data.n} -> {args.out} (order: {order_path})")
    return 0


def _report_paths(out):
    out = Path(out)
    return out.with_suffix(".json"), out.with_suffix(".csv")


def _write_report(report: ValidityReport, out):
    js, cs = _report_paths(out)
    js.write_text(report.to_json() + "\n")
    cs.write_text(report.to_csv())
    return js, cs


def cmd_validate(args) -> int:
    if args.c_min > args.c_max:
        raise UsageError(f"--c-min ({args.c_min}) exceeds --c-max ({args.c_max})")
    data = _load(args.data)
    if not 2 <= args.c_min or args.c_max > data.n:
        raise UsageError(f"c range must lie in [2, n={data.n}]")
    cfg = _config(args, args.c_min)
    report = sweep_c(data, args.algorithm, (args.c_min, args.c_max), cfg, K=args.K)
    js, cs = _write_report(report, args.out)
    print(f"{args.algorithm} sweep, seed={cfg.seed}")
    print(report.format_table())
    print(f"-> {js}, {cs}")
    return 0


def cmd_pipeline(args) -> int:
    if args.c_min > args.c_max or args.c_min < 2:
        raise UsageError(f"bad c range {args.c_min}..{args.c_max}")
    seed = effective_seed(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = []
    manifest = {
        "scenario": args.scenario, "algorithm": args.algorithm, "seed": seed,
        "c_range": [args.c_min, args.c_max], "q": args.q, "metric": args.metric,
        "K": args.K, "tol": args.tol, "max_iter": args.max_iter,
        "status": "running", "artifacts": artifacts,
    }

    def add(path, kind, **params):
        artifacts.append({"path": Path(path).name, "kind": kind, "params": params})

    try:
        labeled = generate(args.scenario, seed)
        data_path = out / "data.csv"
        truth = save_labeled(labeled, data_path)
        add(data_path, "data", scenario=args.scenario, seed=seed, n=labeled.data.n)
        add(truth, "truth", scenario=args.scenario, seed=seed)
        data = labeled.data
        if args.c_max > data.n:
            raise UsageError(f"c_max={args.c_max} exceeds n={data.n}")

        dmat = _dissimilarity(data, args.metric)
        for name, flag in (("vat.pgm", False), ("ivat.pgm", True)):
            order = write_vat(dmat, out / name, flag)
            add(out / name, "image", transform="ivat" if flag else "vat", metric=args.metric)
            add(order, "ordering", image=name)

        def save_fit(c, res):
            path = out / f"fit_{args.algorithm}_c{c}.json"
            if isinstance(res, Exception):
                _dump({"algorithm": args.algorithm, "c": c, "seed": derive_seed(seed, c),
                       "failed": True, "error": f"{type(res).__name__}: {res}"}, path)
            else:
                _dump(result_record(res, args.K), path)
            add(path, "fit", algorithm=args.algorithm, c=c, seed=derive_seed(seed, c),
                failed=isinstance(res, Exception))

        cfg = replace(_config(args, args.c_min), seed=seed)
        report = sweep_c(data, args.algorithm, (args.c_min, args.c_max), cfg, K=args.K,
                         on_result=save_fit)
        js, cs = _write_report(report, out / "report")
        add(js, "report", format="json")
        add(cs, "report", format="csv")
        manifest["status"] = "complete"
        print(report.format_table())
    except BaseException as exc:
        manifest["status"] = "aborted"
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        _dump(manifest, out / "manifest.json")
    print(f"pipeline {args.scenario}/{args.algorithm} seed={seed}: "
          f"{len(artifacts)} artifacts -> {out / 'manifest.json'}")
    return 0


# ---------------------------------------------------------------- parser

def _fit_flags(p, c=True):
    p.add_argument("--algorithm", choices=("fcm", "pcm"), default="fcm")
    p.add_argument("--q", type=float, default=2.0, help="fuzzifier, > 1 (default 2)")
    p.add_argument("--metric", choices=("euclidean", "mahalanobis"), default="euclidean")
    p.add_argument("--K", type=_positive(float), default=1.0, help="PCM eta scale (default 1)")
    p.add_argument("--tol", type=_positive(float), default=1e-6)
    p.add_argument("--max-iter", type=_positive(int), default=300)
    if c:
        p.add_argument("--c", type=int, required=True)
    else:
        p.add_argument("--c-min", type=int, default=2)
        p.add_argument("--c-max", type=int, default=6)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="softclust", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--seed", type=_seed_type, default=None,
                       help=f"random seed (default ${SEED_ENV} or 0)")
        return p

    p = add("gen", "generate a synthetic scenario")
    p.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    p.add_argument("--out", required=True, help="data CSV path")
    p.add_argument("--truth", help="truth label path (default <out stem>.truth.csv)")
    p.set_defaults(func=cmd_gen)

    p = add("fit", "run FCM or PCM on a CSV dataset")
    p.add_argument("--data", required=True)
    _fit_flags(p)
    p.add_argument("--out", required=True, help="result JSON path")
    p.set_defaults(func=cmd_fit)

    p = add("vat", "write a VAT (or iVAT) image of a CSV dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--ivat", action="store_true")
    p.add_argument("--metric", choices=("euclidean", "mahalanobis"), default="euclidean")
    p.add_argument("--out", required=True, help="PGM path")
    p.set_defaults(func=cmd_vat)

    p = add("validate", "sweep c and report PC / DI / DBI")
    p.add_argument("--data", required=True)
    _fit_flags(p, c=False)
    p.add_argument("--out", required=True, help="report path stem (.json and .csv written)")
    p.set_defaults(func=cmd_validate)

    p = add("pipeline", "gen -> vat/ivat -> fit each c -> validate")
    p.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    _fit_flags(p, c=False)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"softclust {args.command}: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"softclust {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
