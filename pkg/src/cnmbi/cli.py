"""Command-line interface: ``cnmbi {estimate,trials,boundary,generate,bench}``.

Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 usage / I-O / parse errors, 2 degenerate data.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path


from . import __version__
from ._backend import BACKEND
from .boundary import boundary_degree, core_subset, removal_order
from .datasets import (
    NORMALIZATIONS,
    SCENARIO_LEVELS,
    generate_blobs,
    generate_scenario,
    load_csv,
    save_csv,
)
from .density import build_distance_index
from .errors import ConfigError, DataError, DegenerateDataError
from .sweep import SCHEMA_VERSION, SweepConfig, estimate, run_trials

log = logging.getLogger("cnmbi")


def _fingerprint(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_manifest(args, config: dict, outputs: list, timings: dict) -> None:
    if not outputs:
        return
    path = Path(args.manifest) if getattr(args, "manifest", None) else Path(str(outputs[0]) + ".manifest.json")
    doc = {
        "subcommand": args.command,
        "config": config,
        "input_sha256": _fingerprint(args.input) if getattr(args, "input", None) else None,
        "outputs": [str(p) for p in outputs] + [str(path)],
        "timings": timings,
        "backend": BACKEND,
        "version": __version__,
    }
    path.write_text(_dump(doc))


def _load(args):
    label = args.label_col
    if label is not None and label.lstrip("-").isdigit():
        label = int(label)
    return load_csv(args.input, label_column=label, normalize=args.normalize)


def _sweep_config(args) -> SweepConfig:
    k_max = "auto" if args.k_max in (None, "auto") else int(args.k_max)
    if k_max != "auto" and args.k_min > k_max:
        raise ConfigError(f"invalid k range: --k-min {args.k_min} > --k-max {k_max}")
    return SweepConfig(
        k_min=args.k_min,
        k_max=k_max,
        lam=args.lam,
        dc_percentile=args.dc_percentile,
        restarts=args.restarts,
        max_iters=args.max_iters,
        seed=args.seed,
        filtering_enabled=not args.no_filter,
        mean_vs_mean_mode=args.mean_vs_mean,
        threads=args.threads,
    )


def _dataset_doc(data) -> dict:
    return {"name": data.name, "n": data.n, "d": data.d, "true_k": data.true_k}


# --------------------------------------------------------------------------
# subcommands


def cmd_estimate(args) -> int:
    data = _load(args)
    config = _sweep_config(args)
    report = estimate(data, config)
    doc = report.to_dict()
    doc["dataset"] = _dataset_doc(data)
    outputs = []
    if args.out:
        Path(args.out).write_text(_dump(doc))
        outputs.append(args.out)
    if args.emit_curve:
        Path(args.emit_curve).write_text(report.curve_csv())
        outputs.append(args.emit_curve)
    _write_manifest(args, config.to_dict(), outputs, report.timings)
    for k, reason in report.skipped:
        log.warning("skipped k=%d: %s", k, reason)
    print(f"K* = {report.k_star}")
    return 0


def cmd_trials(args) -> int:
    data = _load(args)
    config = _sweep_config(args)
    t0 = time.perf_counter()
    res = run_trials(data, config, args.trials)
    timings = {"total_s": time.perf_counter() - t0}
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "trials": args.trials,
        **res.to_dict(),
        "dataset": _dataset_doc(data),
        "timings": timings,
    }
    outputs = []
    if args.out:
        Path(args.out).write_text(_dump(doc))
        outputs.append(args.out)
    _write_manifest(args, config.to_dict(), outputs, timings)
    print(f"NC = {res.nc}")
    print("ACC = unavailable" if res.acc is None else f"ACC = {res.acc:g}")
    return 0


def cmd_boundary(args) -> int:
    data = _load(args)
    t0 = time.perf_counter()
    index = build_distance_index(data, args.dc_percentile)
    phi, counts = boundary_degree(data, index)
    _, profile = core_subset(data, phi, args.lam, counts, index.dc)
    timings = {"total_s": time.perf_counter() - t0}
    ranking = removal_order(phi, counts)

    rows = ["original_index,phi,neighbor_count,removed"] + [
        f"{i},{float(phi[i])!r},{int(counts[i])},{int(not profile.core_mask[i])}" for i in range(data.n)
    ]
    outputs = []
    if args.out:
        Path(args.out).write_text("\n".join(rows) + "\n")
        outputs.append(args.out)
    if args.top is not None:
        if args.top < 0:
            raise ConfigError("--top must be non-negative")
        print("original_index,phi")
        for i in ranking[: args.top]:
            print(f"{int(i)},{float(phi[i])!r}")
    elif not args.out:
        print("\n".join(rows))
    config = {"dc_percentile": args.dc_percentile, "lambda": args.lam, "dc": index.dc}
    _write_manifest(args, config, outputs, timings)
    return 0


def cmd_generate(args) -> int:
    if args.kind == "blobs":
        data = generate_blobs(args.k, args.per_cluster, args.dim, args.spread, args.separation, args.seed)
        config = {"k": args.k, "per_cluster": args.per_cluster, "dim": args.dim,
                  "spread": args.spread, "separation": args.separation, "seed": args.seed}
    else:
        if not args.family or args.level is None:
            raise ConfigError("scenario generation needs --family and --level")
        data = generate_scenario(args.family, args.level, args.seed)
        config = {"family": args.family, "level": args.level, "seed": args.seed}
    if args.out:
        save_csv(data, args.out)
        _write_manifest(args, config, [args.out], {})
        log.info("wrote %d rows to %s", data.n, args.out)
    else:
        save_csv(data, sys.stdout)
    return 0


def bench_matrix(families=None):
    families = families or ["noise", "density", "count"]
    return [(f, lvl) for f in families for lvl in SCENARIO_LEVELS[f]]


def run_bench(trials: int = 10, seed: int = 0, families=None, config: SweepConfig = SweepConfig()) -> dict:
    """Run every scenario of the robustness matrix and collect NC/ACC per row."""
    rows = []
    t0 = time.perf_counter()
    for family, level in bench_matrix(families):
        data = generate_scenario(family, level, seed)
        t = time.perf_counter()
        res = run_trials(data, replace(config, seed=seed), trials)
        log.info("%s-%d: NC=%d ACC=%.2f (%.1fs)", family, level, res.nc, res.acc, time.perf_counter() - t)
        rows.append({
            "family": family,
            "level": level,
            "n": data.n,
            "true_k": data.true_k,
            "nc": res.nc,
            "acc": res.acc,
            "k_stars": res.k_stars,
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "trials": trials,
        "seed": seed,
        "config": config.to_dict(),
        "rows": rows,
        "timings": {"total_s": time.perf_counter() - t0},
    }


def format_bench_table(doc: dict) -> str:
    lines = [f"{'scenario':<12} {'n':>5} {'true':>5} {'NC':>4} {'ACC':>5}"]
    for r in doc["rows"]:
        lines.append(f"{r['family'] + '-' + str(r['level']):<12} {r['n']:>5} {r['true_k']:>5} {r['nc']:>4} {r['acc']:>5.2f}")
    return "\n".join(lines)


def cmd_bench(args) -> int:
    config = SweepConfig(restarts=args.restarts, threads=args.threads)
    doc = run_bench(args.trials, args.seed, args.families, config)
    print(format_bench_table(doc))
    outputs = []
    if args.out:
        Path(args.out).write_text(_dump(doc))
        outputs.append(args.out)
    _write_manifest(args, doc["config"], outputs, doc["timings"])
    return 0


# --------------------------------------------------------------------------
# parser


def _add_input(p):
    p.add_argument("--input", required=True, help="CSV file of numeric features")
    p.add_argument("--label-col", default=None, help="label column name or zero-based index")
    p.add_argument("--normalize", choices=NORMALIZATIONS, default="none")


def _add_sweep(p):
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", default="auto", help="integer or 'auto' (floor(sqrt(n)))")
    p.add_argument("--lambda", dest="lam", type=float, default=0.10, help="share of boundary points removed")
    p.add_argument("--dc-percentile", type=float, default=0.02)
    p.add_argument("--no-filter", action="store_true", help="skip boundary filtering")
    p.add_argument("--mean-vs-mean", action="store_true", help="match two independent K-means runs instead")
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnmbi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="store_true", help="per-k progress on stderr")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: $CNMBI_THREADS or CPU count)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate the number of clusters")
    _add_input(p)
    _add_sweep(p)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--emit-curve", help="write a k,loss CSV here")
    p.add_argument("--manifest", help="run manifest path (default: <out>.manifest.json)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("trials", help="repeat the estimate under derived seeds; report NC and ACC")
    _add_input(p)
    _add_sweep(p)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_trials)

    p = sub.add_parser("boundary", help="export boundary degrees")
    _add_input(p)
    p.add_argument("--dc-percentile", type=float, default=0.02)
    p.add_argument("--lambda", dest="lam", type=float, default=0.10)
    p.add_argument("--top", type=int, default=None, help="print the N highest-scoring original indices")
    p.add_argument("--out", help="CSV of original_index,phi,neighbor_count,removed")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("generate", help="write a synthetic dataset as CSV")
    p.add_argument("kind", choices=["blobs", "scenario"])
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--per-cluster", type=int, default=100)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--spread", type=float, default=0.5)
    p.add_argument("--separation", type=float, default=6.0)
    p.add_argument("--family", choices=sorted(SCENARIO_LEVELS))
    p.add_argument("--level", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run the robustness scenario matrix")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--families", nargs="+", choices=sorted(SCENARIO_LEVELS))
    p.add_argument("--out", help="write the JSON results here")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except DegenerateDataError as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return 2
    except (DataError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
