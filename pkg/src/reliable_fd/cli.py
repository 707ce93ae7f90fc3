"""Command line interface: ``discover``, ``bench-bias`` and ``baseline-estimate``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence

from . import __version__
from .biasbench import bias_summary, dimensionality_curve
from .data import DataError, encode_dataset, read_csv
from .infotheory import DegenerateTargetError
from .search import best_first_search, cardinality_baseline_nodes

DISCOVER_COLUMNS = [
    "rank", "attributes", "indices", "depth", "f_hat", "b0", "f0",
    "dataset", "n", "d", "target", "k", "alpha", "guarantee",
    "nodes_expanded", "nodes_enqueued", "nodes_pruned", "nodes_evaluated",
    "max_depth", "solution_depth", "prune_fraction", "wall_time",
    "bins", "seed", "budget_seconds",
]


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _alpha(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected comma separated positive integers, got {text!r}")
    return values


def _render_tsv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), delimiter="\t", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _render_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def discovery_report(dataset, result, stats, *, bins: int, seed: int, budget: float | None) -> dict:
    """Plain-data report of a search run; attribute sets are given by column name and index."""
    patterns = [
        {
            "attributes": dataset.column_names(p.attrs),
            "indices": list(p.attrs),
            "depth": len(p.attrs),
            "f_hat": p.f_hat,
            "b0": p.b0,
            "f0": p.f0,
        }
        for p in result.patterns
    ]
    return {
        "dataset": dataset.name,
        "n": dataset.n,
        "d": dataset.d,
        "target": dataset.target.name,
        "k": result.k,
        "alpha": result.alpha,
        "guarantee": result.guarantee,
        "patterns": patterns,
        "stats": {
            "nodes_expanded": stats.nodes_expanded,
            "nodes_enqueued": stats.nodes_enqueued,
            "nodes_pruned": stats.nodes_pruned,
            "nodes_evaluated": stats.nodes_evaluated,
            "max_depth": stats.max_depth_explored,
            "solution_depth": stats.solution_depth,
            "prune_fraction": stats.pruned_fraction,
            "wall_time": stats.wall_time,
        },
        "config": {"bins": bins, "seed": seed, "budget_seconds": budget},
    }


def _discovery_rows(report: dict) -> list[dict]:
    shared = {key: report[key] for key in ("dataset", "n", "d", "target", "k", "alpha", "guarantee")}
    shared.update(report["stats"])
    shared.update({k: ("" if v is None else v) for k, v in report["config"].items()})
    rows = []
    for rank, p in enumerate(report["patterns"], start=1):
        row = dict(shared, rank=rank, depth=p["depth"], f_hat=p["f_hat"], b0=p["b0"], f0=p["f0"])
        row["attributes"] = ",".join(p["attributes"])
        row["indices"] = ",".join(str(i) for i in p["indices"])
        rows.append(row)
    return rows


def cmd_discover(args) -> None:
    try:
        raw = read_csv(args.input)
    except FileNotFoundError:
        raise UsageError(f"input file not found: {args.input}") from None
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    name = args.name or args.input
    dataset = encode_dataset(raw, args.target, numeric_bins=args.bins, name=name)
    result, stats = best_first_search(dataset, k=args.k, alpha=args.alpha, budget_seconds=args.budget_seconds)
    report = discovery_report(dataset, result, stats, bins=args.bins, seed=args.seed, budget=args.budget_seconds)
    if args.format == "json":
        _emit(_render_json(report), args.output)
    else:
        _emit(_render_tsv(DISCOVER_COLUMNS, _discovery_rows(report)), args.output)


def cmd_bench_bias(args) -> None:
    if args.fig1:
        points = dimensionality_curve(n=args.n, attrs=args.attrs, domain_size=args.domain,
                                      trials=args.trials, seed=args.seed)
        config = {"n": args.n, "attrs": args.attrs, "domain": args.domain, "trials": args.trials,
                  "seed": args.seed}
        rows = [dict(dimensionality=p.dimensionality, mean_f_hat=p.mean_f_hat, mean_f0=p.mean_f0, **config)
                for p in points]
        if args.format == "json":
            _emit(_render_json({"experiment": "dimensionality", "config": config,
                                "points": [{k: r[k] for k in ("dimensionality", "mean_f_hat", "mean_f0")}
                                           for r in rows]}), args.output)
        else:
            _emit(_render_tsv(list(rows[0]), rows), args.output)
        return

    reports = bias_summary(pmfs_per_regime=args.pmfs_per_regime, trials=args.trials, sizes=args.sizes,
                           seed=args.seed)
    rows = []
    for r in reports:
        row = {"estimator": r.estimator, "n": r.n, "mu": r.mean_abs_bias, "sigma": r.std_abs_bias}
        row.update({f"mu_{regime}": value for regime, value in r.regime_means})
        row.update({"pmfs": r.pmf_count, "trials": r.trials_per_pmf, "seed": r.seed})
        rows.append(row)
    if args.format == "json":
        config = {"pmfs_per_regime": args.pmfs_per_regime, "trials": args.trials, "sizes": args.sizes,
                  "seed": args.seed}
        _emit(_render_json({"experiment": "bias", "config": config, "reports": rows}), args.output)
    else:
        _emit(_render_tsv(list(rows[0]), rows), args.output)


def cmd_baseline_estimate(args) -> None:
    if args.max_depth > args.d:
        raise UsageError(f"--max-depth ({args.max_depth}) must not exceed --d ({args.d})")
    q = cardinality_baseline_nodes(args.d, args.max_depth)
    row = {"d": args.d, "max_depth": args.max_depth, "node_seconds": args.t, "nodes": q, "estimated_seconds": q * args.t}
    if args.format == "json":
        _emit(_render_json(row), args.output)
    else:
        _emit(_render_tsv(list(row), [row]), args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reliable-fd", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")
        p.add_argument("--output", help="write the report here instead of standard output")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("discover", help="top-k reliable functional dependencies of a target column")
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--target", required=True)
    p.add_argument("--k", type=_positive_int, default=1)
    p.add_argument("--alpha", type=_alpha, default=1.0)
    p.add_argument("--bins", type=_positive_int, default=5, help="equal-frequency bins for numeric columns")
    p.add_argument("--budget-seconds", type=_positive_float, default=None)
    p.add_argument("--name", help="dataset name used in the report (default: input path)")
    common(p)
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("bench-bias", help="small-sample bias of F, F_adj and F0")
    p.add_argument("--pmfs-per-regime", type=_positive_int, default=5)
    p.add_argument("--trials", type=_positive_int, default=200)
    p.add_argument("--sizes", type=_int_list, default=[5, 10, 20])
    p.add_argument("--fig1", action="store_true", help="run the dimensionality experiment instead")
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--attrs", type=_positive_int, default=5)
    p.add_argument("--domain", type=_positive_int, default=4)
    common(p)
    p.set_defaults(func=cmd_bench_bias)

    p = sub.add_parser("baseline-estimate", help="node count and time of a cardinality-only search")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--max-depth", type=_positive_int, required=True)
    p.add_argument("--t", type=_positive_float, required=True, help="measured seconds per node")
    common(p)
    p.set_defaults(func=cmd_baseline_estimate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, DataError, DegenerateTargetError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
