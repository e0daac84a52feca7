"""Command-line benchmark driver.

Subcommands:

- ``bench run``: one scenario (tree family + parameters, n, radius).
- ``bench grid``: the bundled reference grid or a custom csv grid file.
- ``bench verify-suite``: the oracle-equivalence matrix over every
  family and strategy.

Exit codes: 0 success, 1 oracle mismatch or verification failure,
2 invalid arguments (including unreadable grid files).
"""

from __future__ import annotations

import argparse
import csv
import sys

from .bench import (
    DEFAULT_RUNS,
    DEFAULT_SEED,
    BenchRecord,
    InvalidGrid,
    OracleMismatch,
    ScenarioSpec,
    emit_report,
    reference_grid,
    run_grid,
    run_scenario,
    verify_matrix,
)
from .core import KDTREE, OCTREE, RTREE, SPLIT_STRATEGIES, TreeConfig


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Spatial-tree insertion/search benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a single benchmark scenario")
    run_p.add_argument("--tree", required=True,
                       choices=[OCTREE, KDTREE, RTREE])
    run_p.add_argument("--split", choices=list(SPLIT_STRATEGIES),
                       default="mmas", help="k-d split strategy")
    run_p.add_argument("--depth", type=int,
                       help="max depth (octree/kdtree)")
    run_p.add_argument("--capacity", type=int,
                       help="leaf capacity before splitting (octree/kdtree)")
    run_p.add_argument("--degree", type=int,
                       help="max entries/children per node (rtree)")
    run_p.add_argument("--n", type=int, required=True)
    run_p.add_argument("--radius", type=float, required=True)
    run_p.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    run_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run_p.add_argument("--verify", action="store_true",
                       help="check pairs against the exhaustive oracle")
    run_p.add_argument("--format", choices=["csv", "markdown"],
                       default="csv")
    run_p.add_argument("--out", help="write the report here instead of stdout")
    run_p.add_argument("--dump-pairs",
                       help="write the first run's pairs to this csv file")

    grid_p = sub.add_parser("grid", help="run a whole benchmark grid")
    grid_p.add_argument("--paper", action="store_true",
                        help="use the bundled reference grid (default when "
                             "no --grid file is given)")
    grid_p.add_argument("--full", action="store_true",
                        help="bundled grid only: include n=10^6 and run the "
                             "configurations the reference tables leave blank")
    grid_p.add_argument("--grid", help="csv grid file to run")
    grid_p.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    grid_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    grid_p.add_argument("--verify", action="store_true")
    grid_p.add_argument("--format", choices=["csv", "markdown"],
                        default="csv")
    grid_p.add_argument("--out",
                        help="csv output path (rows are flushed per cell)")

    verify_p = sub.add_parser(
        "verify-suite",
        help="oracle-equivalence matrix over all families and strategies")
    verify_p.add_argument("--seeds", type=int, default=10,
                          help="seeds per (family, n) cell")
    verify_p.add_argument("--max-n", type=int, default=2000,
                          help="drop matrix point counts above this")
    verify_p.add_argument("--jobs", type=int, default=1,
                          help="worker processes")
    return parser


def _scenario_from_args(args, parser) -> ScenarioSpec:
    if args.tree in (OCTREE, KDTREE):
        if args.depth is None or args.capacity is None:
            parser.error(f"--depth and --capacity are required for {args.tree}")
        config = TreeConfig(args.tree, max_depth=args.depth,
                            node_capacity=args.capacity,
                            split_strategy=args.split)
    else:
        if args.degree is None:
            parser.error("--degree is required for rtree")
        config = TreeConfig(RTREE, degree=args.degree)
    return ScenarioSpec(config=config, n=args.n, radius=args.radius,
                        runs=args.runs, seed=args.seed, verify=args.verify)


def load_grid_file(path: str) -> list:
    """Parse a csv grid file into scenario specs.

    Expected columns: family, strategy, depth, capacity, degree, n,
    radius, and optionally runs, seed, verify.
    """
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise InvalidGrid(f"cannot read grid file: {exc}") from exc
    if not rows:
        raise InvalidGrid("grid file has no rows")
    specs = []
    for lineno, row in enumerate(rows, start=2):
        try:
            family = row["family"].strip()
            if family in (OCTREE, KDTREE):
                config = TreeConfig(
                    family,
                    max_depth=int(row["depth"]),
                    node_capacity=int(row["capacity"]),
                    split_strategy=(row.get("strategy") or "mmas").strip()
                    or "mmas",
                )
            elif family == RTREE:
                config = TreeConfig(RTREE, degree=int(row["degree"]))
            else:
                raise ValueError(f"unknown family {family!r}")
            verify = (row.get("verify") or "").strip().lower()
            specs.append(ScenarioSpec(
                config=config,
                n=int(row["n"]),
                radius=float(row["radius"]),
                runs=int(row.get("runs") or DEFAULT_RUNS),
                seed=int(row.get("seed") or DEFAULT_SEED),
                verify=verify in ("1", "true", "yes"),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGrid(f"grid file line {lineno}: {exc}") from exc
    return specs


def _write_report(records, fmt: str, out_path) -> None:
    text = emit_report(records, format=fmt)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _progress(done: int, total: int, record: BenchRecord) -> None:
    spec = record.spec
    if record.status == "ok":
        detail = (f"insert {record.insert_ms:.2f} ms  "
                  f"search {record.search_ms:.2f} ms  "
                  f"pairs {record.pair_count}")
    else:
        detail = "not-run"
    print(f"[{done}/{total}] {spec.config.label()} n={spec.n} "
          f"r={spec.radius:g}: {detail}", file=sys.stderr, flush=True)


def _cmd_run(args, parser) -> int:
    spec = _scenario_from_args(args, parser)
    try:
        record = run_scenario(spec)
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 1
    if args.dump_pairs:
        from .core import self_search
        from .bench import build_tree, generate_uniform

        points = generate_uniform(spec.n, spec.seed, spec.config.domain)
        tree = build_tree(spec.config)
        for i, p in enumerate(points):
            tree.insert(p, i)
        with open(args.dump_pairs, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["a", "b", "dist"])
            for pair in sorted(self_search(tree, spec.radius)):
                writer.writerow([pair.a, pair.b, repr(pair.dist)])
    _write_report([record], args.format, args.out)
    return 0


def _cmd_grid(args, parser) -> int:
    if args.grid:
        try:
            cells = load_grid_file(args.grid)
        except InvalidGrid as exc:
            print(f"invalid grid: {exc}", file=sys.stderr)
            return 2
    else:
        cells = reference_grid(full=args.full, runs=args.runs,
                               seed=args.seed, verify=args.verify)
    out_csv = args.out if args.format == "csv" else None
    try:
        records = run_grid(cells, out_path=out_csv, progress=_progress)
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 1
    except InvalidGrid as exc:
        print(f"invalid grid: {exc}", file=sys.stderr)
        return 2
    if args.format == "markdown":
        _write_report(records, "markdown", args.out)
    elif not args.out:
        _write_report(records, "csv", None)
    return 0


def _cmd_verify_suite(args) -> int:
    from .bench import VERIFY_N_VALUES, VERIFY_SEEDS

    n_values = tuple(n for n in VERIFY_N_VALUES if n <= args.max_n)
    seeds = tuple(range(args.seeds))

    def progress(done, total):
        print(f"verified group {done}/{total}", file=sys.stderr, flush=True)

    failures = verify_matrix(n_values=n_values, seeds=seeds,
                             jobs=max(1, args.jobs), progress=progress)
    if failures:
        for failure in failures:
            print(f"MISMATCH {failure}", file=sys.stderr)
        print(f"verify-suite: {len(failures)} mismatches", file=sys.stderr)
        return 1
    cells = len(n_values) * len(seeds)
    print(f"verify-suite: all configurations match the oracle "
          f"({cells} point sets)", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args, parser)
    if args.command == "grid":
        return _cmd_grid(args, parser)
    return _cmd_verify_suite(args)


if __name__ == "__main__":
    sys.exit(main())
