"""Benchmark harness: seeded data, timed runs, grids, and reports.

A scenario is one tree configuration exercised at a point count and a
search radius: each run draws fresh uniform points (seed + run index),
times the n inserts as one block and the whole self-search as another
on the monotonic clock, and optionally checks the found pairs against
the exhaustive oracle. The bundled reference grid sweeps depth and
capacity over three point counts and two radii for every family, with
the cells the reference tables leave blank marked "not-run" unless the
grid is built with ``full=True``.

Reports are a flat csv (one row per record, stable column set) or a
markdown rendering grouped into insertion, per-radius search, and total
tables.
"""

from __future__ import annotations

import csv
import io
import sys
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterable, Optional

import numpy as np

from .core import (
    CS,
    KDTREE,
    MMAS,
    MSAS,
    OCTREE,
    RTREE,
    SAHS,
    SPLIT_STRATEGIES,
    SpatialTreeError,
    TreeConfig,
    build_tree,
    self_search,
)
from .geometry import Aabb, Point3, UNIT_CUBE
from .oracle import brute_force_pairs

DEFAULT_SEED = 42
DEFAULT_RUNS = 5
VERIFY_CAP = 5000

CSV_COLUMNS = [
    "family", "strategy", "depth", "capacity", "degree", "n", "radius",
    "runs", "seed", "insert_ms", "search_ms", "total_ms", "pair_count",
]
TIMING_COLUMNS = ("insert_ms", "search_ms", "total_ms")


class OracleMismatch(SpatialTreeError):
    """The tree search disagreed with the exhaustive oracle."""


class InvalidGrid(SpatialTreeError, ValueError):
    pass


class EmptyInput(SpatialTreeError, ValueError):
    pass


@dataclass(frozen=True)
class ScenarioSpec:
    """One benchmark cell: a tree configuration, a point count, a search
    radius, and how to run it."""

    config: TreeConfig
    n: int
    radius: float
    runs: int = DEFAULT_RUNS
    seed: int = DEFAULT_SEED
    verify: bool = False
    verify_cap: int = VERIFY_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.radius < 0:
            raise ValueError("radius must be >= 0")


@dataclass
class BenchRecord:
    """Measured result of one scenario; times are means over the runs in
    milliseconds, and ``pair_count`` is the first run's count (runs draw
    different data, so counts may differ between runs; the raw list
    keeps them all). A "not-run" record carries no measurements."""

    spec: ScenarioSpec
    insert_ms: Optional[float] = None
    search_ms: Optional[float] = None
    pair_count: Optional[int] = None
    raw_insert_ms: list = field(default_factory=list)
    raw_search_ms: list = field(default_factory=list)
    raw_pair_counts: list = field(default_factory=list)
    status: str = "ok"

    @property
    def total_ms(self) -> Optional[float]:
        if self.insert_ms is None or self.search_ms is None:
            return None
        return self.insert_ms + self.search_ms


def generate_uniform(n: int, seed: int, domain: Aabb = UNIT_CUBE) -> list:
    """n i.i.d. uniform points over the domain.

    Drawn from numpy's PCG64 generator seeded with ``seed``; identical
    arguments yield bitwise-identical points.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random((n, 3))
    (xl, yl, zl), (xh, yh, zh) = domain
    xs = xl + u[:, 0] * (xh - xl)
    ys = yl + u[:, 1] * (yh - yl)
    zs = zl + u[:, 2] * (zh - zl)
    return [Point3(x, y, z)
            for x, y, z in zip(xs.tolist(), ys.tolist(), zs.tolist())]


def canonical_pair_set(pairs: Iterable) -> set:
    """(a, b) id pairs with a < b, as a set."""
    return {(p[0], p[1]) if p[0] < p[1] else (p[1], p[0]) for p in pairs}


def check_against_oracle(points: list, pairs: list, radius: float,
                         context: str = "") -> None:
    """Raise OracleMismatch unless `pairs` matches the exhaustive oracle
    on `points` (list of Point3; ids are positional) exactly."""
    items = [(p, i) for i, p in enumerate(points)]
    expected = canonical_pair_set(brute_force_pairs(items, radius))
    got = canonical_pair_set(pairs)
    if len(pairs) != len(got):
        raise OracleMismatch(
            f"{context}: search emitted {len(pairs) - len(got)} duplicate pairs")
    if got != expected:
        missing = sorted(expected - got)[:5]
        extra = sorted(got - expected)[:5]
        raise OracleMismatch(
            f"{context}: {len(expected - got)} missing / "
            f"{len(got - expected)} extra pairs "
            f"(missing e.g. {missing}, extra e.g. {extra})")


def run_scenario(spec: ScenarioSpec) -> BenchRecord:
    """Execute one scenario: per run, build a fresh tree from freshly
    seeded data, time the inserts and the self-search, and verify
    against the oracle when asked (and n is within the verify cap)."""
    record = BenchRecord(spec=spec)
    config = spec.config
    for run in range(spec.runs):
        points = generate_uniform(spec.n, spec.seed + run, config.domain)
        tree = build_tree(config)
        t0 = time.perf_counter()
        for i, p in enumerate(points):
            tree.insert(p, i)
        t1 = time.perf_counter()
        pairs = self_search(tree, spec.radius)
        t2 = time.perf_counter()
        record.raw_insert_ms.append((t1 - t0) * 1000.0)
        record.raw_search_ms.append((t2 - t1) * 1000.0)
        record.raw_pair_counts.append(len(pairs))
        if spec.verify and spec.n <= spec.verify_cap:
            check_against_oracle(
                points, pairs, spec.radius,
                context=f"{config.label()} n={spec.n} r={spec.radius} "
                        f"seed={spec.seed + run}")
    record.insert_ms = sum(record.raw_insert_ms) / spec.runs
    record.search_ms = sum(record.raw_search_ms) / spec.runs
    record.pair_count = record.raw_pair_counts[0]
    return record


# --- reference grid -------------------------------------------------------

GRID_DEPTHS = (10, 100, 1000)
GRID_CAPACITIES = (10, 100, 1000)
GRID_CS_SAHS_CAPACITIES = (100, 1000)
GRID_RTREE_DEGREES = (5, 25, 125)
GRID_N_VALUES = (10_000, 100_000, 1_000_000)
GRID_RADII = (0.001, 0.00001)


def reference_grid_configs() -> list:
    """The 42 tree configurations of the reference grid, in table order
    (capacity-major, depth-minor)."""
    configs = []
    for cap in GRID_CAPACITIES:
        for depth in GRID_DEPTHS:
            configs.append(TreeConfig(OCTREE, max_depth=depth,
                                      node_capacity=cap))
    for strategy in (MMAS, MSAS):
        for cap in GRID_CAPACITIES:
            for depth in GRID_DEPTHS:
                configs.append(TreeConfig(KDTREE, max_depth=depth,
                                          node_capacity=cap,
                                          split_strategy=strategy))
    for strategy in (CS, SAHS):
        for cap in GRID_CS_SAHS_CAPACITIES:
            for depth in GRID_DEPTHS:
                configs.append(TreeConfig(KDTREE, max_depth=depth,
                                          node_capacity=cap,
                                          split_strategy=strategy))
    for degree in GRID_RTREE_DEGREES:
        configs.append(TreeConfig(RTREE, degree=degree))
    return configs


def reference_grid(full: bool = False, n_values: Optional[tuple] = None,
                   runs: int = DEFAULT_RUNS, seed: int = DEFAULT_SEED,
                   verify: bool = False) -> list:
    """Build the bundled grid as (ScenarioSpec, enabled) cells.

    By default n is capped at 100 000 and the center-split,
    surface-area-split and R-tree configurations run only at n=10 000;
    the remaining cells are present but disabled ("not-run"), matching
    the blank cells of the reference tables. ``full=True`` lifts both
    restrictions and adds n=1 000 000.
    """
    if n_values is None:
        n_values = GRID_N_VALUES if full else GRID_N_VALUES[:2]
    cells = []
    for n in n_values:
        for radius in GRID_RADII:
            for config in reference_grid_configs():
                spec = ScenarioSpec(config=config, n=n, radius=radius,
                                    runs=runs, seed=seed, verify=verify)
                small_only = (config.family == RTREE
                              or (config.family == KDTREE
                                  and config.split_strategy in (CS, SAHS)))
                enabled = full or not small_only or n <= 10_000
                cells.append((spec, enabled))
    return cells


def run_grid(cells, out_path: Optional[str] = None,
             progress=None) -> list:
    """Run grid cells sequentially; cells may be ScenarioSpecs or
    (spec, enabled) tuples. Completed records are flushed to
    ``out_path`` as csv rows as they finish, so an interrupted run
    keeps its finished cells."""
    normalized = []
    for cell in cells:
        if isinstance(cell, ScenarioSpec):
            normalized.append((cell, True))
        else:
            spec, enabled = cell
            normalized.append((spec, bool(enabled)))
    if not normalized:
        raise InvalidGrid("grid has no cells")

    records = []
    out_file = open(out_path, "w", newline="") if out_path else None
    try:
        writer = None
        if out_file is not None:
            writer = csv.writer(out_file)
            writer.writerow(CSV_COLUMNS)
            out_file.flush()
        total = len(normalized)
        for i, (spec, enabled) in enumerate(normalized):
            if enabled:
                record = run_scenario(spec)
            else:
                record = BenchRecord(spec=spec, status="not-run")
            records.append(record)
            if writer is not None:
                writer.writerow(_record_row(record))
                out_file.flush()
            if progress is not None:
                progress(i + 1, total, record)
    finally:
        if out_file is not None:
            out_file.close()
    return records


# --- reports --------------------------------------------------------------

def _fmt(value) -> str:
    return "" if value is None else repr(value) if isinstance(value, float) else str(value)


def _record_row(record: BenchRecord) -> list:
    spec = record.spec
    config = spec.config
    kd = config.family == KDTREE
    rt = config.family == RTREE
    return [
        config.family,
        config.split_strategy if kd else "",
        "" if rt else str(config.max_depth),
        "" if rt else str(config.node_capacity),
        str(config.degree) if rt else "",
        str(spec.n),
        repr(spec.radius),
        str(spec.runs),
        str(spec.seed),
        _fmt(record.insert_ms),
        _fmt(record.search_ms),
        _fmt(record.total_ms),
        _fmt(record.pair_count),
    ]


def emit_report(records: list, format: str = "csv") -> str:
    """Render records as csv (one row per record, grid order) or as
    markdown tables shaped like the reference tables."""
    if not records:
        raise EmptyInput("no records to report")
    if format == "csv":
        return _emit_csv(records)
    if format == "markdown":
        return _emit_markdown(records)
    raise ValueError(f"unknown report format: {format!r}")


def _emit_csv(records: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(_record_row(record))
    return buf.getvalue()


def parse_report_csv(text: str) -> list:
    """Parse an emitted csv report back into per-row dicts with typed
    values (None for blank cells)."""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or rows[0] != CSV_COLUMNS:
        raise InvalidGrid("unrecognized report header")
    out = []
    for row in rows[1:]:
        if len(row) != len(CSV_COLUMNS):
            raise InvalidGrid(f"malformed row: {row!r}")
        rec = dict(zip(CSV_COLUMNS, row))
        for key in ("depth", "capacity", "degree", "n", "runs", "seed",
                    "pair_count"):
            rec[key] = int(rec[key]) if rec[key] else None
        for key in ("radius", "insert_ms", "search_ms", "total_ms"):
            rec[key] = float(rec[key]) if rec[key] else None
        rec["strategy"] = rec["strategy"] or None
        out.append(rec)
    return out


def _config_order(records: list) -> list:
    seen = {}
    for record in records:
        label = record.spec.config.label()
        if label not in seen:
            seen[label] = len(seen)
    return sorted(seen, key=seen.get)


def _markdown_table(title: str, labels: list, columns: list,
                    cell) -> list:
    lines = [f"### {title}", ""]
    lines.append("| Tree(depth, capacity) | " +
                 " | ".join(str(c) for c in columns) + " |")
    lines.append("|---" * (len(columns) + 1) + "|")
    for label in labels:
        values = []
        for col in columns:
            v = cell(label, col)
            values.append("" if v is None else f"{v:.2f}")
        lines.append(f"| {label} | " + " | ".join(values) + " |")
    lines.append("")
    return lines


def _emit_markdown(records: list) -> str:
    labels = _config_order(records)
    n_values = sorted({r.spec.n for r in records})
    radii = sorted({r.spec.radius for r in records}, reverse=True)

    by_key = {}
    for r in records:
        by_key.setdefault((r.spec.config.label(), r.spec.n,
                           r.spec.radius), r)

    def insert_cell(label, n):
        vals = [by_key[(label, n, rad)].insert_ms for rad in radii
                if (label, n, rad) in by_key
                and by_key[(label, n, rad)].insert_ms is not None]
        return sum(vals) / len(vals) if vals else None

    def search_cell(radius):
        def cell(label, n):
            rec = by_key.get((label, n, radius))
            return rec.search_ms if rec is not None else None
        return cell

    def total_cell(n):
        def cell(label, radius):
            rec = by_key.get((label, n, radius))
            return rec.total_ms if rec is not None else None
        return cell

    lines = []
    lines += _markdown_table("Insertion time, ms (mean over runs and radii)",
                             labels, n_values, insert_cell)
    for radius in radii:
        lines += _markdown_table(f"Search time, ms (radius {radius:g})",
                                 labels, n_values, search_cell(radius))
    executed_n = [r.spec.n for r in records if r.status == "ok"]
    if executed_n:
        n_top = max(executed_n)
        lines += _markdown_table(
            f"Total insertion + search time, ms (n = {n_top})",
            labels, radii, total_cell(n_top))
    return "\n".join(lines)


# --- oracle-equivalence verification matrix -------------------------------

VERIFY_DEPTHS = (1, 4, 32)
VERIFY_CAPACITIES = (1, 8, 64)
VERIFY_RTREE_DEGREES = (3, 5, 25)
VERIFY_RADII = (0.001, 0.05, 0.3)
VERIFY_N_VALUES = (1, 2, 100, 2000)
VERIFY_SEEDS = tuple(range(10))


def standard_verify_configs() -> list:
    """All 48 family/strategy configurations of the verification matrix."""
    configs = []
    for depth in VERIFY_DEPTHS:
        for cap in VERIFY_CAPACITIES:
            configs.append(TreeConfig(OCTREE, max_depth=depth,
                                      node_capacity=cap))
            for strategy in SPLIT_STRATEGIES:
                configs.append(TreeConfig(KDTREE, max_depth=depth,
                                          node_capacity=cap,
                                          split_strategy=strategy))
    for degree in VERIFY_RTREE_DEGREES:
        configs.append(TreeConfig(RTREE, degree=degree))
    return configs


def _verify_group(args) -> list:
    """Worker: check every config against the oracle for one (n, seed)
    over all radii. Returns failure descriptions (empty = all equal)."""
    n, seed, configs, radii = args
    points = generate_uniform(n, seed)
    items = [(p, i) for i, p in enumerate(points)]
    expected = {r: canonical_pair_set(brute_force_pairs(items, r))
                for r in radii}
    failures = []
    for config in configs:
        tree = build_tree(config)
        for i, p in enumerate(points):
            tree.insert(p, i)
        for r in radii:
            pairs = self_search(tree, r)
            got = canonical_pair_set(pairs)
            if len(got) != len(pairs):
                failures.append(
                    f"{config.label()} n={n} seed={seed} r={r}: "
                    f"duplicate pairs emitted")
            elif got != expected[r]:
                failures.append(
                    f"{config.label()} n={n} seed={seed} r={r}: "
                    f"{len(expected[r] - got)} missing, "
                    f"{len(got - expected[r])} extra")
    return failures


def verify_matrix(configs: Optional[list] = None,
                  n_values: tuple = VERIFY_N_VALUES,
                  radii: tuple = VERIFY_RADII,
                  seeds: tuple = VERIFY_SEEDS,
                  jobs: int = 1,
                  progress=None) -> list:
    """Exhaustive oracle-equivalence sweep; returns failure strings
    (empty list = every configuration matched the oracle exactly).

    Work is grouped by (n, seed) so the oracle runs once per group; with
    jobs > 1 the independent groups run in worker processes.
    """
    if configs is None:
        configs = standard_verify_configs()
    groups = [(n, seed, configs, radii)
              for n in n_values for seed in seeds]
    failures = []
    done = 0
    if jobs > 1:
        with Pool(processes=jobs) as pool:
            for result in pool.imap_unordered(_verify_group, groups):
                failures.extend(result)
                done += 1
                if progress is not None:
                    progress(done, len(groups))
    else:
        for group in groups:
            failures.extend(_verify_group(group))
            done += 1
            if progress is not None:
                progress(done, len(groups))
    return failures
