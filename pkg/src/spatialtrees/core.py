"""Unified tree node model and the family-agnostic search algorithms.

Every tree family (octree, k-d tree, R-tree) builds the same node shape:
a bounding box plus either a list of point entries (leaf) or a list of
child nodes (internal). That shared shape is what lets one dual-tree
traversal serve all families: recurse into node pairs only while the
box-to-box minimum distance stays within the query radius, and compare
entries pairwise once both sides are leaves.

The search functions below are deliberately monolithic and loop-heavy:
they are the measured bottleneck of every benchmark, so the distance and
pruning tests are inlined with per-axis early exits instead of calling
into `geometry`. Traversal uses explicit work stacks; deep trees (e.g.
single-axis splits at max_depth 1000) must never hit the interpreter
recursion limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

from .geometry import Aabb, Point3, UNIT_CUBE, is_valid_aabb


class SpatialTreeError(Exception):
    """Base class for all errors raised by this package."""


class NegativeRadius(SpatialTreeError, ValueError):
    pass


class PointOutsideDomain(SpatialTreeError, ValueError):
    pass


class PointOutsideNode(SpatialTreeError, ValueError):
    pass


class DuplicateId(SpatialTreeError, ValueError):
    pass


class DepthExhausted(SpatialTreeError, RuntimeError):
    pass


class EmptyLeaf(SpatialTreeError, ValueError):
    pass


class TooFewEntries(SpatialTreeError, ValueError):
    pass


class NeighborPair(NamedTuple):
    """One reported close pair; `dist` is the Euclidean distance."""

    a: int
    b: int
    dist: float


class TreeStats(NamedTuple):
    entry_count: int
    node_count: int
    max_observed_depth: int
    max_leaf_occupancy: int


OCTREE = "octree"
KDTREE = "kdtree"
RTREE = "rtree"
FAMILIES = (OCTREE, KDTREE, RTREE)

MMAS = "mmas"  # median split, axes cycling x -> y -> z by depth
MSAS = "msas"  # median split, x axis at every level
CS = "cs"  # box-center split, axes cycling by depth
SAHS = "sahs"  # surface-area-heuristic split, axes cycling by depth
SPLIT_STRATEGIES = (MMAS, MSAS, CS, SAHS)


class TreeNode:
    """One node of any tree family.

    A node is a leaf while ``children is None``; leaves hold ``entries``
    as flat ``(x, y, z, payload_id)`` tuples. Internal nodes hold a list
    of child nodes and ``entries is None``. ``bound6`` stores the node
    box flattened to ``(xl, yl, zl, xh, yh, zh)`` because the search
    loops unpack it millions of times; use :attr:`bound` for the boxed
    view. ``split_axis``/``split_coord`` are routing fields used only by
    k-d internal nodes.

    ``remaining_depth`` is the depth budget below this node. A leaf with
    budget 0 is never split and may hold any number of entries; a leaf
    with budget > 0 is kept within the configured node capacity by the
    owning tree.
    """

    __slots__ = ("bound6", "entries", "children", "remaining_depth",
                 "split_axis", "split_coord")

    def __init__(self, bound6: tuple, remaining_depth: int):
        self.bound6 = bound6
        self.entries: Optional[list] = []
        self.children: Optional[list] = None
        self.remaining_depth = remaining_depth
        self.split_axis: Optional[int] = None
        self.split_coord: Optional[float] = None

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def bound(self) -> Aabb:
        xl, yl, zl, xh, yh, zh = self.bound6
        return Aabb(Point3(xl, yl, zl), Point3(xh, yh, zh))


def flatten_bound(box: Aabb) -> tuple:
    (xl, yl, zl), (xh, yh, zh) = box
    return (xl, yl, zl, xh, yh, zh)


@dataclass(frozen=True)
class TreeConfig:
    """Construction parameters for one tree; only the fields relevant to
    ``family`` are honored, the rest are ignored.

    octree/kdtree: ``max_depth``, ``node_capacity``, ``domain`` (and for
    kdtree also ``split_strategy``). rtree: ``degree`` (max entries or
    children per node) and optional ``min_fill``.
    """

    family: str
    max_depth: int = 32
    node_capacity: int = 16
    split_strategy: str = MMAS
    degree: int = 8
    min_fill: Optional[int] = None
    domain: Aabb = UNIT_CUBE

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown tree family: {self.family!r}")
        if self.family in (OCTREE, KDTREE):
            if self.max_depth < 1:
                raise ValueError("max_depth must be >= 1")
            if self.node_capacity < 1:
                raise ValueError("node_capacity must be >= 1")
            if not is_valid_aabb(self.domain):
                raise ValueError("domain must be a valid box")
        if self.family == KDTREE and self.split_strategy not in SPLIT_STRATEGIES:
            raise ValueError(f"unknown split strategy: {self.split_strategy!r}")
        if self.family == RTREE and self.degree < 2:
            raise ValueError("rtree degree must be >= 2")

    def label(self) -> str:
        """Human-readable config name used in reports."""
        if self.family == OCTREE:
            return f"Octree({self.max_depth}, {self.node_capacity})"
        if self.family == KDTREE:
            return (f"k-d tree({self.max_depth}, {self.node_capacity}) "
                    f"{self.split_strategy.upper()}")
        return f"R-tree({self.degree})"


def build_tree(config: TreeConfig):
    """Construct an empty tree of the configured family."""
    # Deferred imports: the family modules import this module.
    if config.family == OCTREE:
        from .octree import Octree

        return Octree(max_depth=config.max_depth,
                      node_capacity=config.node_capacity,
                      domain=config.domain)
    if config.family == KDTREE:
        from .kdtree import KdTree

        return KdTree(max_depth=config.max_depth,
                      node_capacity=config.node_capacity,
                      strategy=config.split_strategy,
                      domain=config.domain)
    from .rtree import RTree

    return RTree(degree=config.degree, min_fill=config.min_fill)


@dataclass
class SearchCounters:
    """Optional traversal instrumentation for tests and diagnostics.

    ``entry_pair_comparisons`` counts candidate entry pairs examined in
    leaf-leaf kernels (every such pair costs a distance test).
    """

    node_pairs_visited: int = 0
    leaf_pairs: int = 0
    entry_pair_comparisons: int = 0


class BaseTree:
    """Shared plumbing for every tree family: id bookkeeping, search
    entry points, statistics, and entry iteration."""

    family = ""

    def __init__(self):
        self.root: TreeNode
        self._ids: set = set()
        self._entry_count = 0

    @property
    def entry_count(self) -> int:
        return self._entry_count

    def insert(self, p: Point3, payload_id: int) -> None:
        raise NotImplementedError

    def _claim_id(self, payload_id) -> None:
        ids = self._ids
        if payload_id in ids:
            raise DuplicateId(f"payload id {payload_id!r} already inserted")
        ids.add(payload_id)

    def self_search(self, radius: float,
                    counters: Optional[SearchCounters] = None) -> list:
        return self_search(self, radius, counters)

    def iter_entries(self) -> Iterator[tuple]:
        """Yield (Point3, payload_id) for every stored entry."""
        for node in iter_nodes(self.root):
            if node.children is None:
                for x, y, z, pid in node.entries:
                    yield Point3(x, y, z), pid

    def stats(self) -> TreeStats:
        return tree_stats(self)


def iter_nodes(node: TreeNode) -> Iterator[TreeNode]:
    """All nodes of the subtree, preorder, iteratively."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if n.children is not None:
            stack.extend(n.children)


def tree_stats(tree) -> TreeStats:
    """Exact structural counters for a tree (or a root node)."""
    root = getattr(tree, "root", tree)
    node_count = 0
    entry_count = 0
    max_depth = 0
    max_occ = 0
    stack = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        node_count += 1
        if depth > max_depth:
            max_depth = depth
        if node.children is None:
            k = len(node.entries)
            entry_count += k
            if k > max_occ:
                max_occ = k
        else:
            for child in node.children:
                stack.append((child, depth + 1))
    return TreeStats(entry_count, node_count, max_depth, max_occ)


def _nonempty_children(node: TreeNode) -> list:
    """Children that can still contribute pairs (drops empty leaves)."""
    return [c for c in node.children
            if c.children is not None or c.entries]


def dual_tree_search(tree_a, tree_b, radius: float,
                     counters: Optional[SearchCounters] = None) -> list:
    """All pairs (a in A, b in B) with Euclidean distance <= radius.

    Accepts trees or root nodes, from any family or a mix of families.
    Node pairs are expanded only while the minimum distance between
    their boxes stays within the radius; pair order in the result is
    traversal order (compare as sets).
    """
    if radius < 0:
        raise NegativeRadius(f"radius must be >= 0, got {radius}")
    root_a = getattr(tree_a, "root", tree_a)
    root_b = getattr(tree_b, "root", tree_b)
    pairs: list = []
    if root_a.children is None and not root_a.entries:
        return pairs
    if root_b.children is None and not root_b.entries:
        return pairs

    r2 = radius * radius
    sqrt = math.sqrt
    emit = pairs.append
    count = counters is not None

    axl, ayl, azl, axh, ayh, azh = root_a.bound6
    bxl, byl, bzl, bxh, byh, bzh = root_b.bound6
    g = axl - bxh
    t = bxl - axh
    if t > g:
        g = t
    s = g * g if g > 0.0 else 0.0
    g = ayl - byh
    t = byl - ayh
    if t > g:
        g = t
    if g > 0.0:
        s += g * g
    g = azl - bzh
    t = bzl - azh
    if t > g:
        g = t
    if g > 0.0:
        s += g * g
    if s > r2:
        return pairs

    stack = [(root_a, root_b)]
    push = stack.append
    pop = stack.pop
    while stack:
        a, b = pop()
        if count:
            counters.node_pairs_visited += 1
        a_children = a.children
        b_children = b.children
        if a_children is None and b_children is None:
            ea = a.entries
            eb = b.entries
            if count:
                counters.leaf_pairs += 1
                counters.entry_pair_comparisons += len(ea) * len(eb)
            for ax, ay, az, aid in ea:
                for bx, by, bz, bid in eb:
                    dx = ax - bx
                    s = dx * dx
                    if s > r2:
                        continue
                    dy = ay - by
                    s += dy * dy
                    if s > r2:
                        continue
                    dz = az - bz
                    s += dz * dz
                    if s <= r2:
                        emit(NeighborPair(aid, bid, sqrt(s)))
            continue
        ac = _nonempty_children(a) if a_children is not None else (a,)
        bc = _nonempty_children(b) if b_children is not None else (b,)
        for ca in ac:
            axl, ayl, azl, axh, ayh, azh = ca.bound6
            for cb in bc:
                bxl, byl, bzl, bxh, byh, bzh = cb.bound6
                g = axl - bxh
                t = bxl - axh
                if t > g:
                    g = t
                if g > 0.0:
                    s = g * g
                    if s > r2:
                        continue
                else:
                    s = 0.0
                g = ayl - byh
                t = byl - ayh
                if t > g:
                    g = t
                if g > 0.0:
                    s += g * g
                    if s > r2:
                        continue
                g = azl - bzh
                t = bzl - azh
                if t > g:
                    g = t
                if g > 0.0:
                    s += g * g
                    if s > r2:
                        continue
                push((ca, cb))
    return pairs


def self_search(tree, radius: float,
                counters: Optional[SearchCounters] = None) -> list:
    """All unordered close pairs within one tree, duplicate-free.

    Pairing a node with itself needs care the plain dual traversal does
    not provide: a leaf against itself enumerates only one orientation
    of each entry pair, and an internal node against itself expands only
    unordered child combinations. Every reported pair is canonical
    (``a < b`` by payload id) and appears exactly once; self pairs
    (x, x) are never reported.
    """
    if radius < 0:
        raise NegativeRadius(f"radius must be >= 0, got {radius}")
    root = getattr(tree, "root", tree)
    pairs: list = []
    if root.children is None and not root.entries:
        return pairs

    r2 = radius * radius
    sqrt = math.sqrt
    emit = pairs.append
    count = counters is not None

    stack = [(root, root)]
    push = stack.append
    pop = stack.pop
    while stack:
        a, b = pop()
        if count:
            counters.node_pairs_visited += 1
        a_children = a.children
        if a is b:
            if a_children is None:
                ea = a.entries
                na = len(ea)
                if count:
                    counters.leaf_pairs += 1
                    counters.entry_pair_comparisons += na * (na - 1) // 2
                for i in range(na - 1):
                    ax, ay, az, aid = ea[i]
                    for j in range(i + 1, na):
                        bx, by, bz, bid = ea[j]
                        dx = ax - bx
                        s = dx * dx
                        if s > r2:
                            continue
                        dy = ay - by
                        s += dy * dy
                        if s > r2:
                            continue
                        dz = az - bz
                        s += dz * dz
                        if s <= r2:
                            if aid < bid:
                                emit(NeighborPair(aid, bid, sqrt(s)))
                            else:
                                emit(NeighborPair(bid, aid, sqrt(s)))
                continue
            ch = _nonempty_children(a)
            m = len(ch)
            for i in range(m):
                ci = ch[i]
                push((ci, ci))
                axl, ayl, azl, axh, ayh, azh = ci.bound6
                for j in range(i + 1, m):
                    cj = ch[j]
                    bxl, byl, bzl, bxh, byh, bzh = cj.bound6
                    g = axl - bxh
                    t = bxl - axh
                    if t > g:
                        g = t
                    if g > 0.0:
                        s = g * g
                        if s > r2:
                            continue
                    else:
                        s = 0.0
                    g = ayl - byh
                    t = byl - ayh
                    if t > g:
                        g = t
                    if g > 0.0:
                        s += g * g
                        if s > r2:
                            continue
                    g = azl - bzh
                    t = bzl - azh
                    if t > g:
                        g = t
                    if g > 0.0:
                        s += g * g
                        if s > r2:
                            continue
                    push((ci, cj))
            continue
        b_children = b.children
        if a_children is None and b_children is None:
            ea = a.entries
            eb = b.entries
            if count:
                counters.leaf_pairs += 1
                counters.entry_pair_comparisons += len(ea) * len(eb)
            for ax, ay, az, aid in ea:
                for bx, by, bz, bid in eb:
                    dx = ax - bx
                    s = dx * dx
                    if s > r2:
                        continue
                    dy = ay - by
                    s += dy * dy
                    if s > r2:
                        continue
                    dz = az - bz
                    s += dz * dz
                    if s <= r2:
                        if aid < bid:
                            emit(NeighborPair(aid, bid, sqrt(s)))
                        else:
                            emit(NeighborPair(bid, aid, sqrt(s)))
            continue
        ac = _nonempty_children(a) if a_children is not None else (a,)
        bc = _nonempty_children(b) if b_children is not None else (b,)
        for ca in ac:
            axl, ayl, azl, axh, ayh, azh = ca.bound6
            for cb in bc:
                bxl, byl, bzl, bxh, byh, bzh = cb.bound6
                g = axl - bxh
                t = bxl - axh
                if t > g:
                    g = t
                if g > 0.0:
                    s = g * g
                    if s > r2:
                        continue
                else:
                    s = 0.0
                g = ayl - byh
                t = byl - ayh
                if t > g:
                    g = t
                if g > 0.0:
                    s += g * g
                    if s > r2:
                        continue
                g = azl - bzh
                t = bzl - azh
                if t > g:
                    g = t
                if g > 0.0:
                    s += g * g
                    if s > r2:
                        continue
                push((ca, cb))
    return pairs
