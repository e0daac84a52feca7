"""K-d tree: binary decomposition with four split-plane strategies.

Strategies, all cycling axes x -> y -> z by node depth unless noted:

- ``mmas``: plane at the median of the entry coordinates on the axis.
- ``msas``: like mmas but always on the x axis.
- ``cs``: plane at the center of the node box on the axis; ignores data.
- ``sahs``: plane at the entry coordinate minimizing the surface-area
  cost ``area(left) * n_left + area(right) * n_right`` of the cut box.

Entries with coordinate exactly on the plane go to the right child, the
same high-side rule the octree uses. A split may leave one child empty
(degenerate data); termination is then guaranteed by the depth budget.
"""

from __future__ import annotations

import statistics
from bisect import bisect_left
from typing import NamedTuple

from .core import (
    CS,
    MMAS,
    MSAS,
    SAHS,
    BaseTree,
    DepthExhausted,
    EmptyLeaf,
    PointOutsideDomain,
    TooFewEntries,
    TreeNode,
    flatten_bound,
)
from .geometry import Aabb, Point3, UNIT_CUBE, surface_area

AXIS_X, AXIS_Y, AXIS_Z = 0, 1, 2


class SplitPlane(NamedTuple):
    """Axis-orthogonal cutting plane; axis is 0/1/2 for x/y/z."""

    axis: int
    coordinate: float


def _median_on_axis(entries: list, axis: int) -> float:
    # statistics.median averages the two middle values for even counts.
    return statistics.median([e[axis] for e in entries])


def choose_split_mmas(leaf: TreeNode, level: int) -> SplitPlane:
    """Median split on the axis cycling with depth (level 0 = x)."""
    if not leaf.entries:
        raise EmptyLeaf("median split needs at least one entry")
    axis = level % 3
    return SplitPlane(axis, _median_on_axis(leaf.entries, axis))


def choose_split_msas(leaf: TreeNode) -> SplitPlane:
    """Median split, always on the x axis."""
    if not leaf.entries:
        raise EmptyLeaf("median split needs at least one entry")
    return SplitPlane(AXIS_X, _median_on_axis(leaf.entries, AXIS_X))


def choose_split_cs(leaf: TreeNode, level: int) -> SplitPlane:
    """Box-center split on the cycling axis; data-independent."""
    axis = level % 3
    b6 = leaf.bound6
    return SplitPlane(axis, (b6[axis] + b6[axis + 3]) * 0.5)


def choose_split_sahs(leaf: TreeNode, level: int) -> SplitPlane:
    """Surface-area-heuristic split on the cycling axis.

    Candidate planes are the entry coordinates themselves. Each
    candidate cuts the node box in two; its cost is
    ``area(left) * n_left + area(right) * n_right`` with ``n_left``
    counting entries strictly below the plane. The first minimal
    candidate in sorted order wins.
    """
    entries = leaf.entries
    if entries is None or len(entries) < 2:
        raise TooFewEntries("surface-area split needs at least two entries")
    axis = level % 3
    coords = sorted(e[axis] for e in entries)
    n = len(coords)
    bound = leaf.bound
    (xl, yl, zl), (xh, yh, zh) = bound
    best_coord = None
    best_cost = None
    prev = None
    for c in coords:
        if c == prev:
            continue
        prev = c
        n_left = bisect_left(coords, c)
        left_box, right_box = _cut_box(bound, axis, c)
        cost = (surface_area(left_box) * n_left
                + surface_area(right_box) * (n - n_left))
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_coord = c
    return SplitPlane(axis, best_coord)


def _cut_box(bound: Aabb, axis: int, coord: float) -> tuple:
    (xl, yl, zl), (xh, yh, zh) = bound
    if axis == 0:
        return (Aabb(Point3(xl, yl, zl), Point3(coord, yh, zh)),
                Aabb(Point3(coord, yl, zl), Point3(xh, yh, zh)))
    if axis == 1:
        return (Aabb(Point3(xl, yl, zl), Point3(xh, coord, zh)),
                Aabb(Point3(xl, coord, zl), Point3(xh, yh, zh)))
    return (Aabb(Point3(xl, yl, zl), Point3(xh, yh, coord)),
            Aabb(Point3(xl, yl, coord), Point3(xh, yh, zh)))


def split_kd(leaf: TreeNode, plane: SplitPlane) -> TreeNode:
    """Turn a leaf into an internal node with two children cut at the
    plane. Entries with coordinate < plane go left, >= go right."""
    if leaf.remaining_depth <= 0:
        raise DepthExhausted("cannot split a node with no depth budget")
    axis, coord = plane
    xl, yl, zl, xh, yh, zh = leaf.bound6
    if axis == 0:
        lo6 = (xl, yl, zl, coord, yh, zh)
        hi6 = (coord, yl, zl, xh, yh, zh)
    elif axis == 1:
        lo6 = (xl, yl, zl, xh, coord, zh)
        hi6 = (xl, coord, zl, xh, yh, zh)
    else:
        lo6 = (xl, yl, zl, xh, yh, coord)
        hi6 = (xl, yl, coord, xh, yh, zh)
    rd = leaf.remaining_depth - 1
    lo = TreeNode(lo6, rd)
    hi = TreeNode(hi6, rd)
    lo_entries = lo.entries
    hi_entries = hi.entries
    for entry in leaf.entries:
        if entry[axis] < coord:
            lo_entries.append(entry)
        else:
            hi_entries.append(entry)
    leaf.children = [lo, hi]
    leaf.entries = None
    leaf.split_axis = axis
    leaf.split_coord = coord
    return leaf


class KdTree(BaseTree):
    family = "kdtree"

    def __init__(self, max_depth: int, node_capacity: int,
                 strategy: str = MMAS, domain: Aabb = UNIT_CUBE):
        super().__init__()
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if node_capacity < 1:
            raise ValueError("node_capacity must be >= 1")
        if strategy not in (MMAS, MSAS, CS, SAHS):
            raise ValueError(f"unknown split strategy: {strategy!r}")
        self.max_depth = max_depth
        self.node_capacity = node_capacity
        self.strategy = strategy
        self.domain = domain
        self._domain6 = flatten_bound(domain)
        self.root = TreeNode(self._domain6, max_depth)

    def _choose_plane(self, leaf: TreeNode) -> SplitPlane:
        level = self.max_depth - leaf.remaining_depth
        strategy = self.strategy
        if strategy == MMAS:
            return choose_split_mmas(leaf, level)
        if strategy == MSAS:
            return choose_split_msas(leaf)
        if strategy == CS:
            return choose_split_cs(leaf, level)
        return choose_split_sahs(leaf, level)

    def insert(self, p: Point3, payload_id: int) -> None:
        x, y, z = p
        xl, yl, zl, xh, yh, zh = self._domain6
        if not (xl <= x <= xh and yl <= y <= yh and zl <= z <= zh):
            raise PointOutsideDomain(f"{tuple(p)} outside domain {self.domain}")
        self._claim_id(payload_id)
        coords = (x, y, z)
        node = self.root
        while node.children is not None:
            if coords[node.split_axis] < node.split_coord:
                node = node.children[0]
            else:
                node = node.children[1]
        node.entries.append((x, y, z, payload_id))
        self._entry_count += 1
        cap = self.node_capacity
        if len(node.entries) > cap and node.remaining_depth > 0:
            pending = [node]
            while pending:
                n = pending.pop()
                split_kd(n, self._choose_plane(n))
                for child in n.children:
                    if len(child.entries) > cap and child.remaining_depth > 0:
                        pending.append(child)
