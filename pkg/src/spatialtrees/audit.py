"""Structural audits: validate the invariants a built tree must hold.

Each audit walks the whole tree and returns a list of human-readable
problem descriptions; an empty list means the structure is sound. The
checks are exact (no tolerances): child boxes are recomputed with the
same arithmetic the builders use, and R-tree bounds are compared against
freshly recomputed minimum bounding boxes.
"""

from __future__ import annotations

from collections import Counter

from .core import TreeNode, iter_nodes
from .geometry import Point3


def audit_tree(tree, expected_entries=None) -> list:
    """Run every applicable audit; `expected_entries` is an optional
    iterable of (Point3, payload_id) that must match the stored entries
    as a multiset."""
    problems = _audit_common(tree)
    if tree.family == "octree":
        problems += _audit_octree(tree)
    elif tree.family == "kdtree":
        problems += _audit_kdtree(tree)
    elif tree.family == "rtree":
        problems += _audit_rtree(tree)
    if expected_entries is not None:
        problems += _audit_conservation(tree, expected_entries)
    return problems


def _audit_common(tree) -> list:
    problems = []
    count = 0
    ids = set()
    for node in iter_nodes(tree.root):
        xl, yl, zl, xh, yh, zh = node.bound6
        if not (xl <= xh and yl <= yh and zl <= zh):
            problems.append(f"inverted bound {node.bound6}")
        if node.children is None:
            count += len(node.entries)
            for x, y, z, pid in node.entries:
                if pid in ids:
                    problems.append(f"duplicate payload id {pid}")
                ids.add(pid)
        else:
            if node.entries is not None:
                problems.append("internal node still holds entries")
            if not node.children:
                problems.append("internal node with no children")
    if count != tree.entry_count:
        problems.append(
            f"entry_count {tree.entry_count} != stored entries {count}")
    return problems


def _audit_conservation(tree, expected_entries) -> list:
    expected = Counter((p[0], p[1], p[2], pid) for p, pid in expected_entries)
    stored = Counter((p[0], p[1], p[2], pid) for p, pid in tree.iter_entries())
    if expected != stored:
        missing = expected - stored
        extra = stored - expected
        return [f"entry multiset mismatch: {sum(missing.values())} missing, "
                f"{sum(extra.values())} unexpected"]
    return []


def _leaf_capacity_problems(tree) -> list:
    problems = []
    cap = tree.node_capacity
    for node in iter_nodes(tree.root):
        if node.children is None and node.remaining_depth > 0 \
                and len(node.entries) > cap:
            problems.append(
                f"leaf with depth budget {node.remaining_depth} holds "
                f"{len(node.entries)} > capacity {cap}")
    return problems


def _containment_problems(tree) -> list:
    problems = []
    for node in iter_nodes(tree.root):
        if node.children is None:
            xl, yl, zl, xh, yh, zh = node.bound6
            for x, y, z, pid in node.entries:
                if not (xl <= x <= xh and yl <= y <= yh and zl <= z <= zh):
                    problems.append(
                        f"entry {pid} at {(x, y, z)} outside leaf bound "
                        f"{node.bound6}")
    return problems


def _depth_budget_problems(tree) -> list:
    problems = []
    if tree.root.remaining_depth != tree.max_depth:
        problems.append("root depth budget != max_depth")
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.children is not None:
            for child in node.children:
                if child.remaining_depth != node.remaining_depth - 1:
                    problems.append("child depth budget is not parent's - 1")
                stack.append(child)
    return problems


def _audit_octree(tree) -> list:
    problems = _leaf_capacity_problems(tree)
    problems += _containment_problems(tree)
    problems += _depth_budget_problems(tree)
    for node in iter_nodes(tree.root):
        if node.children is None:
            continue
        if len(node.children) != 8:
            problems.append(f"octree node with {len(node.children)} children")
            continue
        xl, yl, zl, xh, yh, zh = node.bound6
        cx = (xl + xh) * 0.5
        cy = (yl + yh) * 0.5
        cz = (zl + zh) * 0.5
        for code, child in enumerate(node.children):
            nxl, nxh = (cx, xh) if code & 1 else (xl, cx)
            nyl, nyh = (cy, yh) if code & 2 else (yl, cy)
            nzl, nzh = (cz, zh) if code & 4 else (zl, cz)
            if child.bound6 != (nxl, nyl, nzl, nxh, nyh, nzh):
                problems.append(
                    f"octant {code} bound {child.bound6} does not tile "
                    f"parent {node.bound6}")
    return problems


def _subtree_axis_range(node: TreeNode, axis: int):
    lo = hi = None
    for n in iter_nodes(node):
        if n.children is None:
            for entry in n.entries:
                c = entry[axis]
                if lo is None or c < lo:
                    lo = c
                if hi is None or c > hi:
                    hi = c
    return lo, hi


def _audit_kdtree(tree) -> list:
    problems = _leaf_capacity_problems(tree)
    problems += _containment_problems(tree)
    problems += _depth_budget_problems(tree)
    for node in iter_nodes(tree.root):
        if node.children is None:
            continue
        if len(node.children) != 2:
            problems.append(f"k-d node with {len(node.children)} children")
            continue
        axis, coord = node.split_axis, node.split_coord
        if axis is None or coord is None:
            problems.append("k-d internal node without split plane")
            continue
        if not node.bound6[axis] <= coord <= node.bound6[axis + 3]:
            problems.append(f"split plane {coord} outside bound on axis {axis}")
        lo, hi = node.children
        expect_lo = list(node.bound6)
        expect_lo[axis + 3] = coord
        expect_hi = list(node.bound6)
        expect_hi[axis] = coord
        if lo.bound6 != tuple(expect_lo) or hi.bound6 != tuple(expect_hi):
            problems.append(
                f"k-d children bounds not the parent cut at {coord}")
        _, lo_max = _subtree_axis_range(lo, axis)
        hi_min, _ = _subtree_axis_range(hi, axis)
        if lo_max is not None and not lo_max < coord:
            problems.append(
                f"left subtree reaches {lo_max} >= plane {coord}")
        if hi_min is not None and not hi_min >= coord:
            problems.append(
                f"right subtree reaches {hi_min} < plane {coord}")
    return problems


def _recomputed_mbr(node: TreeNode) -> tuple:
    if node.children is None:
        it = iter(node.entries)
        first = next(it)
        xl = xh = first[0]
        yl = yh = first[1]
        zl = zh = first[2]
        for x, y, z, _ in it:
            if x < xl: xl = x
            if x > xh: xh = x
            if y < yl: yl = y
            if y > yh: yh = y
            if z < zl: zl = z
            if z > zh: zh = z
        return (xl, yl, zl, xh, yh, zh)
    boxes = [_recomputed_mbr(c) for c in node.children]
    return (
        min(b[0] for b in boxes),
        min(b[1] for b in boxes),
        min(b[2] for b in boxes),
        max(b[3] for b in boxes),
        max(b[4] for b in boxes),
        max(b[5] for b in boxes),
    )


def _audit_rtree(tree) -> list:
    problems = []
    degree = tree.degree
    min_fill = tree.min_fill
    root = tree.root

    if root.children is not None and not 2 <= len(root.children) <= degree:
        problems.append(f"root has {len(root.children)} children")
    if root.children is None and len(root.entries) > degree:
        problems.append(f"leaf root overflows: {len(root.entries)}")

    leaf_depths = set()
    stack = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        if node is not root:
            size = len(node.entries if node.children is None
                       else node.children)
            if not min_fill <= size <= degree:
                problems.append(
                    f"node occupancy {size} outside [{min_fill}, {degree}]")
        if node.children is None:
            leaf_depths.add(depth)
        else:
            for child in node.children:
                stack.append((child, depth + 1))
    if len(leaf_depths) > 1:
        problems.append(f"leaves at unequal depths: {sorted(leaf_depths)}")

    if tree.entry_count > 0:
        stack = [root]
        while stack:
            node = stack.pop()
            if node.bound6 != _recomputed_mbr(node):
                problems.append(
                    f"stored bound {node.bound6} != minimal box "
                    f"{_recomputed_mbr(node)}")
            if node.children is not None:
                stack.extend(node.children)
    return problems
