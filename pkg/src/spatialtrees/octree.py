"""Octree: eight-way spatial decomposition over a fixed domain.

Each split cuts a node box at its center into eight equal octants, so a
cubical domain keeps all node boxes cubical. Points are routed by a pure
bit test per axis; ties on a center plane go to the high-side child.
"""

from __future__ import annotations

from .core import (
    BaseTree,
    DepthExhausted,
    PointOutsideDomain,
    PointOutsideNode,
    TreeNode,
    flatten_bound,
)
from .geometry import Aabb, Point3, UNIT_CUBE, contains


def child_index(node_bound: Aabb, p: Point3) -> int:
    """Octant code for p in [0, 8): bit0 = x >= center, bit1 = y, bit2 = z."""
    if not contains(node_bound, p):
        raise PointOutsideNode(f"{tuple(p)} outside {node_bound}")
    (xl, yl, zl), (xh, yh, zh) = node_bound
    return (
        (p[0] >= (xl + xh) * 0.5)
        + 2 * (p[1] >= (yl + yh) * 0.5)
        + 4 * (p[2] >= (zl + zh) * 0.5)
    )


def split_octant(leaf: TreeNode) -> TreeNode:
    """Turn a leaf into an internal node with its 8 octant children.

    Entries are redistributed by octant code; all eight children are
    materialized, empty or not, so ``children[code]`` indexing works.
    """
    if leaf.remaining_depth <= 0:
        raise DepthExhausted("cannot split a node with no depth budget")
    xl, yl, zl, xh, yh, zh = leaf.bound6
    cx = (xl + xh) * 0.5
    cy = (yl + yh) * 0.5
    cz = (zl + zh) * 0.5
    rd = leaf.remaining_depth - 1
    children = []
    for code in range(8):
        nxl, nxh = (cx, xh) if code & 1 else (xl, cx)
        nyl, nyh = (cy, yh) if code & 2 else (yl, cy)
        nzl, nzh = (cz, zh) if code & 4 else (zl, cz)
        children.append(TreeNode((nxl, nyl, nzl, nxh, nyh, nzh), rd))
    for entry in leaf.entries:
        code = (entry[0] >= cx) + 2 * (entry[1] >= cy) + 4 * (entry[2] >= cz)
        children[code].entries.append(entry)
    leaf.children = children
    leaf.entries = None
    return leaf


class Octree(BaseTree):
    family = "octree"

    def __init__(self, max_depth: int, node_capacity: int,
                 domain: Aabb = UNIT_CUBE):
        super().__init__()
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if node_capacity < 1:
            raise ValueError("node_capacity must be >= 1")
        self.max_depth = max_depth
        self.node_capacity = node_capacity
        self.domain = domain
        self._domain6 = flatten_bound(domain)
        self.root = TreeNode(self._domain6, max_depth)

    def insert(self, p: Point3, payload_id: int) -> None:
        """Descend to the octant leaf owning p, append, split on overflow.

        Splitting cascades while a child still exceeds capacity and has
        depth budget left; a leaf at the depth limit overflows instead.
        """
        x, y, z = p
        xl, yl, zl, xh, yh, zh = self._domain6
        if not (xl <= x <= xh and yl <= y <= yh and zl <= z <= zh):
            raise PointOutsideDomain(f"{tuple(p)} outside domain {self.domain}")
        self._claim_id(payload_id)
        node = self.root
        while node.children is not None:
            xl, yl, zl, xh, yh, zh = node.bound6
            code = (
                (x >= (xl + xh) * 0.5)
                + 2 * (y >= (yl + yh) * 0.5)
                + 4 * (z >= (zl + zh) * 0.5)
            )
            node = node.children[code]
        node.entries.append((x, y, z, payload_id))
        self._entry_count += 1
        cap = self.node_capacity
        if len(node.entries) > cap and node.remaining_depth > 0:
            pending = [node]
            while pending:
                n = pending.pop()
                split_octant(n)
                for child in n.children:
                    if len(child.entries) > cap and child.remaining_depth > 0:
                        pending.append(child)
