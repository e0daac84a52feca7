"""R-tree: a bounding-volume hierarchy over point entries.

Unlike the decomposition trees there is no fixed domain: node boxes are
minimum bounding boxes (MBRs) of their subtrees and may overlap.
Insertion descends by least volume enlargement and splits overflowing
nodes with the quadratic seed rule; splits propagate upward, so all
leaves stay at the same level and every node except the root holds
between ``min_fill`` and ``degree`` entries or children.

Points are stored as zero-extent boxes, which keeps all MBR arithmetic
uniform. The depth-budget field of the shared node type is unused here.
"""

from __future__ import annotations

import math

from .core import BaseTree, TreeNode
from .geometry import Point3


def _default_min_fill(degree: int) -> int:
    return max(1, math.ceil(0.4 * degree))


def choose_subtree(node: TreeNode, p: Point3) -> TreeNode:
    """Child whose MBR needs the least volume enlargement to cover p.

    Ties go to the child with the smaller current volume, then to the
    earliest child in insertion order.
    """
    x, y, z = p
    best = None
    best_delta = best_vol = 0.0
    for child in node.children:
        xl, yl, zl, xh, yh, zh = child.bound6
        vol = (xh - xl) * (yh - yl) * (zh - zl)
        nxl = x if x < xl else xl
        nyl = y if y < yl else yl
        nzl = z if z < zl else zl
        nxh = x if x > xh else xh
        nyh = y if y > yh else yh
        nzh = z if z > zh else zh
        delta = (nxh - nxl) * (nyh - nyl) * (nzh - nzl) - vol
        if (best is None or delta < best_delta
                or (delta == best_delta and vol < best_vol)):
            best = child
            best_delta = delta
            best_vol = vol
    return best


def _combine6(a: tuple, b: tuple) -> tuple:
    return (
        a[0] if a[0] < b[0] else b[0],
        a[1] if a[1] < b[1] else b[1],
        a[2] if a[2] < b[2] else b[2],
        a[3] if a[3] > b[3] else b[3],
        a[4] if a[4] > b[4] else b[4],
        a[5] if a[5] > b[5] else b[5],
    )


def _volume6(b: tuple) -> float:
    return (b[3] - b[0]) * (b[4] - b[1]) * (b[5] - b[2])


def quadratic_split(node: TreeNode, min_fill: int) -> tuple:
    """Split an overflowing node into two, returning the new pair.

    Seeds are the two members whose joint MBR wastes the most volume
    (joint volume minus their own volumes). Each remaining member joins
    the group whose MBR grows least, with ties broken by smaller group
    volume, then fewer members, then the first group; once a group must
    take every remaining member to reach ``min_fill``, it does. Both
    outputs end within the fill bounds.
    """
    is_leaf = node.children is None
    items = node.entries if is_leaf else node.children
    if is_leaf:
        boxes = [(e[0], e[1], e[2], e[0], e[1], e[2]) for e in items]
    else:
        boxes = [c.bound6 for c in items]
    k = len(items)

    seed_a = 0
    seed_b = 1
    worst = None
    for i in range(k - 1):
        bi = boxes[i]
        vi = _volume6(bi)
        for j in range(i + 1, k):
            bj = boxes[j]
            dead = _volume6(_combine6(bi, bj)) - vi - _volume6(bj)
            if worst is None or dead > worst:
                worst = dead
                seed_a = i
                seed_b = j

    group_a = [items[seed_a]]
    group_b = [items[seed_b]]
    mbr_a = boxes[seed_a]
    mbr_b = boxes[seed_b]
    rest = [idx for idx in range(k) if idx != seed_a and idx != seed_b]
    remaining = len(rest)
    for idx in rest:
        if len(group_a) + remaining == min_fill:
            group_a.extend(items[i] for i in rest[len(rest) - remaining:])
            for i in rest[len(rest) - remaining:]:
                mbr_a = _combine6(mbr_a, boxes[i])
            break
        if len(group_b) + remaining == min_fill:
            group_b.extend(items[i] for i in rest[len(rest) - remaining:])
            for i in rest[len(rest) - remaining:]:
                mbr_b = _combine6(mbr_b, boxes[i])
            break
        box = boxes[idx]
        vol_a = _volume6(mbr_a)
        vol_b = _volume6(mbr_b)
        delta_a = _volume6(_combine6(mbr_a, box)) - vol_a
        delta_b = _volume6(_combine6(mbr_b, box)) - vol_b
        if delta_a < delta_b:
            to_a = True
        elif delta_b < delta_a:
            to_a = False
        elif vol_a != vol_b:
            to_a = vol_a < vol_b
        else:
            to_a = len(group_a) <= len(group_b)
        if to_a:
            group_a.append(items[idx])
            mbr_a = _combine6(mbr_a, box)
        else:
            group_b.append(items[idx])
            mbr_b = _combine6(mbr_b, box)
        remaining -= 1

    node_a = TreeNode(mbr_a, 0)
    node_b = TreeNode(mbr_b, 0)
    if is_leaf:
        node_a.entries = group_a
        node_b.entries = group_b
    else:
        node_a.entries = None
        node_a.children = group_a
        node_b.entries = None
        node_b.children = group_b
    return node_a, node_b


class RTree(BaseTree):
    family = "rtree"

    def __init__(self, degree: int, min_fill: int = None):
        super().__init__()
        if degree < 2:
            raise ValueError("degree must be >= 2")
        if min_fill is None:
            min_fill = _default_min_fill(degree)
        if not 1 <= min_fill <= math.ceil(degree / 2):
            raise ValueError("min_fill must be in [1, ceil(degree / 2)]")
        self.degree = degree
        self.min_fill = min_fill
        self.root = TreeNode((0.0, 0.0, 0.0, 0.0, 0.0, 0.0), 0)

    def insert(self, p: Point3, payload_id: int) -> None:
        """Descend by least enlargement, growing MBRs along the path;
        split overflowing nodes upward (a root split adds one level)."""
        x, y, z = p
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise ValueError(f"point must be finite, got {tuple(p)}")
        self._claim_id(payload_id)

        if self._entry_count == 0:
            root = self.root
            root.bound6 = (x, y, z, x, y, z)
            root.entries.append((x, y, z, payload_id))
            self._entry_count = 1
            return

        path = []
        node = self.root
        while True:
            xl, yl, zl, xh, yh, zh = node.bound6
            node.bound6 = (
                x if x < xl else xl,
                y if y < yl else yl,
                z if z < zl else zl,
                x if x > xh else xh,
                y if y > yh else yh,
                z if z > zh else zh,
            )
            if node.children is None:
                break
            path.append(node)
            node = choose_subtree(node, p)
        node.entries.append((x, y, z, payload_id))
        self._entry_count += 1

        degree = self.degree
        if len(node.entries) <= degree:
            return
        min_fill = self.min_fill
        while True:
            half_a, half_b = quadratic_split(node, min_fill)
            if not path:
                new_root = TreeNode(_combine6(half_a.bound6, half_b.bound6), 0)
                new_root.entries = None
                new_root.children = [half_a, half_b]
                self.root = new_root
                return
            parent = path.pop()
            idx = parent.children.index(node)
            parent.children[idx] = half_a
            parent.children.append(half_b)
            if len(parent.children) <= degree:
                return
            node = parent
