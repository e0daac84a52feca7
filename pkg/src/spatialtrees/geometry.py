"""3-D geometric primitives shared by every tree family.

Points and axis-aligned boxes are plain named tuples: cheap to build,
immutable, and directly unpackable inside the search hot loops. Boxes are
closed on every face, so a point lying exactly on a face counts as
contained and the box-to-box minimum distance is never an overestimate.
All coordinates are double precision.
"""

from __future__ import annotations

import math
from typing import NamedTuple


class Point3(NamedTuple):
    """A position in 3-space. Coordinates are expected to be finite."""

    x: float
    y: float
    z: float


class Aabb(NamedTuple):
    """Axis-aligned box spanning [min, max] on each axis.

    Degenerate boxes (zero extent on one or more axes) are valid.
    """

    min: Point3
    max: Point3


UNIT_CUBE = Aabb(Point3(0.0, 0.0, 0.0), Point3(1.0, 1.0, 1.0))


def is_finite_point(p: Point3) -> bool:
    return math.isfinite(p[0]) and math.isfinite(p[1]) and math.isfinite(p[2])


def is_valid_aabb(box: Aabb) -> bool:
    """min <= max on every axis, with finite corners."""
    (xl, yl, zl), (xh, yh, zh) = box
    return (
        is_finite_point(box.min)
        and is_finite_point(box.max)
        and xl <= xh
        and yl <= yh
        and zl <= zh
    )


def distance(p: Point3, q: Point3) -> float:
    """Euclidean distance between two points."""
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    dz = p[2] - q[2]
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def min_distance_boxes(a: Aabb, b: Aabb) -> float:
    """Minimum Euclidean distance between any point of a and any point of b.

    Zero when the boxes overlap or touch. Per axis the gap is
    max(0, a.min - b.max, b.min - a.max); the result is the norm of the
    gap vector.
    """
    (axl, ayl, azl), (axh, ayh, azh) = a
    (bxl, byl, bzl), (bxh, byh, bzh) = b
    gx = axl - bxh
    t = bxl - axh
    if t > gx:
        gx = t
    if gx < 0.0:
        gx = 0.0
    gy = ayl - byh
    t = byl - ayh
    if t > gy:
        gy = t
    if gy < 0.0:
        gy = 0.0
    gz = azl - bzh
    t = bzl - azh
    if t > gz:
        gz = t
    if gz < 0.0:
        gz = 0.0
    return math.sqrt(gx * gx + gy * gy + gz * gz)


def contains(box: Aabb, p: Point3) -> bool:
    """True iff p lies inside the closed box (faces included)."""
    (xl, yl, zl), (xh, yh, zh) = box
    return xl <= p[0] <= xh and yl <= p[1] <= yh and zl <= p[2] <= zh


def enlarge(box: Aabb, p: Point3) -> Aabb:
    """Smallest box containing both `box` and `p`."""
    (xl, yl, zl), (xh, yh, zh) = box
    x, y, z = p
    return Aabb(
        Point3(x if x < xl else xl, y if y < yl else yl, z if z < zl else zl),
        Point3(x if x > xh else xh, y if y > yh else yh, z if z > zh else zh),
    )


def combine(a: Aabb, b: Aabb) -> Aabb:
    """Smallest box containing both boxes."""
    (axl, ayl, azl), (axh, ayh, azh) = a
    (bxl, byl, bzl), (bxh, byh, bzh) = b
    return Aabb(
        Point3(min(axl, bxl), min(ayl, byl), min(azl, bzl)),
        Point3(max(axh, bxh), max(ayh, byh), max(azh, bzh)),
    )


def volume(box: Aabb) -> float:
    (xl, yl, zl), (xh, yh, zh) = box
    return (xh - xl) * (yh - yl) * (zh - zl)


def surface_area(box: Aabb) -> float:
    """2*(wh + wd + hd) for extents w, h, d. Degenerate axes contribute 0."""
    (xl, yl, zl), (xh, yh, zh) = box
    w = xh - xl
    h = yh - yl
    d = zh - zl
    return 2.0 * (w * h + w * d + h * d)


def center(box: Aabb) -> Point3:
    (xl, yl, zl), (xh, yh, zh) = box
    return Point3((xl + xh) * 0.5, (yl + yh) * 0.5, (zl + zh) * 0.5)


def point_box(p: Point3) -> Aabb:
    """Zero-extent box at p."""
    return Aabb(p, p)
