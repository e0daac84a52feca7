"""Ground truth for fixed-radius pair search: exhaustive enumeration.

This module deliberately knows nothing about the tree structures; it
checks every one of the n*(n-1)/2 point pairs. The scan is blocked and
vectorized with numpy so verification stays usable at tens of thousands
of points, but it remains a full O(n^2) comparison. The squared-distance
test uses the same expression order as the tree search kernels
(dx*dx, then += dy*dy, then += dz*dz, compared against r*r), so both
sides classify borderline pairs identically in IEEE double arithmetic.
"""

from __future__ import annotations

import math

import numpy as np

from .core import NegativeRadius, NeighborPair

_BLOCK = 512


def _iter_hits(xs, ys, zs, r2):
    """Yield (i_array, j_array, s_array) of squared-distance hits over
    the strictly-upper triangle, scanning block by block with reused
    buffers."""
    n = xs.shape[0]
    block = _BLOCK
    tri = np.triu(np.ones((min(block, n),) * 2, dtype=bool), k=1)
    dbuf = np.empty((min(block, n),) * 2)
    sbuf = np.empty((min(block, n),) * 2)
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        ni = i1 - i0
        bx = xs[i0:i1, None]
        by = ys[i0:i1, None]
        bz = zs[i0:i1, None]
        for j0 in range(i0, n, block):
            j1 = min(j0 + block, n)
            nj = j1 - j0
            d = dbuf[:ni, :nj]
            s = sbuf[:ni, :nj]
            np.subtract(bx, xs[None, j0:j1], out=d)
            np.multiply(d, d, out=s)
            np.subtract(by, ys[None, j0:j1], out=d)
            d *= d
            s += d
            np.subtract(bz, zs[None, j0:j1], out=d)
            d *= d
            s += d
            hit = s <= r2
            if j0 == i0:
                hit &= tri[:ni, :nj]
            ii, jj = np.nonzero(hit)
            if ii.size:
                yield ii + i0, jj + j0, s[ii, jj]


def brute_force_pairs(points: list, r: float) -> list:
    """All pairs at distance <= r among (Point3, payload_id) items.

    Pairs are canonical: ``a < b`` by payload id, result sorted by
    (a, b). Payload ids must be unique.
    """
    if r < 0:
        raise NegativeRadius(f"radius must be >= 0, got {r}")
    n = len(points)
    if n < 2:
        return []
    xs = np.fromiter((p[0][0] for p in points), dtype=np.float64, count=n)
    ys = np.fromiter((p[0][1] for p in points), dtype=np.float64, count=n)
    zs = np.fromiter((p[0][2] for p in points), dtype=np.float64, count=n)
    ids = [p[1] for p in points]

    sqrt = math.sqrt
    out = []
    emit = out.append
    for ii, jj, svals in _iter_hits(xs, ys, zs, r * r):
        for i, j, sv in zip(ii.tolist(), jj.tolist(), svals.tolist()):
            ida = ids[i]
            idb = ids[j]
            if ida < idb:
                emit(NeighborPair(ida, idb, sqrt(sv)))
            else:
                emit(NeighborPair(idb, ida, sqrt(sv)))
    out.sort()
    return out


def brute_force_pair_count(points: list, r: float) -> int:
    """Number of pairs at distance <= r; same scan as
    :func:`brute_force_pairs` without materializing the pairs."""
    if r < 0:
        raise NegativeRadius(f"radius must be >= 0, got {r}")
    n = len(points)
    if n < 2:
        return 0
    xs = np.fromiter((p[0][0] for p in points), dtype=np.float64, count=n)
    ys = np.fromiter((p[0][1] for p in points), dtype=np.float64, count=n)
    zs = np.fromiter((p[0][2] for p in points), dtype=np.float64, count=n)
    return sum(ii.size for ii, _, _ in _iter_hits(xs, ys, zs, r * r))


def expected_pair_count(n: int, r: float) -> float:
    """Boundary-ignoring expected pair count for n uniform points in the
    unit cube: n*(n-1)/2 * (4/3)*pi*r^3.

    Valid only for r much smaller than 1; edge effects make the true
    expectation slightly lower, and the estimate is meaningless once r
    approaches the cube diagonal.
    """
    return n * (n - 1) / 2.0 * (4.0 / 3.0) * math.pi * r**3
