"""Exact counting of minimal lattice paths, with and without forbidden nodes.

A minimal path between nodes a and b makes exactly |b_i - a_i| unit moves in
each dimension i, so it never leaves the bounding box of the endpoints. Three
independent engines count the paths that avoid a set of forbidden nodes:

* avoiding_det: a determinant over direction-aligned segment counts,
* avoiding_dp: a dynamic program over the bounding box,
* avoiding_brute: literal depth-first enumeration, the small-size ground truth.

All arithmetic is exact (unbounded integers).
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from faultring.mesh import Coord, bounding_box, delta


class PathEnumerationLimit(RuntimeError):
    """Raised when brute-force enumeration would exceed its path cap."""


@lru_cache(maxsize=None)
def _multinomial(parts: tuple[int, ...]) -> int:
    # Repeated binomial products keep intermediates no larger than the result.
    total = 0
    result = 1
    for p in parts:
        total += p
        result *= math.comb(total, p)
    return result


def multinomial(parts: Iterable[int]) -> int:
    """Multinomial coefficient (sum parts)! / prod(part!); 0 if any part is negative."""
    t = tuple(parts)
    if any(p < 0 for p in t):
        return 0
    return _multinomial(t)


def path_count(a: Coord, b: Coord) -> int:
    """Number of minimal paths between two nodes (1 when a == b)."""
    return multinomial(delta(a, b))


def aligned_count(a: Coord, b: Coord, src: Coord, dst: Coord) -> int:
    """Number of src->dst paths whose every move follows the a->b direction.

    Per dimension the move budget is the src->dst offset, taken positive when
    it points the way a->b does (ties count as positive direction) and negative
    otherwise. Any negative budget kills the count: such a segment cannot be
    part of a minimal a->b path.
    """
    if not len(a) == len(b) == len(src) == len(dst):
        raise ValueError("dimension mismatch")
    signed = []
    for i in range(len(a)):
        move = dst[i] - src[i]
        signed.append(move if b[i] >= a[i] else -move)
    return multinomial(signed)


def restriction_points(a: Coord, b: Coord, obstacles: Iterable[Coord]) -> tuple[Coord, ...]:
    """Obstacles that can actually block a->b: those inside the bounding box.

    Returned in lexicographic order so downstream engines are deterministic.
    Raises ValueError if an endpoint itself is an obstacle.
    """
    obs = set(obstacles)
    if a in obs:
        raise ValueError(f"path source {a!r} lies inside the obstacle set")
    if b in obs:
        raise ValueError(f"path target {b!r} lies inside the obstacle set")
    box = bounding_box(a, b)
    return tuple(sorted(p for p in obs if box.contains(p)))


def _det_cofactor(m: list[list[int]]) -> int:
    size = len(m)
    if size == 1:
        return m[0][0]
    if size == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    sign = 1
    for col in range(size):
        if m[0][col]:
            minor = [row[:col] + row[col + 1:] for row in m[1:]]
            total += sign * m[0][col] * _det_cofactor(minor)
        sign = -sign
    return total


def _det_bareiss(m: list[list[int]]) -> int:
    # Fraction-free elimination: every division below is exact.
    size = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for swap in range(k + 1, size):
                if m[swap][k] != 0:
                    m[k], m[swap] = m[swap], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, size):
            row_i = m[i]
            row_k = m[k]
            factor = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
        prev = pivot
    return sign * m[-1][-1]


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant; cofactor expansion up to 4x4, Bareiss beyond."""
    m = [list(row) for row in matrix]
    if len(m) <= 4:
        return _det_cofactor(m)
    return _det_bareiss(m)


def avoiding_det(a: Coord, b: Coord, points: Sequence[Coord]) -> int:
    """Count minimal a->b paths visiting none of the given points.

    Builds the (m+1) x (m+1) matrix whose column l holds, for source point
    C_l (with C_0 = a), the aligned segment counts into b (row 0) and into
    each C_k (row k). Its determinant is the avoiding-path count: every walk
    through forbidden points is cancelled by a signed pairing.

    Points outside the a->b bounding box contribute a trivial row or column
    and leave the value unchanged. A negative determinant signals a malformed
    point set (duplicates, or a point equal to an endpoint) and raises.
    """
    pts = list(points)
    m = len(pts)
    sources = [a] + pts
    matrix = [[aligned_count(a, b, src, b) for src in sources]]
    for k in range(1, m + 1):
        target = pts[k - 1]
        matrix.append([aligned_count(a, b, src, target) for src in sources])
    value = determinant(matrix)
    if value < 0:
        raise ValueError(
            f"negative path determinant for {a!r}->{b!r}: restriction points malformed"
        )
    return value


def avoiding_dp(a: Coord, b: Coord, forbidden: Iterable[Coord]) -> int:
    """Count minimal a->b paths avoiding `forbidden` by sweeping the bounding box.

    Cells are processed outward from a; each cell sums its predecessors, with
    forbidden cells pinned to zero. Independent of the determinant engine.
    """
    blocked = set(forbidden)
    if a == b:
        return 0 if a in blocked else 1
    n = len(a)
    steps = tuple(1 if b[i] >= a[i] else -1 for i in range(n))
    sizes = tuple(abs(b[i] - a[i]) + 1 for i in range(n))
    local = [1] * n
    for i in range(n - 2, -1, -1):
        local[i] = local[i + 1] * sizes[i + 1]
    counts = [0] * (local[0] * sizes[0])
    for offsets in product(*(range(s) for s in sizes)):
        coord = tuple(a[i] + offsets[i] * steps[i] for i in range(n))
        idx = sum(offsets[i] * local[i] for i in range(n))
        if coord in blocked:
            continue
        if idx == 0:
            counts[0] = 1
            continue
        acc = 0
        for i in range(n):
            if offsets[i]:
                acc += counts[idx - local[i]]
        counts[idx] = acc
    return counts[-1]


def avoiding_brute(a: Coord, b: Coord, forbidden: Iterable[Coord], cap: int = 10**6) -> int:
    """Count minimal a->b paths avoiding `forbidden` by explicit enumeration.

    Walks every minimal path move by move; intended as ground truth at small
    sizes. Raises PathEnumerationLimit when the total path count exceeds cap.
    """
    total = path_count(a, b)
    if total > cap:
        raise PathEnumerationLimit(
            f"{total} minimal paths between {a!r} and {b!r} exceeds cap {cap}"
        )
    blocked = set(forbidden)
    n = len(a)

    def walk(cur: Coord) -> int:
        if cur in blocked:
            return 0
        if cur == b:
            return 1
        acc = 0
        for i in range(n):
            if cur[i] != b[i]:
                step = 1 if b[i] > cur[i] else -1
                acc += walk(cur[:i] + (cur[i] + step,) + cur[i + 1:])
        return acc

    return walk(a)
