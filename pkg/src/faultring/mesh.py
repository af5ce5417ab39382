"""Mesh geometry: shapes, coordinates, link counts, neighborhoods, connectivity.

Coordinates are 0-based integer tuples, one component per dimension; component
i ranges over 0 .. R_i - 1 for a mesh with radices (R_1, ..., R_n). Two nodes
are linked when they differ by exactly one in exactly one component.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator

Coord = tuple[int, ...]


@dataclass(frozen=True)
class MeshShape:
    """An n-dimensional mesh given by its radices (node count per dimension)."""

    radices: tuple[int, ...]

    def __post_init__(self) -> None:
        radices = tuple(int(r) for r in self.radices)
        object.__setattr__(self, "radices", radices)
        if not radices:
            raise ValueError("mesh needs at least one dimension")
        for i, r in enumerate(radices):
            if r < 2:
                raise ValueError(f"dimension {i}: radix must be >= 2, got {r}")

    @property
    def n(self) -> int:
        return len(self.radices)

    @property
    def node_count(self) -> int:
        return math.prod(self.radices)

    def contains(self, v: Coord) -> bool:
        if len(v) != self.n:
            return False
        return all(0 <= x < r for x, r in zip(v, self.radices))

    def on_boundary(self, v: Coord) -> bool:
        """True when some component sits on a face of the mesh."""
        return any(x == 0 or x == r - 1 for x, r in zip(v, self.radices))

    def nodes(self) -> Iterator[Coord]:
        """All nodes in row-major order (last dimension varies fastest)."""
        return product(*(range(r) for r in self.radices))

    def strides(self) -> tuple[int, ...]:
        """Row-major strides: flat(v) == sum(x * s for x, s in zip(v, strides))."""
        out = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            out[i] = out[i + 1] * self.radices[i + 1]
        return tuple(out)


def require_node(shape: MeshShape, v: Coord, name: str = "node") -> None:
    if not shape.contains(v):
        raise ValueError(f"{name} {v!r} is not inside mesh {'x'.join(map(str, shape.radices))}")


def link_count_formula(shape: MeshShape) -> int:
    """Link count via inclusion-exclusion over radix products.

    Every node opens one link per dimension except on that dimension's upper
    face, so n * prod(R) overcounts by, for each dimension, the product of the
    other radices. Lower-order subset products cancel and do not appear.
    """
    n = shape.n
    total = n * math.prod(shape.radices)
    for subset in combinations(shape.radices, n - 1):
        total -= math.prod(subset)
    return total


def link_count_direct(shape: MeshShape) -> int:
    """Link count by direct per-dimension edge counting; oracle for the closed form."""
    total = 0
    for i, r in enumerate(shape.radices):
        others = math.prod(shape.radices[:i] + shape.radices[i + 1:])
        total += (r - 1) * others
    return total


def neighbors(shape: MeshShape, v: Coord) -> set[Coord]:
    """All nodes one link away from v."""
    require_node(shape, v)
    out: set[Coord] = set()
    for i in range(shape.n):
        for step in (-1, 1):
            x = v[i] + step
            if 0 <= x < shape.radices[i]:
                out.add(v[:i] + (x,) + v[i + 1:])
    return out


def delta(a: Coord, b: Coord) -> tuple[int, ...]:
    """Componentwise absolute offsets between two coordinates."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(abs(x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class Box:
    """Axis-aligned block of nodes given by its componentwise corners."""

    lo: Coord
    hi: Coord

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi):
            raise ValueError("corner dimension mismatch")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise ValueError("lo corner must not exceed hi corner")

    def contains(self, v: Coord) -> bool:
        if len(v) != len(self.lo):
            return False
        return all(l <= x <= h for x, l, h in zip(v, self.lo, self.hi))

    @property
    def volume(self) -> int:
        return math.prod(h - l + 1 for l, h in zip(self.lo, self.hi))

    def nodes(self) -> Iterator[Coord]:
        return product(*(range(l, h + 1) for l, h in zip(self.lo, self.hi)))


def bounding_box(a: Coord, b: Coord) -> Box:
    """Smallest axis-aligned block containing both endpoints."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    lo = tuple(min(x, y) for x, y in zip(a, b))
    hi = tuple(max(x, y) for x, y in zip(a, b))
    return Box(lo, hi)


def is_connected(shape: MeshShape, faulty: Iterable[Coord] = ()) -> bool:
    """True when the subgraph on non-faulty nodes is connected.

    Raises ValueError if every node is faulty.
    """
    dead = set(faulty)
    alive_total = shape.node_count - sum(1 for f in dead if shape.contains(f))
    if alive_total <= 0:
        raise ValueError("all nodes are faulty; connectivity is undefined")
    start = next(v for v in shape.nodes() if v not in dead)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nb in neighbors(shape, cur):
            if nb not in dead and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == alive_total
