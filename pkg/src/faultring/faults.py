"""Fault regions, the rings of healthy nodes around them, and validation.

A fault region F is a set of failed nodes. Its ring is every healthy node
within Chebyshev distance exactly 1 of F, the hollow one-node-thick shell
clipped to the mesh. The blocked set F plus ring is what a minimal path must
avoid to "miss" the fault neighborhood entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Union

from faultring.mesh import Coord, MeshShape, is_connected, require_node


class Classification(str, Enum):
    """Ring when the region is interior; chain when it meets a mesh border."""

    RING = "ring"
    CHAIN = "chain"


@dataclass(frozen=True)
class RectFault:
    """Axis-aligned block of faulty nodes anchored at its minimum corner.

    extents counts nodes per dimension, so the block spans
    origin[i] .. origin[i] + extents[i] - 1 inclusive.
    """

    origin: Coord
    extents: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "origin", tuple(int(x) for x in self.origin))
        object.__setattr__(self, "extents", tuple(int(x) for x in self.extents))
        if len(self.origin) != len(self.extents):
            raise ValueError("origin and extents dimension mismatch")
        for i, e in enumerate(self.extents):
            if e < 1:
                raise ValueError(f"dimension {i}: extent must be >= 1, got {e}")


@dataclass(frozen=True)
class OverlapFault:
    """Union of rectangular blocks that are meant to overlap or touch."""

    rects: tuple[RectFault, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rects", tuple(self.rects))


@dataclass(frozen=True)
class ArbitraryFault:
    """Explicit set of faulty nodes with no shape assumption."""

    nodes: frozenset[Coord]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(tuple(v) for v in self.nodes))


FaultSpec = Union[RectFault, OverlapFault, ArbitraryFault]


@dataclass(frozen=True)
class FaultComplex:
    """A fault region together with its ring and combined blocked set.

    An empty complex (no faults) has empty sets and classification None.
    """

    faults: frozenset[Coord]
    ring: frozenset[Coord]
    blocked: frozenset[Coord]
    classification: Classification | None

    @property
    def is_empty(self) -> bool:
        return not self.faults


def expand_rectangular(shape: MeshShape, origin: Coord, extents: tuple[int, ...]) -> set[Coord]:
    """Node set of a rectangular block; raises if it leaves the mesh."""
    if len(origin) != shape.n or len(extents) != shape.n:
        raise ValueError(
            f"block is {len(origin)}-dimensional but mesh has {shape.n} dimensions"
        )
    require_node(shape, tuple(origin), "block origin")
    for i, (o, e, r) in enumerate(zip(origin, extents, shape.radices)):
        if e < 1:
            raise ValueError(f"dimension {i}: extent must be >= 1, got {e}")
        if o + e > r:
            raise ValueError(
                f"dimension {i}: block spans {o}..{o + e - 1} but mesh allows 0..{r - 1}"
            )
    return set(product(*(range(o, o + e) for o, e in zip(origin, extents))))


def ring_of(shape: MeshShape, fault_nodes: Iterable[Coord]) -> set[Coord]:
    """Healthy nodes at Chebyshev distance exactly 1 from the fault set."""
    faults = set(fault_nodes)
    if not faults:
        raise ValueError("ring of an empty fault set is undefined")
    n = shape.n
    offsets = [off for off in product((-1, 0, 1), repeat=n) if any(off)]
    shell: set[Coord] = set()
    for f in faults:
        for off in offsets:
            v = tuple(f[i] + off[i] for i in range(n))
            if shape.contains(v):
                shell.add(v)
    return shell - faults


def classify(shape: MeshShape, fault_nodes: Iterable[Coord]) -> Classification:
    """Chain when the region meets any mesh border, ring otherwise.

    Only the fault region itself decides; a ring whose shell gets clipped by
    the border still classifies as a ring.
    """
    faults = set(fault_nodes)
    if not faults:
        raise ValueError("cannot classify an empty fault set")
    if any(shape.on_boundary(f) for f in faults):
        return Classification.CHAIN
    return Classification.RING


def fault_nodes_of(shape: MeshShape, spec: FaultSpec) -> set[Coord]:
    """Expand a fault description into its node set, validating bounds."""
    if isinstance(spec, RectFault):
        return expand_rectangular(shape, spec.origin, spec.extents)
    if isinstance(spec, OverlapFault):
        nodes: set[Coord] = set()
        for rect in spec.rects:
            nodes |= expand_rectangular(shape, rect.origin, rect.extents)
        return nodes
    if isinstance(spec, ArbitraryFault):
        for v in spec.nodes:
            require_node(shape, v, "fault node")
        return set(spec.nodes)
    raise TypeError(f"unknown fault specification {type(spec).__name__}")


def build_complex(shape: MeshShape, spec: FaultSpec | None) -> FaultComplex:
    """Construct the fault region, ring, and blocked set for one description.

    spec None (or an empty arbitrary set) yields the empty complex.
    """
    faults = fault_nodes_of(shape, spec) if spec is not None else set()
    if not faults:
        return FaultComplex(frozenset(), frozenset(), frozenset(), None)
    ring = ring_of(shape, faults)
    return FaultComplex(
        faults=frozenset(faults),
        ring=frozenset(ring),
        blocked=frozenset(faults | ring),
        classification=classify(shape, faults),
    )


@dataclass(frozen=True)
class Finding:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Finding, ...]
    infos: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _rect_gap(a: RectFault, b: RectFault) -> int:
    """Chebyshev distance between two blocks' node sets (0 when they intersect)."""
    gap = 0
    for i in range(len(a.origin)):
        a_lo, a_hi = a.origin[i], a.origin[i] + a.extents[i] - 1
        b_lo, b_hi = b.origin[i], b.origin[i] + b.extents[i] - 1
        gap = max(gap, a_lo - b_hi, b_lo - a_hi)
    return gap


def validate_complex(
    shape: MeshShape, complex_: FaultComplex, spec: FaultSpec | None = None
) -> ValidationReport:
    """Check a fault complex against the analysis preconditions.

    Violations block analysis (CLI exit code 3); infos are advisory, e.g. the
    blocked set covering the whole mesh, which just pins the miss probability
    to zero.
    """
    violations: list[Finding] = []
    infos: list[Finding] = []

    outside = sorted(v for v in complex_.faults if not shape.contains(v))
    if outside:
        violations.append(
            Finding("fault-outside-mesh", f"fault nodes outside the mesh: {outside[:5]}")
        )

    in_mesh_faults = {v for v in complex_.faults if shape.contains(v)}
    healthy = shape.node_count - len(in_mesh_faults)
    if healthy <= 0:
        violations.append(Finding("all-nodes-faulty", "every node is faulty"))
    else:
        if healthy < 2:
            violations.append(
                Finding("too-few-healthy", "fewer than two healthy nodes; no pairs to route")
            )
        if not is_connected(shape, in_mesh_faults):
            violations.append(
                Finding("disconnected", "fault region disconnects the healthy subgraph")
            )

    free_outside = shape.node_count - len(complex_.blocked)
    if not complex_.is_empty and free_outside < 2:
        infos.append(
            Finding(
                "blocked-covers-mesh",
                "fewer than two nodes lie outside the fault ring; "
                "every route confronts it and the miss probability is exactly 0",
            )
        )

    if isinstance(spec, OverlapFault):
        if len(spec.rects) < 2:
            violations.append(
                Finding("overlap-too-few", "overlap description needs at least two blocks")
            )
        for i in range(len(spec.rects)):
            for j in range(i + 1, len(spec.rects)):
                if _rect_gap(spec.rects[i], spec.rects[j]) > 1:
                    violations.append(
                        Finding(
                            "overlap-disjoint",
                            f"blocks {i} and {j} neither intersect nor touch",
                        )
                    )
    if isinstance(spec, RectFault):
        infos.append(Finding("convex-by-construction", "rectangular region is convex"))

    return ValidationReport(tuple(violations), tuple(infos))
