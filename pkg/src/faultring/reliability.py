"""Exact hit/miss probabilities for minimal routes against a fault ring.

For a mesh with fault region F, ring R, and blocked set FR = F + R:

* total_paths sums minimal-path counts over unordered pairs of distinct
  non-faulty nodes (geometry only, faults do not reroute anything here),
* miss_paths sums, over unordered pairs of distinct nodes outside FR, the
  number of minimal paths that avoid FR entirely,
* the miss probability is miss_paths / total_paths as an exact fraction,
  and the hit probability is its complement.

Two independent engines compute miss_paths: "dp" sweeps the mesh once per
source node (fast, the default at scale) and "det" evaluates a path
determinant per pair. Cross-check modes rerun pairs on both engines and
fail loudly on any disagreement.

The avoid set defaults to FR ("blocked"). Passing obstacle="faults" instead
counts paths that dodge the fault region F alone, with numerator pairs drawn
outside F; published reference tables use that quantity for interior rings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from multiprocessing import Pool
from typing import Iterable, Literal, Sequence

from faultring.faults import Classification, FaultComplex
from faultring.mesh import Coord, MeshShape
from faultring.paths import avoiding_det, avoiding_dp, multinomial, restriction_points

Engine = Literal["det", "dp"]
EnginePolicy = Literal["auto", "det", "dp"]
CrossCheck = Literal["off", "sample", "full"]
Obstacle = Literal["blocked", "faults"]

_CROSS_CHECK_SAMPLE_LIMIT = 64


def _avoid_set(complex_: FaultComplex, obstacle: Obstacle) -> frozenset[Coord]:
    if obstacle == "blocked":
        return complex_.blocked
    if obstacle == "faults":
        return complex_.faults
    raise ValueError(f"unknown obstacle {obstacle!r}; expected 'blocked' or 'faults'")


class EngineMismatch(RuntimeError):
    """Two exact engines disagreed on a pair; something is deeply wrong."""

    def __init__(self, pair: tuple[Coord, Coord], det_value: int, dp_value: int):
        self.pair = pair
        self.det_value = det_value
        self.dp_value = dp_value
        super().__init__(
            f"engines disagree on pair {pair[0]!r}->{pair[1]!r}: "
            f"determinant {det_value} vs dp {dp_value}"
        )


def total_paths(shape: MeshShape, fault_nodes: Iterable[Coord] = ()) -> int:
    """Sum of minimal-path counts over unordered pairs of distinct non-faulty nodes.

    Counts by offset vector: the number of ordered pairs with a given
    componentwise offset factorizes per dimension, so the full double sum
    collapses to one pass over offset vectors, with small corrections
    subtracting pairs that involve a faulty endpoint.
    """
    faults = {f for f in fault_nodes if shape.contains(f)}
    if shape.node_count - len(faults) < 2:
        raise ValueError("need at least two non-faulty nodes")

    ordered = 0
    for offsets in product(*(range(r) for r in shape.radices)):
        if not any(offsets):
            continue
        ways = 1
        for d, r in zip(offsets, shape.radices):
            ways *= r if d == 0 else 2 * (r - d)
        ordered += ways * multinomial(offsets)

    if faults:
        # Remove ordered pairs with >= 1 faulty endpoint (inclusion-exclusion).
        all_nodes = list(shape.nodes())
        fault_to_any = 0
        for f in faults:
            for v in all_nodes:
                if v != f:
                    fault_to_any += multinomial(tuple(abs(x - y) for x, y in zip(f, v)))
        fault_to_fault = 0
        flist = sorted(faults)
        for i, f in enumerate(flist):
            for g in flist[i + 1:]:
                fault_to_fault += multinomial(tuple(abs(x - y) for x, y in zip(f, g)))
        ordered -= 2 * fault_to_any - 2 * fault_to_fault

    assert ordered % 2 == 0
    return ordered // 2


def _free_nodes(shape: MeshShape, blocked: frozenset[Coord]) -> list[Coord]:
    return [v for v in shape.nodes() if v not in blocked]


def _sweep_source(
    a: Coord,
    radices: tuple[int, ...],
    strides: tuple[int, ...],
    blocked_flat: frozenset[int],
) -> int:
    """Sum of avoiding-path counts from source a to every node outside the blocked set.

    One pass per orthant of the mesh around a; each node is computed exactly
    once, in the orthant matching its componentwise position relative to a.
    Counts are over paths that are minimal for the (a, node) pair and touch
    no blocked node.
    """
    n = len(radices)
    a_flat = sum(c * s for c, s in zip(a, strides))
    counts: dict[int, int] = {a_flat: 1}
    total = 0
    for signs in product((1, -1), repeat=n):
        axes = []
        for i in range(n):
            stride = strides[i]
            if signs[i] == 1:
                # Offset 0 included: unmoved dimensions belong to the + side.
                axes.append([(p * stride, p != a[i]) for p in range(a[i], radices[i])])
            else:
                axes.append([(p * stride, True) for p in range(a[i] - 1, -1, -1)])
        if not all(axes):
            continue
        deltas = tuple(signs[i] * strides[i] for i in range(n))
        for cell in product(*axes):
            flat = 0
            for contrib, _ in cell:
                flat += contrib
            if flat in counts:  # only the source cell reappears
                continue
            if flat in blocked_flat:
                counts[flat] = 0
                continue
            acc = 0
            for i in range(n):
                if cell[i][1]:
                    acc += counts[flat - deltas[i]]
            counts[flat] = acc
            total += acc
    return total


def _sweep_chunk(args: tuple) -> int:
    sources, radices, strides, blocked_flat = args
    return sum(_sweep_source(a, radices, strides, blocked_flat) for a in sources)


def _miss_paths_dp(
    shape: MeshShape, blocked: frozenset[Coord], free: Sequence[Coord], workers: int
) -> int:
    radices = shape.radices
    strides = shape.strides()
    blocked_flat = frozenset(sum(c * s for c, s in zip(v, strides)) for v in blocked)
    if workers <= 1 or len(free) < 2 * workers:
        ordered = sum(_sweep_source(a, radices, strides, blocked_flat) for a in free)
    else:
        chunks = [
            (list(free[k::workers]), radices, strides, blocked_flat) for k in range(workers)
        ]
        with Pool(workers) as pool:
            ordered = sum(pool.map(_sweep_chunk, chunks))
    assert ordered % 2 == 0
    return ordered // 2


def _miss_paths_det(blocked: frozenset[Coord], free: Sequence[Coord]) -> int:
    total = 0
    for i, a in enumerate(free):
        for b in free[i + 1:]:
            total += avoiding_det(a, b, restriction_points(a, b, blocked))
    return total


def _unrank_pair(free: Sequence[Coord], rank: int) -> tuple[Coord, Coord]:
    # Pairs ordered (0,1), (0,2), ..., (1,2), ...; row i holds len(free)-1-i pairs.
    i = 0
    row = len(free) - 1
    while rank >= row:
        rank -= row
        i += 1
        row -= 1
    return free[i], free[i + 1 + rank]


def _cross_check_pairs(free: Sequence[Coord], mode: CrossCheck):
    total = len(free) * (len(free) - 1) // 2
    if mode == "full" or total <= _CROSS_CHECK_SAMPLE_LIMIT:
        for i, a in enumerate(free):
            for b in free[i + 1:]:
                yield a, b
        return
    step = total // _CROSS_CHECK_SAMPLE_LIMIT
    for k in range(_CROSS_CHECK_SAMPLE_LIMIT):
        yield _unrank_pair(free, k * step)


def miss_paths(
    shape: MeshShape,
    complex_: FaultComplex,
    engine: Engine = "dp",
    cross_check: CrossCheck = "off",
    workers: int = 1,
    obstacle: Obstacle = "blocked",
) -> int:
    """Sum of obstacle-avoiding path counts over unordered pairs outside the obstacle.

    The obstacle is FR by default, or F alone with obstacle="faults". With
    cross_check "sample" a deterministic subset of pairs (and with "full"
    every pair) is recomputed on both engines; any disagreement raises
    EngineMismatch naming the offending pair.
    """
    if complex_.is_empty:
        return total_paths(shape)
    avoid = _avoid_set(complex_, obstacle)
    free = _free_nodes(shape, avoid)
    if len(free) < 2:
        return 0

    if engine == "dp":
        result = _miss_paths_dp(shape, avoid, free, workers)
    elif engine == "det":
        result = _miss_paths_det(avoid, free)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    if cross_check != "off":
        checked = 0
        for a, b in _cross_check_pairs(free, cross_check):
            det_value = avoiding_det(a, b, restriction_points(a, b, avoid))
            dp_value = avoiding_dp(a, b, avoid)
            if det_value != dp_value:
                raise EngineMismatch((a, b), det_value, dp_value)
            checked += dp_value
        if cross_check == "full" and checked != result:
            raise RuntimeError(
                f"aggregate disagrees with per-pair recount: {result} vs {checked}"
            )
    return result


@dataclass(frozen=True)
class EngineChoice:
    engine: Engine
    cross_check: CrossCheck
    predicted_det_cost: float
    budget: float


def select_engine(
    shape: MeshShape,
    complex_: FaultComplex,
    policy: EnginePolicy = "auto",
    cross_check: CrossCheck | None = None,
    budget: float = 2e6,
    obstacle: Obstacle = "blocked",
) -> EngineChoice:
    """Pick the miss-path engine for a scenario.

    The determinant engine costs roughly (pairs) * (m + 1)^3 big-integer
    operations, with m the expected number of obstacle nodes inside a random
    pair's bounding box. Auto policy takes the determinant engine (with
    sampled cross-checking) while that estimate stays within budget, and the
    sweep engine beyond it.
    """
    avoid = _avoid_set(complex_, obstacle)
    free = shape.node_count - len(avoid)
    pairs = free * (free - 1) / 2
    box_fraction = 1.0
    for r in shape.radices:
        expected_span = (r * r - 1) / (3 * r) + 1  # mean |x - y| + 1 over a random pair
        box_fraction *= expected_span / r
    expected_m = len(avoid) * box_fraction
    det_cost = pairs * (expected_m + 1) ** 3

    if policy == "det":
        return EngineChoice("det", cross_check or "off", det_cost, budget)
    if policy == "dp":
        return EngineChoice("dp", cross_check or "off", det_cost, budget)
    if det_cost <= budget:
        return EngineChoice("det", cross_check or "sample", det_cost, budget)
    return EngineChoice("dp", cross_check or "off", det_cost, budget)


@dataclass(frozen=True)
class ReliabilityResult:
    """Exact analysis outcome for one scenario.

    Pair convention: unordered pairs of distinct nodes, numerator pairs drawn
    outside the avoid set, denominator pairs outside F. With the default
    avoid set FR, p_hit + p_miss == 1 exactly.
    """

    total_paths: int
    miss_paths: int
    p_miss: Fraction
    p_hit: Fraction
    engine: str
    classification: Classification | None
    pair_convention: str = "unordered-distinct"
    obstacle: str = "blocked"


def compute_reliability(
    shape: MeshShape,
    complex_: FaultComplex,
    engine: EnginePolicy = "auto",
    cross_check: CrossCheck | None = None,
    workers: int = 1,
    budget: float = 2e6,
    obstacle: Obstacle = "blocked",
) -> ReliabilityResult:
    """Exact probability that a random minimal route confronts the fault ring.

    A route "hits" when it visits any node of the avoid set (endpoints
    included); it "misses" when it dodges that set entirely. Routes are
    weighted uniformly over all minimal paths between unordered pairs of
    distinct non-faulty nodes.
    """
    choice = select_engine(shape, complex_, engine, cross_check, budget, obstacle)
    denominator = total_paths(shape, complex_.faults)
    if denominator <= 0:
        raise ValueError("no paths between non-faulty nodes; denominator is empty")
    if complex_.is_empty:
        # Nothing to hit: every path misses.
        return ReliabilityResult(
            total_paths=denominator,
            miss_paths=denominator,
            p_miss=Fraction(1),
            p_hit=Fraction(0),
            engine=choice.engine,
            classification=None,
            obstacle=obstacle,
        )
    missing = miss_paths(
        shape, complex_, choice.engine, choice.cross_check, workers, obstacle
    )
    p_miss = Fraction(missing, denominator)
    if not 0 <= p_miss <= 1:
        raise AssertionError(f"miss probability {p_miss} outside [0, 1]")
    return ReliabilityResult(
        total_paths=denominator,
        miss_paths=missing,
        p_miss=p_miss,
        p_hit=1 - p_miss,
        engine=choice.engine,
        classification=complex_.classification,
        obstacle=obstacle,
    )


def format_probability(value: Fraction, places: int = 3) -> str:
    """Render an exact fraction as a decimal string, round half to even."""
    if places < 0:
        raise ValueError("places must be >= 0")
    num, den = value.numerator, value.denominator
    negative = num < 0
    num = abs(num)
    scaled, remainder = divmod(num * 10**places, den)
    doubled = 2 * remainder
    if doubled > den or (doubled == den and scaled % 2 == 1):
        scaled += 1
    text = str(scaled)
    if places:
        text = text.rjust(places + 1, "0")
        text = f"{text[:-places]}.{text[-places:]}"
    return f"-{text}" if negative else text
