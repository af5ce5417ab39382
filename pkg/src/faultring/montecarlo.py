"""Seeded Monte-Carlo estimation of the fault-ring hit probability.

Each sample draws an unordered pair of distinct non-faulty nodes uniformly,
then a uniformly random minimal path between them, and records whether the
path visits the avoid set (endpoints included). Samples are weighted by the
pair's minimal-path count, so the weighted ratio estimates the same
path-weighted probability the exact engine computes, under either avoid-set
choice (the ring-augmented region by default, the bare fault region with
obstacle="faults").

Determinism: sample i uses its own generator seeded from (seed, i), so the
estimate is bit-identical for a given (seed, samples) regardless of worker
count or scheduling. Weight sums are exact integers; floats appear only in
the final ratio and standard error.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Sequence

from faultring.faults import FaultComplex
from faultring.mesh import Coord, MeshShape
from faultring.paths import multinomial
from faultring.reliability import EnginePolicy, Obstacle, _avoid_set, compute_reliability

_SEED_SPAN = 2**64


@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    """Weighted-ratio estimate with exact integer tallies kept for audit."""

    p_hat: float
    std_error: float
    samples: int
    seed: int
    workers: int
    hit_weight: int
    total_weight: int
    hit_weight_sq: int
    total_weight_sq: int
    estimator: str = "weighted-ratio"


def sample_minimal_path(rng: random.Random, a: Coord, b: Coord) -> list[Coord]:
    """Draw a uniformly random minimal path from a to b, inclusive of both.

    At each step a dimension is chosen with probability proportional to its
    remaining offset, which makes every move sequence equally likely.
    """
    n = len(a)
    remaining = [abs(b[i] - a[i]) for i in range(n)]
    steps = [1 if b[i] >= a[i] else -1 for i in range(n)]
    cur = list(a)
    path = [tuple(cur)]
    left = sum(remaining)
    while left:
        pick = rng.randrange(left)
        for i in range(n):
            if pick < remaining[i]:
                break
            pick -= remaining[i]
        cur[i] += steps[i]
        remaining[i] -= 1
        left -= 1
        path.append(tuple(cur))
    return path


def _tally_range(
    coords: Sequence[Coord],
    flats: Sequence[int],
    strides: Sequence[int],
    avoid_flat: frozenset[int],
    seed: int,
    start: int,
    stop: int,
) -> tuple[int, int, int, int]:
    population = len(coords)
    n = len(strides)
    base = seed * _SEED_SPAN
    hit_w = 0
    tot_w = 0
    hit_w2 = 0
    tot_w2 = 0
    for index in range(start, stop):
        rng = random.Random(base + index)
        first = rng.randrange(population)
        second = rng.randrange(population - 1)
        if second >= first:
            second += 1
        a = coords[first]
        b = coords[second]
        offsets = tuple(abs(x - y) for x, y in zip(a, b))
        weight = multinomial(offsets)

        if flats[first] in avoid_flat or flats[second] in avoid_flat:
            hit = True
        else:
            hit = False
            remaining = list(offsets)
            moves = [strides[i] if b[i] >= a[i] else -strides[i] for i in range(n)]
            cur = flats[first]
            left = sum(remaining)
            while left:
                pick = rng.randrange(left)
                for i in range(n):
                    if pick < remaining[i]:
                        break
                    pick -= remaining[i]
                cur += moves[i]
                remaining[i] -= 1
                left -= 1
                if cur in avoid_flat:
                    hit = True
                    break

        tot_w += weight
        tot_w2 += weight * weight
        if hit:
            hit_w += weight
            hit_w2 += weight * weight
    return hit_w, tot_w, hit_w2, tot_w2


def _tally_star(args: tuple) -> tuple[int, int, int, int]:
    return _tally_range(*args)


def estimate_p_hit(
    shape: MeshShape,
    complex_: FaultComplex,
    config: McConfig,
    obstacle: Obstacle = "blocked",
) -> McEstimate:
    """Monte-Carlo estimate of the probability a minimal route confronts the ring.

    Raises ValueError when fewer than two non-faulty nodes exist. With no
    faults at all the estimate is exactly 0.0.
    """
    strides = shape.strides()
    coords = [v for v in shape.nodes() if v not in complex_.faults]
    if len(coords) < 2:
        raise ValueError("need at least two non-faulty nodes to sample pairs")
    flats = [sum(c * s for c, s in zip(v, strides)) for v in coords]
    avoid_flat = frozenset(
        sum(c * s for c, s in zip(v, strides)) for v in _avoid_set(complex_, obstacle)
    )

    workers = min(config.workers, config.samples)
    if workers <= 1:
        tallies = [
            _tally_range(coords, flats, strides, avoid_flat, config.seed, 0, config.samples)
        ]
    else:
        bounds = [config.samples * k // workers for k in range(workers + 1)]
        jobs = [
            (coords, flats, strides, avoid_flat, config.seed, bounds[k], bounds[k + 1])
            for k in range(workers)
        ]
        with Pool(workers) as pool:
            tallies = pool.map(_tally_star, jobs)

    hit_w = sum(t[0] for t in tallies)
    tot_w = sum(t[1] for t in tallies)
    hit_w2 = sum(t[2] for t in tallies)
    tot_w2 = sum(t[3] for t in tallies)

    ratio = Fraction(hit_w, tot_w)
    p_hat = float(ratio)
    if config.samples > 1:
        # Delta-method variance of a ratio estimator, all moments exact.
        spread = hit_w2 - 2 * ratio * hit_w2 + ratio * ratio * tot_w2
        spread = spread * Fraction(config.samples, config.samples - 1)
        std_error = math.sqrt(float(spread / (tot_w * tot_w))) if spread > 0 else 0.0
    else:
        std_error = 0.0
    return McEstimate(
        p_hat=p_hat,
        std_error=std_error,
        samples=config.samples,
        seed=config.seed,
        workers=config.workers,
        hit_weight=hit_w,
        total_weight=tot_w,
        hit_weight_sq=hit_w2,
        total_weight_sq=tot_w2,
    )


@dataclass(frozen=True)
class McComparison:
    exact_p_hit: Fraction
    estimate: McEstimate
    abs_error: float
    sigma_distance: float
    ok: bool


def compare_with_exact(
    shape: MeshShape,
    complex_: FaultComplex,
    config: McConfig,
    engine: EnginePolicy = "auto",
    sigma_limit: float = 4.0,
    obstacle: Obstacle = "blocked",
) -> McComparison:
    """Run both the exact engine and the estimator and flag disagreement.

    Disagreement beyond sigma_limit standard errors (or any disagreement when
    the standard error is zero) fails the comparison.
    """
    exact = compute_reliability(shape, complex_, engine=engine, obstacle=obstacle)
    estimate = estimate_p_hit(shape, complex_, config, obstacle=obstacle)
    abs_error = abs(estimate.p_hat - float(exact.p_hit))
    if estimate.std_error > 0:
        sigma = abs_error / estimate.std_error
    else:
        sigma = 0.0 if abs_error == 0 else math.inf
    return McComparison(
        exact_p_hit=exact.p_hit,
        estimate=estimate,
        abs_error=abs_error,
        sigma_distance=sigma,
        ok=sigma <= sigma_limit,
    )
