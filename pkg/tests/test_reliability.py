import random
from fractions import Fraction
from itertools import combinations

import pytest

from faultring.faults import ArbitraryFault, RectFault, build_complex
from faultring.mesh import MeshShape
from faultring.paths import avoiding_dp, path_count
from faultring.reliability import (
    compute_reliability,
    format_probability,
    miss_paths,
    select_engine,
    total_paths,
)


def _total_oracle(shape, faults):
    free = [v for v in shape.nodes() if v not in faults]
    return sum(path_count(a, b) for a, b in combinations(free, 2))


def _miss_oracle(shape, avoid):
    free = [v for v in shape.nodes() if v not in avoid]
    return sum(avoiding_dp(a, b, avoid) for a, b in combinations(free, 2))


def test_total_paths_matches_pairwise_sum():
    rng = random.Random(515)
    for _ in range(25):
        n = rng.randint(2, 3)
        shape = MeshShape(tuple(rng.randint(2, 4) for _ in range(n)))
        k = rng.randint(0, 3)
        faults = set(rng.sample(list(shape.nodes()), k)) if k else set()
        assert total_paths(shape, faults) == _total_oracle(shape, faults)


def test_all_pairs_blocked_case_from_worked_example():
    # 4x4 mesh, single fault at (1,1): 21 routes dodge the blocked set,
    # out of 340 weighted routes between non-faulty pairs.
    shape = MeshShape((4, 4))
    complex_ = build_complex(shape, RectFault((1, 1), (1, 1)))
    assert total_paths(shape, complex_.faults) == 340
    assert miss_paths(shape, complex_, engine="dp") == 21
    assert miss_paths(shape, complex_, engine="det") == 21


def test_miss_paths_engines_and_workers_agree():
    rng = random.Random(2024)
    for _ in range(12):
        shape = MeshShape((rng.randint(3, 5), rng.randint(3, 5)))
        origin = (rng.randint(0, 1), rng.randint(0, 1))
        extents = (1, rng.randint(1, 2))
        complex_ = build_complex(shape, RectFault(origin, extents))
        via_det = miss_paths(shape, complex_, engine="det")
        via_dp = miss_paths(shape, complex_, engine="dp")
        via_dp2 = miss_paths(shape, complex_, engine="dp", workers=2)
        assert via_det == via_dp == via_dp2
        assert via_dp == _miss_oracle(shape, complex_.blocked)


def test_miss_paths_with_fault_obstacle():
    shape = MeshShape((5, 5))
    complex_ = build_complex(shape, RectFault((2, 2), (1, 1)))
    got = miss_paths(shape, complex_, engine="dp", obstacle="faults")
    assert got == _miss_oracle(shape, complex_.faults)
    assert got > miss_paths(shape, complex_, engine="dp")


def test_miss_paths_rejects_unknown_obstacle():
    shape = MeshShape((4, 4))
    complex_ = build_complex(shape, RectFault((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        miss_paths(shape, complex_, obstacle="everything")


def test_cross_check_full_passes_on_clean_engines():
    shape = MeshShape((5, 5))
    complex_ = build_complex(shape, RectFault((1, 1), (1, 2)))
    via_det = miss_paths(shape, complex_, engine="det", cross_check="full")
    via_dp = miss_paths(shape, complex_, engine="dp", cross_check="full")
    assert via_det == via_dp


def test_reliability_identities():
    shape = MeshShape((5, 5))
    complex_ = build_complex(shape, RectFault((1, 1), (2, 1)))
    result = compute_reliability(shape, complex_)
    assert result.p_hit + result.p_miss == 1
    assert result.total_paths == total_paths(shape, complex_.faults)
    assert result.p_miss == Fraction(result.miss_paths, result.total_paths)


def test_reliability_fault_free_never_hits():
    shape = MeshShape((4, 4))
    result = compute_reliability(shape, build_complex(shape, None))
    assert result.p_hit == 0
    assert result.p_miss == 1
    assert result.classification is None


def test_reliability_covered_mesh_always_hits():
    shape = MeshShape((3, 2, 2))
    complex_ = build_complex(shape, RectFault((1, 1, 0), (1, 1, 1)))
    result = compute_reliability(shape, complex_)
    assert result.p_miss == 0
    assert result.p_hit == 1


def test_reliability_result_records_obstacle():
    shape = MeshShape((5, 5))
    complex_ = build_complex(shape, RectFault((2, 2), (1, 1)))
    strict = compute_reliability(shape, complex_, engine="dp")
    loose = compute_reliability(shape, complex_, engine="dp", obstacle="faults")
    assert strict.obstacle == "blocked"
    assert loose.obstacle == "faults"
    assert loose.p_hit < strict.p_hit


def test_select_engine_policies():
    small = MeshShape((4, 4))
    small_complex = build_complex(small, RectFault((1, 1), (1, 1)))
    assert select_engine(small, small_complex).engine == "det"
    assert select_engine(small, small_complex, policy="dp").engine == "dp"

    big = MeshShape((10, 10))
    big_complex = build_complex(big, RectFault((3, 3), (4, 4)))
    assert select_engine(big, big_complex, budget=1e5).engine == "dp"
    assert select_engine(big, big_complex, budget=1e15).engine == "det"
    # the bare-fault avoid set is smaller, so its predicted cost is lower
    blocked_cost = select_engine(big, big_complex).predicted_det_cost
    faults_cost = select_engine(big, big_complex, obstacle="faults").predicted_det_cost
    assert faults_cost < blocked_cost


def test_format_probability_half_even_rounding():
    assert format_probability(Fraction(1), 3) == "1.000"
    assert format_probability(Fraction(0), 3) == "0.000"
    assert format_probability(Fraction(1, 3), 3) == "0.333"
    assert format_probability(Fraction(1, 8), 2) == "0.12"
    assert format_probability(Fraction(3, 8), 2) == "0.38"
    assert format_probability(Fraction(-1, 8), 2) == "-0.12"
    assert format_probability(Fraction(214, 1000), 3) == "0.214"
    assert format_probability(Fraction(1, 2), 0) == "0"
    with pytest.raises(ValueError):
        format_probability(Fraction(1, 2), -1)
