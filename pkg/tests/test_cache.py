import numpy as np
import pytest

from characterization.cache import (
    LruCache, count_misses, hierarchy_miss_rates, reuse_profile, simulate_lru, stack_distances,
)
from tracecore.models import PatternKind
from .factories import load_trace, sequential, synthetic
from .oracles import lines_of, naive_lru_misses, naive_stack_distances


def test_sequential_footprint_below_capacity():
    result = simulate_lru(sequential(1024), 64, 32 * 1024)
    assert result.misses == 128
    assert result.cold_misses == 128
    assert result.capacity_misses == 0
    assert result.distinct_lines == 128


def test_single_address_misses_once():
    for line, capacity in ((8, 8), (64, 1024), (128, 1 << 20)):
        assert simulate_lru(load_trace([0x80] * 100), line, capacity).misses == 1


def test_pointer_chase_matches_reference_replay():
    trace = synthetic(PatternKind.POINTER_CHASE, nodes=4096, node_bytes=64, n_accesses=3 * 4096, seed=3)
    result = simulate_lru(trace, 64, 2048)
    expected = naive_lru_misses(lines_of(trace, 64), 32)
    assert result.misses == expected
    assert result.misses == len(trace)


def test_histogram_counts_cold_under_infinity():
    trace = load_trace([0, 64, 0, 128, 64, 0])
    result = simulate_lru(trace, 64, 1024)
    assert result.reuse_histogram == {1: 1, 2: 2}
    assert result.histogram_with_cold() == {1: 1, 2: 2, float("inf"): 3}


def test_capacity_misses_follow_stack_distance():
    # cyclic over 5 lines in a 4-line cache: every access misses
    trace = load_trace([i * 64 for i in range(5)] * 10)
    assert simulate_lru(trace, 64, 256).misses == 50
    assert simulate_lru(trace, 64, 512).misses == 5


def test_histogram_and_fast_path_agree():
    trace = synthetic(PatternKind.RANDOM, n_accesses=4000, range_bytes=1 << 14, seed=4)
    slow = simulate_lru(trace, 32, 2048, with_histogram=True)
    fast = simulate_lru(trace, 32, 2048, with_histogram=False)
    assert slow.misses == fast.misses
    assert fast.reuse_histogram == {}


def test_stack_distances_match_naive():
    rng = np.random.default_rng(17)
    lines = rng.integers(0, 50, size=2000).tolist()
    assert stack_distances(lines) == naive_stack_distances(lines)


def test_lru_cache_object():
    cache = LruCache(2)
    assert [cache.access(x) for x in (1, 2, 1, 3, 2, 1)] == [False, False, True, False, False, False]
    assert (cache.hits, cache.misses) == (1, 5)
    assert len(cache) == 2


def test_count_misses_matches_naive():
    rng = np.random.default_rng(23)
    for _ in range(20):
        lines = rng.integers(0, 40, size=500).tolist()
        n_lines = int(rng.integers(1, 32))
        assert count_misses(lines, n_lines) == naive_lru_misses(lines, n_lines)


@pytest.mark.parametrize("line, capacity", [(48, 1024), (64, 1000), (128, 64)])
def test_geometry_preconditions(line, capacity):
    with pytest.raises(ValueError):
        simulate_lru(sequential(10), line, capacity)


def test_hierarchy_feeds_l2_with_l1_misses():
    # 8 lines cycled: thrash a 4-line L1, fit in a 16-line L2
    trace = load_trace([i * 64 for i in range(8)] * 10)
    rates = hierarchy_miss_rates(trace, 64, 256, 1024)
    assert rates.m1 == 1.0
    assert rates.l2_misses == 8
    assert rates.m2 == pytest.approx(8 / 80)


def test_reuse_profile_excludes_cold_from_mean():
    trace = load_trace([0, 64, 0, 128, 64, 0])
    profile = reuse_profile(trace, 64)
    assert profile.cold == 3
    assert profile.mean == pytest.approx((1 + 2 + 2) / 3)
    assert profile.median == 2.0
    assert profile.buckets == {2: 1, 4: 2}
