import pytest

from characterization.locality import (
    doubling_score, doublings_from_pairs, miss_counts, spatial_locality_pair,
    spatial_locality_total, stride_profile,
)
from errors import EmptyAddressStreamError
from .factories import load_trace, random_scatter, sequential, strided
from .oracles import lines_of, naive_lru_misses

CAPACITY = 32 * 1024


def test_sequential_pair_scores_one():
    trace = sequential(4 * CAPACITY // 8)
    for line in (8, 16, 32, 64):
        assert spatial_locality_pair(trace, line, CAPACITY) == 1.0


def test_far_apart_random_scores_near_zero():
    trace = random_scatter(5000, 1 << 34, seed=1)
    assert spatial_locality_pair(trace, 8, CAPACITY) <= 0.05


@pytest.mark.parametrize("line", [8, 16, 32, 64])
def test_strided_endpoints(line):
    wide = strided(4096, 2 * line)
    narrow = strided(4096, line // 2)
    assert spatial_locality_pair(wide, line, CAPACITY) == 0.0
    assert spatial_locality_pair(narrow, line, CAPACITY) == 1.0


def test_zero_misses_scores_one():
    assert doubling_score(0, 0) == 1.0
    assert doubling_score(100, 150) == 0.0
    assert doubling_score(100, 50) == 1.0
    assert doubling_score(100, 75) == 0.5


def test_total_is_weighted_sum():
    trace = random_scatter(4000, 1 << 16, seed=3)
    weights = [0.1, 0.2, 0.3, 0.4]
    curve = spatial_locality_total(trace, [8, 16, 32, 64], 4096, weights)
    assert curve.total == pytest.approx(sum(w * p.score for w, p in zip(weights, curve.pairs)), abs=1e-12)
    assert [p.to_line for p in curve.pairs] == [16, 32, 64, 128]
    assert all(0.0 <= p.score <= 1.0 for p in curve.pairs)


def test_sequential_total_is_one():
    curve = spatial_locality_total(sequential(16384), [8, 16, 32], CAPACITY)
    assert curve.total == 1.0
    assert curve.weights == pytest.approx((1 / 3, 1 / 3, 1 / 3))


def test_stencil_beats_diagonal(stencil_trace, diagonal_trace):
    stencil = spatial_locality_total(stencil_trace, [8, 16, 32, 64], 1024)
    diagonal = spatial_locality_total(diagonal_trace, [8, 16, 32, 64], 1024)
    assert stencil.total > diagonal.total


def test_miss_counts_match_naive_replay():
    trace = random_scatter(3000, 1 << 13, seed=8)
    counts = miss_counts(trace, [8, 16, 32, 64], 1024)
    for line, misses in counts.items():
        assert misses == naive_lru_misses(lines_of(trace, line), 1024 // line)


@pytest.mark.parametrize("weights, message", [
    ([0.5, 0.5], "2 weights for 4"),
    ([0.5, 0.5, 0.5, -0.5], "non-negative"),
    ([0.3, 0.3, 0.3, 0.3], "sum to 1"),
])
def test_invalid_weights(weights, message):
    with pytest.raises(ValueError, match=message):
        spatial_locality_total(sequential(100), [8, 16, 32, 64], CAPACITY, weights)


def test_pair_preconditions():
    with pytest.raises(ValueError):
        spatial_locality_pair(sequential(100), 24, CAPACITY)
    with pytest.raises(ValueError):
        spatial_locality_pair(sequential(100), 64, 64)
    with pytest.raises(EmptyAddressStreamError):
        spatial_locality_pair(sequential(100, compute_mix=1.0), 8, CAPACITY)


def test_doublings_from_pairs():
    assert doublings_from_pairs([8, 16, 32, 64, 128]) == [8, 16, 32, 64]
    with pytest.raises(ValueError, match="consecutive doublings"):
        doublings_from_pairs([8, 32])


def test_stride_profile():
    trace = load_trace([0, 8, 16, 24, 1000, 1008])
    profile = stride_profile(trace, top_k=2)
    assert profile.top[0] == (8, pytest.approx(4 / 5))
    assert profile.top[1] == (976, pytest.approx(1 / 5))
    assert profile.distinct_strides == 2


def test_stride_profile_of_single_access():
    assert stride_profile(load_trace([42])).top == ()
