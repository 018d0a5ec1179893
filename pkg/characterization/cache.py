"""
Fully associative LRU cache simulation and reuse (stack) distances

Two engines share one interface:
  - LruCache: hash map + recency order, counts hits and misses only
  - stack distances: a Fenwick tree over access timestamps, giving the number
    of distinct lines touched since the previous access to the same line

A line of stack distance d hits in an LRU cache of C lines iff d < C.
"""

import logging
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from errors import EmptyAddressStreamError
from tracecore.models import ITER_CHUNK, Trace

logger = logging.getLogger(__name__)


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def check_geometry(line_size: int, capacity: int) -> None:
    if not is_power_of_two(line_size):
        raise ValueError(f"line_size must be a power of two, got {line_size}")
    if not is_power_of_two(capacity):
        raise ValueError(f"capacity must be a power of two, got {capacity}")
    if capacity < line_size:
        raise ValueError(f"capacity {capacity} is smaller than line_size {line_size}")


def line_array(trace: Trace, line_size: int) -> np.ndarray:
    shift = np.uint64(line_size.bit_length() - 1)
    return trace.memory_addresses >> shift


def line_stream(trace: Trace, line_size: int) -> list[int]:
    """Line numbers of every memory access, in trace order"""
    return line_array(trace, line_size).tolist()


def iter_line_stream(trace: Trace, line_size: int) -> Iterator[int]:
    """line_stream, converted one chunk at a time"""
    lines = line_array(trace, line_size)
    for start in range(0, lines.size, ITER_CHUNK):
        yield from lines[start:start + ITER_CHUNK].tolist()


def distinct_lines(trace: Trace, line_size: int) -> int:
    return int(np.unique(line_array(trace, line_size)).size)


# =============================================================================
# LRU cache
# =============================================================================


class LruCache:
    """Fully associative LRU cache over line numbers"""

    def __init__(self, n_lines: int):
        if n_lines < 1:
            raise ValueError("cache must hold at least one line")
        self.n_lines = n_lines
        self._lines: OrderedDict[int, None] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def access(self, line: int) -> bool:
        """Touch a line; returns True on hit"""
        lines = self._lines
        if line in lines:
            lines.move_to_end(line)
            self.hits += 1
            return True
        lines[line] = None
        if len(lines) > self.n_lines:
            lines.popitem(last=False)
        self.misses += 1
        return False

    def __contains__(self, line: int) -> bool:
        return line in self._lines

    def __len__(self) -> int:
        return len(self._lines)


def count_misses(lines: Iterable[int], n_lines: int) -> int:
    """Miss count of an LRU cache of n_lines over a line stream"""
    cache = OrderedDict()
    misses = 0
    for line in lines:
        if line in cache:
            cache.move_to_end(line)
            continue
        misses += 1
        cache[line] = None
        if len(cache) > n_lines:
            cache.popitem(last=False)
    return misses


# =============================================================================
# Stack distances
# =============================================================================


class _Fenwick:
    """Binary indexed tree of 0/1 markers over access timestamps"""

    __slots__ = ("size", "tree")

    def __init__(self, size: int):
        self.size = size
        self.tree = [0] * (size + 1)

    def add(self, index: int, delta: int) -> None:
        i = index + 1
        tree = self.tree
        while i <= self.size:
            tree[i] += delta
            i += i & -i

    def prefix(self, end: int) -> int:
        """Sum of markers in [0, end)"""
        total = 0
        tree = self.tree
        i = end
        while i > 0:
            total += tree[i]
            i -= i & -i
        return total


def stack_distances(lines: list[int]) -> list[Optional[int]]:
    """Stack distance per access; None for cold (first) accesses"""
    fenwick = _Fenwick(len(lines))
    last_seen: dict[int, int] = {}
    distances: list[Optional[int]] = []
    for t, line in enumerate(lines):
        previous = last_seen.get(line)
        if previous is None:
            distances.append(None)
        else:
            distances.append(fenwick.prefix(t) - fenwick.prefix(previous + 1))
            fenwick.add(previous, -1)
        fenwick.add(t, 1)
        last_seen[line] = t
    return distances


@dataclass(frozen=True)
class LruResult:
    line_size: int
    capacity: int
    accesses: int
    misses: int
    cold_misses: int
    distinct_lines: int
    # finite stack distance -> count; cold accesses are counted in cold_misses
    reuse_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def capacity_misses(self) -> int:
        return self.misses - self.cold_misses

    @property
    def miss_ratio(self) -> float:
        return self.misses / self.accesses if self.accesses else 0.0

    def histogram_with_cold(self) -> dict:
        """Histogram with cold accesses bucketed under float('inf')"""
        merged: dict = dict(self.reuse_histogram)
        if self.cold_misses:
            merged[float("inf")] = self.cold_misses
        return merged


def simulate_lru(
    trace: Trace,
    line_size: int,
    capacity: int,
    with_histogram: bool = True,
) -> LruResult:
    """
    Replay the trace through a fully associative LRU cache.

    Args:
        trace: input trace (only LOAD/STORE records are replayed)
        line_size: bytes per line, power of two
        capacity: cache bytes, power of two, >= line_size
        with_histogram: compute the stack-distance histogram; when False only
            miss counts are produced (much faster on large traces)
    """
    check_geometry(line_size, capacity)
    n_lines = capacity // line_size
    distinct = distinct_lines(trace, line_size)

    if not with_histogram:
        misses = count_misses(iter_line_stream(trace, line_size), n_lines)
        return LruResult(
            line_size=line_size,
            capacity=capacity,
            accesses=trace.n_memory,
            misses=misses,
            cold_misses=distinct,
            distinct_lines=distinct,
        )

    lines = line_stream(trace, line_size)
    histogram: Counter = Counter()
    cold = 0
    misses = 0
    for d in stack_distances(lines):
        if d is None:
            cold += 1
            misses += 1
        else:
            histogram[d] += 1
            if d >= n_lines:
                misses += 1

    logger.debug(f"LRU line={line_size} capacity={capacity}: {misses}/{len(lines)} misses")
    return LruResult(
        line_size=line_size,
        capacity=capacity,
        accesses=len(lines),
        misses=misses,
        cold_misses=cold,
        distinct_lines=distinct,
        reuse_histogram=dict(sorted(histogram.items())),
    )


# =============================================================================
# Two-level hierarchy and reuse summary
# =============================================================================


@dataclass(frozen=True)
class HierarchyMissRates:
    m1: float
    m2: float
    l1_misses: int
    l2_misses: int
    accesses: int


def hierarchy_miss_rates(trace: Trace, line_size: int, l1_capacity: int, l2_capacity: int) -> HierarchyMissRates:
    """L1 miss ratio, and L2 miss ratio over the L1 miss stream"""
    check_geometry(line_size, l1_capacity)
    check_geometry(line_size, l2_capacity)
    accesses = trace.n_memory
    if not accesses:
        raise EmptyAddressStreamError()

    l1 = LruCache(l1_capacity // line_size)
    l2 = LruCache(l2_capacity // line_size)
    for line in iter_line_stream(trace, line_size):
        if not l1.access(line):
            l2.access(line)

    m1 = l1.misses / accesses
    m2 = l2.misses / l1.misses if l1.misses else 0.0
    return HierarchyMissRates(m1=m1, m2=m2, l1_misses=l1.misses, l2_misses=l2.misses, accesses=accesses)


@dataclass(frozen=True)
class ReuseProfile:
    line_size: int
    mean: Optional[float]
    median: Optional[float]
    cold: int
    # log2 bucket upper bound (1, 2, 4, ...) -> count of finite distances
    buckets: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "line_size": self.line_size,
            "mean": self.mean,
            "median": self.median,
            "cold": self.cold,
            "buckets": {str(k): v for k, v in self.buckets.items()},
        }


def reuse_profile(trace: Trace, line_size: int) -> ReuseProfile:
    """Summary of finite stack distances; cold accesses reported separately"""
    distances = stack_distances(line_stream(trace, line_size))
    finite = np.array([d for d in distances if d is not None], dtype=np.int64)
    cold = len(distances) - int(finite.size)

    buckets: Counter = Counter()
    if finite.size:
        # bucket b holds distances in [b/2, b), with 0 in bucket 1
        upper = np.left_shift(1, np.ceil(np.log2(finite + 1)).astype(np.int64))
        for bound, count in zip(*np.unique(upper, return_counts=True)):
            buckets[int(bound)] = int(count)

    return ReuseProfile(
        line_size=line_size,
        mean=float(finite.mean()) if finite.size else None,
        median=float(np.median(finite)) if finite.size else None,
        cold=cold,
        buckets=dict(sorted(buckets.items())),
    )
