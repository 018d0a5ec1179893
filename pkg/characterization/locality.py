"""
Spatial locality from line-size doubling, plus the data-stream stride profile

For a fixed LRU capacity, M(L) is the miss count at line size L. A doubling
L -> 2L scores clamp(2 * (M(L) - M(2L)) / M(L), 0, 1): 1 when the doubling
halves the misses (unit-stride streams), 0 when it removes none.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from errors import EmptyAddressStreamError
from tracecore.models import Trace
from .cache import check_geometry, count_misses, is_power_of_two, iter_line_stream

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LocalityPair:
    from_line: int
    to_line: int
    score: float


@dataclass(frozen=True)
class SpatialLocalityCurve:
    pairs: tuple[LocalityPair, ...]
    weights: tuple[float, ...]
    total: float
    cache_capacity: int

    def to_dict(self) -> dict:
        return {
            "cache_capacity": self.cache_capacity,
            "pairs": [
                {"from_line": p.from_line, "to_line": p.to_line, "score": p.score, "weight": w}
                for p, w in zip(self.pairs, self.weights)
            ],
            "total": self.total,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpatialLocalityCurve":
        pairs = tuple(
            LocalityPair(int(p["from_line"]), int(p["to_line"]), float(p["score"]))
            for p in data["pairs"]
        )
        weights = tuple(float(p["weight"]) for p in data["pairs"])
        return cls(pairs=pairs, weights=weights, total=float(data["total"]),
                   cache_capacity=int(data["cache_capacity"]))


def doubling_score(misses_fine: int, misses_coarse: int) -> float:
    """Score of one doubling from its two miss counts"""
    if misses_fine == 0:
        return 1.0
    score = 2.0 * (misses_fine - misses_coarse) / misses_fine
    return min(max(score, 0.0), 1.0)


def miss_counts(trace: Trace, line_sizes: Sequence[int], capacity: int) -> dict[int, int]:
    """LRU miss count per line size at a fixed capacity"""
    if trace.n_memory == 0:
        raise EmptyAddressStreamError()
    counts = {}
    for line in sorted(set(line_sizes)):
        check_geometry(line, capacity)
        counts[line] = count_misses(iter_line_stream(trace, line), capacity // line)
    return counts


def spatial_locality_pair(trace: Trace, from_line: int, capacity: int) -> float:
    """Spatial locality score of doubling the line from from_line to 2*from_line"""
    if not is_power_of_two(from_line):
        raise ValueError(f"from_line must be a power of two, got {from_line}")
    if 2 * from_line > capacity:
        raise ValueError(f"2 x from_line ({2 * from_line}) exceeds capacity {capacity}")
    counts = miss_counts(trace, [from_line, 2 * from_line], capacity)
    return doubling_score(counts[from_line], counts[2 * from_line])


def doublings_from_pairs(line_pairs: Sequence[int]) -> list[int]:
    """'8,16,32,64,128' (consecutive doublings) -> from_lines [8, 16, 32, 64]"""
    lines = list(line_pairs)
    if len(lines) < 2:
        raise ValueError("line_pairs needs at least two line sizes")
    for a, b in zip(lines, lines[1:]):
        if b != 2 * a:
            raise ValueError(f"line_pairs must be consecutive doublings, got {a} -> {b}")
    return lines[:-1]


def spatial_locality_total(
    trace: Trace,
    from_lines: Sequence[int],
    capacity: int,
    weights: Optional[Sequence[float]] = None,
) -> SpatialLocalityCurve:
    """
    Per-doubling scores and their weighted sum.

    Args:
        from_lines: finer line size of each pair
        capacity: LRU capacity in bytes, shared by all pairs
        weights: non-negative, summing to 1 (default uniform)
    """
    from_lines = list(from_lines)
    if not from_lines:
        raise ValueError("from_lines must not be empty")
    if weights is None:
        weights = [1.0 / len(from_lines)] * len(from_lines)
    weights = [float(w) for w in weights]
    if len(weights) != len(from_lines):
        raise ValueError(f"{len(weights)} weights for {len(from_lines)} line pairs")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > WEIGHT_TOLERANCE:
        raise ValueError("weights must be non-negative and sum to 1")
    for line in from_lines:
        if not is_power_of_two(line) or 2 * line > capacity:
            raise ValueError(f"invalid from_line {line} for capacity {capacity}")

    counts = miss_counts(trace, from_lines + [2 * l for l in from_lines], capacity)
    pairs = tuple(
        LocalityPair(line, 2 * line, doubling_score(counts[line], counts[2 * line]))
        for line in from_lines
    )
    total = sum(w * p.score for w, p in zip(weights, pairs))
    logger.info(f"Spatial locality for '{trace.name}': total={total:.4f}")
    return SpatialLocalityCurve(pairs=pairs, weights=tuple(weights), total=total, cache_capacity=capacity)


# =============================================================================
# Stride profile
# =============================================================================


@dataclass(frozen=True)
class StrideProfile:
    # (stride in bytes, fraction of consecutive access pairs), most frequent first
    top: tuple[tuple[int, float], ...]
    distinct_strides: int

    def to_dict(self) -> dict:
        return {
            "distinct_strides": self.distinct_strides,
            "top": [[s, f] for s, f in self.top],
        }


def stride_profile(trace: Trace, top_k: int = 8) -> StrideProfile:
    """Most frequent address deltas between consecutive memory accesses"""
    addresses = trace.memory_addresses.astype(np.int64)
    if addresses.size < 2:
        return StrideProfile(top=(), distinct_strides=0)
    strides, counts = np.unique(np.diff(addresses), return_counts=True)
    # descending count, ascending stride among ties
    order = np.lexsort((strides, -counts))[:top_k]
    n_pairs = float(addresses.size - 1)
    top = tuple((int(strides[i]), float(counts[i]) / n_pairs) for i in order)
    return StrideProfile(top=top, distinct_strides=int(strides.size))
