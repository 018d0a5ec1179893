"""Memory entropy: Shannon entropy of the address stream at a given granularity"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from errors import EmptyAddressStreamError
from tracecore.models import Trace

logger = logging.getLogger(__name__)

MAX_BIT_REDUCTION = 63


@dataclass(frozen=True)
class EntropyCurve:
    """(bit_reduction, entropy_bits) points, ascending in bit_reduction"""
    points: tuple[tuple[int, float], ...]

    def at(self, bit_reduction: int) -> float:
        for reduction, bits in self.points:
            if reduction == bit_reduction:
                return bits
        raise KeyError(bit_reduction)

    def to_dict(self) -> dict:
        return {"points": [[r, h] for r, h in self.points]}

    @classmethod
    def from_dict(cls, data: dict) -> "EntropyCurve":
        return cls(points=tuple((int(r), float(h)) for r, h in data["points"]))


def entropy_of_counts(counts: np.ndarray) -> float:
    """H = log2(N) - sum(c log2 c) / N; exact for uniform and single-symbol counts"""
    total = float(counts.sum())
    if total == 0.0:
        return 0.0
    c = counts.astype(np.float64)
    h = float(np.log2(total) - (c * np.log2(c)).sum() / total)
    return h if h > 0.0 else 0.0


def address_entropy(addresses: np.ndarray, bit_reduction: int) -> float:
    if addresses.size == 0:
        raise EmptyAddressStreamError()
    if not 0 <= bit_reduction <= MAX_BIT_REDUCTION:
        raise ValueError(f"bit_reduction must be in [0, {MAX_BIT_REDUCTION}], got {bit_reduction}")
    symbols = addresses >> np.uint64(bit_reduction)
    _, counts = np.unique(symbols, return_counts=True)
    return entropy_of_counts(counts)


def memory_entropy(trace: Trace, bit_reduction: int) -> float:
    """
    Shannon entropy (bits) of (mem_addr >> bit_reduction) over all LOAD/STORE
    records. Frequency-only: independent of access order.

    Raises:
        EmptyAddressStreamError: if the trace has no memory accesses
    """
    return address_entropy(trace.memory_addresses, bit_reduction)


def entropy_curve(trace: Trace, reductions: Sequence[int]) -> EntropyCurve:
    """One entropy point per bit reduction (reductions must be ascending)"""
    reductions = list(reductions)
    if reductions != sorted(reductions):
        raise ValueError("reductions must be sorted ascending")
    addresses = trace.memory_addresses
    points = []
    previous = float("inf")
    for r in reductions:
        # merging bins never adds information; clamp rounding noise
        bits = min(address_entropy(addresses, r), previous)
        points.append((r, bits))
        previous = bits
    logger.info(f"Entropy curve for '{trace.name}': {points}")
    return EntropyCurve(points=tuple(points))
