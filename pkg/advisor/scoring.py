"""
Offload advisor: characterize -> model -> decide

A kernel is offloaded when the analytic model predicts a speedup of at least
speedup_min AND at least two of three metric signals agree (high entropy, low
spatial locality, high parallelism). Threshold defaults are heuristics.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from analytic.explore import compare
from analytic.params import EnergyParams, SystemConfig, WorkloadProfile
from characterization.signature import NO_MEMORY_STREAM, WorkloadSignature

logger = logging.getLogger(__name__)

METRIC_QUORUM = 2


class Verdict(str, Enum):
    OFFLOAD = "offload"
    KEEP_ON_HOST = "keep_on_host"
    BORDERLINE = "borderline"


@dataclass(frozen=True)
class OffloadThresholds:
    """Heuristic decision thresholds (not published values)"""
    entropy_min: float = 10.0      # bits, at the finest granularity
    spatial_max: float = 0.4       # total spatial locality score
    parallelism_min: float = 4.0   # max(dlp_weighted, bb_parallelism)
    speedup_min: float = 1.1       # normalized delay

    def problems(self) -> list[str]:
        errors = []
        if not 0.0 <= self.spatial_max <= 1.0:
            errors.append("spatial_max must be in [0, 1]")
        for name in ("entropy_min", "parallelism_min", "speedup_min"):
            if getattr(self, name) < 0:
                errors.append(f"{name} must be >= 0")
        return errors


@dataclass(frozen=True)
class OffloadRecommendation:
    kernel: str
    verdict: Verdict
    predicted_speedup: float
    predicted_energy_ratio: float
    metric_flags: dict[str, bool] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "kernel": self.kernel,
            "verdict": self.verdict.value,
            "predicted_speedup": self.predicted_speedup,
            "predicted_energy_ratio": self.predicted_energy_ratio,
            "metric_flags": dict(self.metric_flags),
            "notes": list(self.notes),
            "thresholds_are_heuristic": True,
        }


def profile_from_signature(
    sig: WorkloadSignature,
    offload_fraction: float = 1.0,
    parallel_fraction: float = 1.0,
) -> WorkloadProfile:
    return WorkloadProfile(
        n_instr=float(sig.n_instr),
        n_mem=float(sig.n_mem),
        m1=sig.m1 if sig.m1 is not None else 0.0,
        m2=sig.m2 if sig.m2 is not None else 0.0,
        offload_fraction=offload_fraction,
        parallel_fraction=parallel_fraction,
    )


def metric_flags(sig: WorkloadSignature, th: OffloadThresholds) -> dict[str, bool]:
    entropy = sig.finest_entropy
    return {
        "high_entropy": entropy is not None and entropy >= th.entropy_min,
        "low_spatial_locality": sig.spatial is not None and sig.spatial.total <= th.spatial_max,
        "high_parallelism": max(sig.dlp_weighted, sig.bb_parallelism) >= th.parallelism_min,
    }


def score_kernel(
    sig: WorkloadSignature,
    s: SystemConfig,
    ep: EnergyParams,
    th: Optional[OffloadThresholds] = None,
    offload_fraction: float = 1.0,
    parallel_fraction: float = 1.0,
) -> OffloadRecommendation:
    """Recommend where a kernel should run"""
    th = th or OffloadThresholds()
    result = compare(profile_from_signature(sig, offload_fraction, parallel_fraction), s, ep)
    speedup = result.normalized_delay
    energy_ratio = result.normalized_energy

    if not sig.has_memory_metrics:
        logger.info(f"Kernel '{sig.name}' has no memory stream; keeping on host")
        return OffloadRecommendation(
            kernel=sig.name,
            verdict=Verdict.KEEP_ON_HOST,
            predicted_speedup=speedup,
            predicted_energy_ratio=energy_ratio,
            metric_flags={"no_memory_stream": True},
            notes=(NO_MEMORY_STREAM,),
        )

    flags = metric_flags(sig, th)
    quorum = sum(flags.values()) >= METRIC_QUORUM
    if speedup >= th.speedup_min and quorum:
        verdict = Verdict.OFFLOAD
    elif speedup >= 1.0 and not quorum:
        verdict = Verdict.BORDERLINE
    else:
        verdict = Verdict.KEEP_ON_HOST

    logger.info(f"Kernel '{sig.name}': speedup={speedup:.3f} flags={flags} -> {verdict.value}")
    return OffloadRecommendation(
        kernel=sig.name,
        verdict=verdict,
        predicted_speedup=speedup,
        predicted_energy_ratio=energy_ratio,
        metric_flags=flags,
    )


def rank_kernels(recs: Sequence[OffloadRecommendation]) -> list[OffloadRecommendation]:
    """Speedup descending, then energy ratio descending, then name ascending"""
    return sorted(recs, key=lambda r: (-r.predicted_speedup, -r.predicted_energy_ratio, r.kernel))
