"""Per-kernel offload recommendations"""

from .scoring import (
    Verdict, OffloadThresholds, OffloadRecommendation,
    score_kernel, rank_kernels, profile_from_signature,
)

__all__ = [
    "Verdict", "OffloadThresholds", "OffloadRecommendation",
    "score_kernel", "rank_kernels", "profile_from_signature",
]
