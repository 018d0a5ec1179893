"""Microarchitecture-independent workload metrics"""

from .entropy import EntropyCurve, memory_entropy, entropy_curve
from .cache import LruCache, LruResult, simulate_lru, hierarchy_miss_rates, reuse_profile
from .locality import SpatialLocalityCurve, spatial_locality_pair, spatial_locality_total, stride_profile
from .parallelism import DependenceDag, build_dependence_dag, dlp_per_opcode, dlp_weighted, bb_parallelism
from .signature import CharacterizationConfig, WorkloadSignature, signature, load_signature

__all__ = [
    "EntropyCurve", "memory_entropy", "entropy_curve",
    "LruCache", "LruResult", "simulate_lru", "hierarchy_miss_rates", "reuse_profile",
    "SpatialLocalityCurve", "spatial_locality_pair", "spatial_locality_total", "stride_profile",
    "DependenceDag", "build_dependence_dag", "dlp_per_opcode", "dlp_weighted", "bb_parallelism",
    "CharacterizationConfig", "WorkloadSignature", "signature", "load_signature",
]
