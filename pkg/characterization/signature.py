"""Workload signature: every characterization metric for one trace, with JSON I/O"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from config import SCHEMA_VERSION
from tracecore.models import OPCODE_ORDER, OpcodeClass, Trace
from .cache import ReuseProfile, check_geometry, hierarchy_miss_rates, is_power_of_two, reuse_profile
from .entropy import EntropyCurve, entropy_curve
from .locality import (
    WEIGHT_TOLERANCE, SpatialLocalityCurve, StrideProfile, doublings_from_pairs,
    spatial_locality_total, stride_profile,
)
from .parallelism import (
    DEFAULT_DEP_LINE_SIZE, bb_parallelism, build_dependence_dag,
    dlp_per_opcode, dlp_weighted, instruction_level_parallelism, opcode_counts,
)

logger = logging.getLogger(__name__)

NO_MEMORY_STREAM = "no memory stream"


@dataclass(frozen=True)
class CharacterizationConfig:
    reductions: tuple[int, ...] = (0, 3, 6, 9)
    line_pairs: tuple[int, ...] = (8, 16, 32, 64, 128)
    weights: Optional[tuple[float, ...]] = None  # None = uniform
    capacity: int = 32 * 1024       # spatial-locality LRU and L1
    l2_capacity: int = 256 * 1024
    line_size: int = 64             # line for measured miss rates
    dep_line_size: int = DEFAULT_DEP_LINE_SIZE
    reuse_profile: bool = False
    stride_top_k: int = 8

    def problems(self) -> list[str]:
        errors = []
        if list(self.reductions) != sorted(self.reductions):
            errors.append("reductions must be ascending")
        if any(not 0 <= r <= 63 for r in self.reductions):
            errors.append("reductions must be in [0, 63]")
        try:
            from_lines = doublings_from_pairs(self.line_pairs)
        except ValueError as e:
            errors.append(str(e))
            from_lines = []
        if from_lines:
            if not is_power_of_two(from_lines[0]):
                errors.append("line_pairs must be powers of two")
            if 2 * from_lines[-1] > self.capacity:
                errors.append(f"line pair {2 * from_lines[-1]} does not fit in capacity {self.capacity}")
        if self.weights is not None:
            if len(self.weights) != len(from_lines):
                errors.append("weights must have one entry per line pair")
            if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > WEIGHT_TOLERANCE:
                errors.append("weights must be non-negative and sum to 1")
        if self.l2_capacity < self.capacity:
            errors.append("l2_capacity must be >= capacity")
        for capacity in (self.capacity, self.l2_capacity):
            try:
                check_geometry(self.line_size, capacity)
            except ValueError as e:
                errors.append(str(e))
        if not is_power_of_two(self.dep_line_size):
            errors.append("dep_line_size must be a power of two")
        if self.stride_top_k < 1:
            errors.append("stride_top_k must be >= 1")
        return errors


@dataclass(frozen=True)
class WorkloadSignature:
    name: str
    n_instr: int
    n_mem: int
    instruction_mix: dict[OpcodeClass, float]
    entropy: Optional[EntropyCurve]
    spatial: Optional[SpatialLocalityCurve]
    dlp_per_opcode: dict[OpcodeClass, float]
    dlp_weighted: float
    bb_parallelism: float
    ilp: float
    m1: Optional[float]
    m2: Optional[float]
    memory_intensity: float
    bytes_per_instruction: float
    strides: Optional[StrideProfile] = None
    reuse: Optional[ReuseProfile] = None
    notes: tuple[str, ...] = ()
    schema_version: int = SCHEMA_VERSION

    @property
    def has_memory_metrics(self) -> bool:
        return self.entropy is not None and self.spatial is not None and self.m1 is not None

    @property
    def finest_entropy(self) -> Optional[float]:
        """Entropy at the smallest bit reduction"""
        if self.entropy is None or not self.entropy.points:
            return None
        return self.entropy.points[0][1]

    # -------------------------------------------------------------------------
    # JSON
    # -------------------------------------------------------------------------

    def to_dict(self) -> dict:
        """Stable field order; absent memory metrics are null"""
        return {
            "schema_version": self.schema_version,
            "name": self.name,
            "totals": {"instructions": self.n_instr, "memory_accesses": self.n_mem},
            "instruction_mix": {op.value: self.instruction_mix[op] for op in OPCODE_ORDER if op in self.instruction_mix},
            "entropy": self.entropy.to_dict() if self.entropy else None,
            "spatial_locality": self.spatial.to_dict() if self.spatial else None,
            "dlp_per_opcode": {op.value: self.dlp_per_opcode[op] for op in OPCODE_ORDER if op in self.dlp_per_opcode},
            "dlp_weighted": self.dlp_weighted,
            "bb_parallelism": self.bb_parallelism,
            "ilp": self.ilp,
            "measured_miss_rates": None if self.m1 is None else {"m1": self.m1, "m2": self.m2},
            "memory_intensity": self.memory_intensity,
            "bytes_per_instruction": self.bytes_per_instruction,
            "strides": self.strides.to_dict() if self.strides else None,
            "reuse": self.reuse.to_dict() if self.reuse else None,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "WorkloadSignature":
        """
        Rebuild a signature from its JSON form.

        Raises:
            KeyError / ValueError / TypeError on missing or malformed fields
        """
        if not isinstance(data, dict):
            raise ValueError("signature must be a JSON object")
        version = data["schema_version"]
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {version}")
        rates = data["measured_miss_rates"]
        strides = data.get("strides")
        return cls(
            name=str(data["name"]),
            n_instr=int(_object(data, "totals")["instructions"]),
            n_mem=int(_object(data, "totals")["memory_accesses"]),
            instruction_mix={OpcodeClass(k): float(v) for k, v in _object(data, "instruction_mix").items()},
            entropy=EntropyCurve.from_dict(data["entropy"]) if data["entropy"] else None,
            spatial=SpatialLocalityCurve.from_dict(data["spatial_locality"]) if data["spatial_locality"] else None,
            dlp_per_opcode={OpcodeClass(k): float(v) for k, v in _object(data, "dlp_per_opcode").items()},
            dlp_weighted=float(data["dlp_weighted"]),
            bb_parallelism=float(data["bb_parallelism"]),
            ilp=float(data.get("ilp", 0.0)),
            m1=None if rates is None else float(rates["m1"]),
            m2=None if rates is None else float(rates["m2"]),
            memory_intensity=float(data.get("memory_intensity", 0.0)),
            bytes_per_instruction=float(data.get("bytes_per_instruction", 0.0)),
            strides=None if not strides else StrideProfile(
                top=tuple((int(s), float(f)) for s, f in strides["top"]),
                distinct_strides=int(strides["distinct_strides"]),
            ),
            reuse=_reuse_from_dict(data.get("reuse")),
            notes=tuple(data.get("notes", ())),
        )

    @classmethod
    def from_json(cls, text: str) -> "WorkloadSignature":
        return cls.from_dict(json.loads(text))


def _object(data: dict, key: str) -> dict:
    value = data[key]
    if not isinstance(value, dict):
        raise ValueError(f"field '{key}' must be a JSON object")
    return value


def _reuse_from_dict(data: Optional[dict]) -> Optional[ReuseProfile]:
    if not data:
        return None
    if not isinstance(data, dict):
        raise ValueError("field 'reuse' must be a JSON object")
    return ReuseProfile(
        line_size=int(data["line_size"]),
        mean=data["mean"],
        median=data["median"],
        cold=int(data["cold"]),
        buckets={int(k): int(v) for k, v in _object(data, "buckets").items()},
    )


def load_signature(path: Union[str, Path]) -> WorkloadSignature:
    return WorkloadSignature.from_json(Path(path).read_text(encoding="utf-8"))


# =============================================================================
# Aggregation
# =============================================================================


def instruction_mix(trace: Trace) -> dict[OpcodeClass, float]:
    counts = opcode_counts(trace)
    total = len(trace)
    return {op: n / total for op, n in counts.items()}


def signature(trace: Trace, cfg: Optional[CharacterizationConfig] = None) -> WorkloadSignature:
    """
    Compute every metric for a trace.

    A compute-only trace yields null memory metrics and the note
    'no memory stream' instead of raising.
    """
    cfg = cfg or CharacterizationConfig()
    problems = cfg.problems()
    if problems:
        raise ValueError("; ".join(problems))
    if len(trace) == 0:
        raise ValueError(f"trace '{trace.name}' is empty")

    logger.info(f"Characterizing '{trace.name}' ({len(trace)} records)")
    n_instr = len(trace)
    n_mem = trace.n_memory

    dag = build_dependence_dag(trace, cfg.dep_line_size)
    per_opcode = dlp_per_opcode(dag, trace)

    entropy = spatial = strides = reuse = None
    m1 = m2 = None
    notes: list[str] = []
    if n_mem:
        entropy = entropy_curve(trace, cfg.reductions)
        spatial = spatial_locality_total(
            trace, doublings_from_pairs(cfg.line_pairs), cfg.capacity, cfg.weights,
        )
        rates = hierarchy_miss_rates(trace, cfg.line_size, cfg.capacity, cfg.l2_capacity)
        m1, m2 = rates.m1, rates.m2
        strides = stride_profile(trace, cfg.stride_top_k)
        if cfg.reuse_profile:
            reuse = reuse_profile(trace, cfg.line_size)
    else:
        logger.warning(f"Trace '{trace.name}' has no memory accesses; memory metrics omitted")
        notes.append(NO_MEMORY_STREAM)

    return WorkloadSignature(
        name=trace.name,
        n_instr=n_instr,
        n_mem=n_mem,
        instruction_mix=instruction_mix(trace),
        entropy=entropy,
        spatial=spatial,
        dlp_per_opcode=per_opcode,
        dlp_weighted=dlp_weighted(per_opcode, trace),
        bb_parallelism=bb_parallelism(trace, dag),
        ilp=instruction_level_parallelism(dag),
        m1=m1,
        m2=m2,
        memory_intensity=n_mem / n_instr,
        bytes_per_instruction=float(trace.memory_sizes.sum()) / n_instr if n_mem else 0.0,
        strides=strides,
        reuse=reuse,
        notes=tuple(notes),
    )
