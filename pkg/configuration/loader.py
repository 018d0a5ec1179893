"""
Key-value configuration files

One `key = value` per line, `#` starts a comment. Every key belongs to one of
the parameter groups (system, energy, profile, characterization, thresholds);
`line_size` feeds both the system model and the characterization line.
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Union

from advisor.scoring import OffloadThresholds
from analytic.params import EnergyParams, SystemConfig, WorkloadProfile
from characterization.signature import CharacterizationConfig
from errors import ConfigError
from .units import Dimension, parse_bool, parse_list, parse_quantity

logger = logging.getLogger(__name__)

# Special value kinds beyond the plain dimensions
BOOL = "bool"
COUNT_LIST = "count_list"
BYTES_LIST = "bytes_list"
REAL_LIST = "real_list"
OPTIONAL_COUNT = "optional_count"

# key -> (group(s), field, kind)
KEYS: dict[str, tuple[tuple[str, ...], str, object]] = {
    # System
    "n_cores": (("system",), "n_cores", Dimension.COUNT),
    "f_host": (("system",), "f_host", Dimension.FREQUENCY),
    "f_nmc": (("system",), "f_nmc", Dimension.FREQUENCY),
    "s_l1": (("system",), "s_l1", Dimension.BYTES),
    "s_l2": (("system",), "s_l2", Dimension.BYTES),
    "s_dram": (("system",), "s_dram", Dimension.BYTES),
    "bw_l1": (("system",), "bw_l1", Dimension.BANDWIDTH),
    "bw_l2": (("system",), "bw_l2", Dimension.BANDWIDTH),
    "lat_l1": (("system",), "lat_l1", Dimension.CYCLES),
    "lat_l2": (("system",), "lat_l2", Dimension.CYCLES),
    "line_size": (("system", "characterization"), "line_size", Dimension.BYTES),
    "n_vaults": (("system",), "n_vaults", Dimension.COUNT),
    "bw_per_vault": (("system",), "bw_per_vault", Dimension.BANDWIDTH),
    "n_links": (("system",), "n_links", Dimension.COUNT),
    "bw_per_link": (("system",), "bw_per_link", Dimension.BANDWIDTH),
    "ipc_host": (("system",), "ipc_host", Dimension.REAL),
    "ipc_nmc": (("system",), "ipc_nmc", Dimension.REAL),
    "n_nmc_cores": (("system",), "n_nmc_cores", OPTIONAL_COUNT),
    "t_launch": (("system",), "t_launch", Dimension.TIME),
    "overlap": (("system",), "overlap", Dimension.REAL),
    # Energy
    "e_dram_layer": (("energy",), "e_dram_layer", Dimension.ENERGY_PER_BIT),
    "e_logic_layer": (("energy",), "e_logic_layer", Dimension.ENERGY_PER_BIT),
    "p_static_nmc": (("energy",), "p_static_nmc", Dimension.POWER),
    "e_l1_access": (("energy",), "e_l1_access", Dimension.ENERGY_PER_BIT),
    "e_l2_access": (("energy",), "e_l2_access", Dimension.ENERGY_PER_BIT),
    "e_offchip_link": (("energy",), "e_offchip_link", Dimension.ENERGY_PER_BIT),
    "p_static_core": (("energy",), "p_static_core", Dimension.POWER),
    "p_static_cache_per_mb": (("energy",), "p_static_cache_per_mb", Dimension.POWER),
    "e_op_host": (("energy",), "e_op_host", Dimension.ENERGY_PER_OP),
    "e_op_nmc": (("energy",), "e_op_nmc", Dimension.ENERGY_PER_OP),
    # Workload profile
    "n_instr": (("profile",), "n_instr", Dimension.REAL),
    "n_mem": (("profile",), "n_mem", Dimension.REAL),
    "m1": (("profile",), "m1", Dimension.REAL),
    "m2": (("profile",), "m2", Dimension.REAL),
    "offload_fraction": (("profile",), "offload_fraction", Dimension.REAL),
    "parallel_fraction": (("profile",), "parallel_fraction", Dimension.REAL),
    # Characterization
    "reductions": (("characterization",), "reductions", COUNT_LIST),
    "line_pairs": (("characterization",), "line_pairs", BYTES_LIST),
    "weights": (("characterization",), "weights", REAL_LIST),
    "capacity": (("characterization",), "capacity", Dimension.BYTES),
    "l2_capacity": (("characterization",), "l2_capacity", Dimension.BYTES),
    "dep_line_size": (("characterization",), "dep_line_size", Dimension.BYTES),
    "reuse_profile": (("characterization",), "reuse_profile", BOOL),
    "stride_top_k": (("characterization",), "stride_top_k", Dimension.COUNT),
    # Advisor
    "entropy_min": (("thresholds",), "entropy_min", Dimension.REAL),
    "spatial_max": (("thresholds",), "spatial_max", Dimension.REAL),
    "parallelism_min": (("thresholds",), "parallelism_min", Dimension.REAL),
    "speedup_min": (("thresholds",), "speedup_min", Dimension.REAL),
}

UNIT_SYNTAX = (
    "units: frequency Hz/kHz/MHz/GHz; bandwidth B/s..TB/s (decimal); "
    "capacity B/KB/MB/GB (binary); energy pJ/b, pJ; power mW/W; time ns/us/ms/s; "
    "latency cycles. A bare number is in Hz, B/s, B, pJ/b, pJ, W, s or cycles."
)


@dataclass(frozen=True)
class RunConfig:
    """Every parameter group the subcommands need, plus where it came from"""
    system: SystemConfig = field(default_factory=SystemConfig)
    energy: EnergyParams = field(default_factory=EnergyParams)
    profile: WorkloadProfile = field(default_factory=WorkloadProfile)
    characterization: CharacterizationConfig = field(default_factory=CharacterizationConfig)
    thresholds: OffloadThresholds = field(default_factory=OffloadThresholds)
    source: Optional[str] = None


# =============================================================================
# Parsing
# =============================================================================


def parse_value(key: str, raw: str):
    """
    Convert one raw value for a known key.

    Raises:
        ConfigError: unknown key, unparsable value or wrong unit
    """
    if key not in KEYS:
        raise ConfigError(key, "unknown key")
    kind = KEYS[key][2]
    try:
        if kind == BOOL:
            return parse_bool(raw)
        if kind == COUNT_LIST:
            return parse_list(raw, Dimension.COUNT)
        if kind == BYTES_LIST:
            return parse_list(raw, Dimension.BYTES)
        if kind == REAL_LIST:
            return parse_list(raw, Dimension.REAL)
        if kind == OPTIONAL_COUNT:
            if raw.strip().lower() in ("auto", "none", ""):
                return None
            return parse_quantity(raw, Dimension.COUNT)
        return parse_quantity(raw, kind)
    except ValueError as e:
        raise ConfigError(key, str(e))


def parse_config_text(text: str, origin: str = "<config>") -> dict[str, str]:
    """Raw `key -> value` strings from config text; a repeated key keeps the last value"""
    values: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(None, f"{origin}:{line_no}: expected 'key = value'")
        if key in values:
            logger.warning(f"{origin}:{line_no}: '{key}' set more than once; last value wins")
        values[key] = value.strip()
    return values


def parse_override(text: str) -> tuple[str, str]:
    """'key=value' from a --set flag"""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(None, f"override '{text}' is not key=value")
    return key.strip(), value.strip()


def _first_key(problem: str, group: str) -> str:
    word = problem.split(" ", 1)[0]
    return word if word in KEYS else group


def build_run_config(values: dict[str, str], source: Optional[str] = None) -> RunConfig:
    """
    Apply raw values over the defaults and validate every group.

    Raises:
        ConfigError: naming the offending key
    """
    changes: dict[str, dict] = {g: {} for g in ("system", "energy", "profile", "characterization", "thresholds")}
    for key, raw in values.items():
        value = parse_value(key, raw)
        groups, attr, _ = KEYS[key]
        for group in groups:
            changes[group][attr] = value

    base = RunConfig()
    groups = {
        name: replace(getattr(base, name), **changes[name])
        for name in changes
    }
    for name, obj in groups.items():
        problems = obj.problems()
        if problems:
            raise ConfigError(_first_key(problems[0], name), "; ".join(problems))

    logger.debug(f"Config from {source or 'defaults'}: {len(values)} key(s) set")
    return RunConfig(**groups, source=source)


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
) -> RunConfig:
    """
    Defaults, then the file at `path` (if any), then `--set` overrides.

    Raises:
        ConfigError: unreadable file, unknown key or invalid value
    """
    values: dict[str, str] = {}
    source = None
    if path:
        source = str(path)
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(None, f"cannot read {path}: {e.strerror or e}")
        values.update(parse_config_text(text, source))
        logger.info(f"Loaded config {source} ({len(values)} keys)")
    for item in overrides:
        key, value = parse_override(item)
        values[key] = value
    return build_run_config(values, source)
