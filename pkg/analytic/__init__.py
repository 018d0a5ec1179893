"""First-order delay and energy model: multi-core host vs host+NMC"""

from .params import (
    SystemConfig, EnergyParams, WorkloadProfile, ModelResult, ComparisonResult, Traffic,
)
from .delay import host_delay, nmc_delay
from .energy import energy
from .explore import compare, sweep, SweepSpec, SweepRow, parse_grid, rows_to_csv

__all__ = [
    "SystemConfig", "EnergyParams", "WorkloadProfile", "ModelResult", "ComparisonResult", "Traffic",
    "host_delay", "nmc_delay", "energy",
    "compare", "sweep", "SweepSpec", "SweepRow", "parse_grid", "rows_to_csv",
]
