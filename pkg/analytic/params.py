"""
Model parameters and results

Internal units: seconds, Hz, bytes, bytes/s, pJ/bit, pJ/instruction, W.
Only the reference host system parameters and the HMC constants 3.7 pJ/b,
1.5 pJ/b and 0.96 W come from published numbers; every other default is a
plausible HMC-era design choice.
"""

from dataclasses import dataclass, field, fields
from typing import Optional

from errors import ModelError

KB = 1024
MB = 1024 * 1024
GB_BINARY = 1024 ** 3
GHZ = 1e9
GBPS = 1e9
PJ = 1e-12


@dataclass(frozen=True)
class SystemConfig:
    # Host (published system parameters)
    n_cores: int = 4
    f_host: float = 3.0 * GHZ
    f_nmc: float = 1.2 * GHZ
    s_l1: int = 32 * KB
    s_l2: int = 256 * KB
    s_dram: int = 4 * GB_BINARY
    bw_l1: float = 137 * GBPS
    bw_l2: float = 137 * GBPS
    lat_l1: float = 1.0   # cycles
    lat_l2: float = 2.0   # cycles

    # Design choices
    line_size: int = 64
    n_vaults: int = 16
    bw_per_vault: float = 10 * GBPS
    n_links: int = 4
    bw_per_link: float = 16 * GBPS
    ipc_host: float = 1.0
    ipc_nmc: float = 1.0
    n_nmc_cores: Optional[int] = None  # None = one core per vault
    t_launch: float = 5e-6
    overlap: float = 0.0

    @property
    def nmc_cores(self) -> int:
        cores = self.n_vaults if self.n_nmc_cores is None else self.n_nmc_cores
        return min(self.n_vaults, cores)

    @property
    def external_bandwidth(self) -> float:
        return self.n_links * self.bw_per_link

    @property
    def internal_bandwidth(self) -> float:
        return self.n_vaults * self.bw_per_vault

    def problems(self) -> list[str]:
        errors = []
        for name in ("n_cores", "n_vaults", "n_links", "line_size", "s_l1", "s_l2", "s_dram"):
            if getattr(self, name) < 1:
                errors.append(f"{name} must be >= 1")
        for name in ("f_host", "f_nmc", "bw_l1", "bw_l2", "bw_per_vault", "bw_per_link", "ipc_host", "ipc_nmc"):
            if not getattr(self, name) > 0:
                errors.append(f"{name} must be > 0")
        for name in ("lat_l1", "lat_l2", "t_launch"):
            if getattr(self, name) < 0:
                errors.append(f"{name} must be >= 0")
        if self.n_nmc_cores is not None and self.n_nmc_cores < 1:
            errors.append("n_nmc_cores must be >= 1")
        if not 0.0 <= self.overlap <= 1.0:
            errors.append("overlap must be in [0, 1]")
        return errors


@dataclass(frozen=True)
class EnergyParams:
    # HMC constants (published)
    e_dram_layer: float = 3.7     # pJ/bit
    e_logic_layer: float = 1.5    # pJ/bit
    p_static_nmc: float = 0.96    # W

    # Design choices
    e_l1_access: float = 0.15     # pJ/bit
    e_l2_access: float = 0.35     # pJ/bit
    e_offchip_link: float = 6.0   # pJ/bit
    p_static_core: float = 0.5    # W per core
    p_static_cache_per_mb: float = 0.25  # W per MB of cache
    e_op_host: float = 50.0       # pJ/instruction
    e_op_nmc: float = 20.0        # pJ/instruction

    def problems(self) -> list[str]:
        return [f"{f.name} must be >= 0" for f in fields(self) if getattr(self, f.name) < 0]


@dataclass(frozen=True)
class WorkloadProfile:
    n_instr: float = 1e9
    n_mem: float = 5e8
    m1: float = 0.1
    m2: float = 0.1
    offload_fraction: float = 1.0
    parallel_fraction: float = 1.0

    def problems(self) -> list[str]:
        errors = []
        if self.n_instr < 0 or self.n_mem < 0:
            errors.append("n_instr and n_mem must be non-negative")
        if self.n_mem > self.n_instr:
            errors.append("n_mem must not exceed n_instr")
        for name in ("m1", "m2", "offload_fraction", "parallel_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                errors.append(f"{name} must be in [0, 1]")
        return errors


def check(*items) -> None:
    """Raise ModelError listing every problem of the given parameter objects"""
    problems = [p for item in items for p in item.problems()]
    if problems:
        raise ModelError("; ".join(problems))


@dataclass(frozen=True)
class Traffic:
    """Bytes moved at each level"""
    l1: float = 0.0
    l2: float = 0.0
    offchip: float = 0.0
    vault: float = 0.0

    def __add__(self, other: "Traffic") -> "Traffic":
        return Traffic(self.l1 + other.l1, self.l2 + other.l2,
                       self.offchip + other.offchip, self.vault + other.vault)


@dataclass(frozen=True)
class ModelResult:
    t_nonmem: float
    t_mem: float
    traffic: Traffic
    time_breakdown: dict[str, float] = field(default_factory=dict)
    e_dynamic: float = 0.0
    e_static: float = 0.0
    energy_breakdown: dict[str, float] = field(default_factory=dict)
    offloaded_instructions: float = 0.0

    @property
    def t_total(self) -> float:
        return self.t_nonmem + self.t_mem

    @property
    def e_total(self) -> float:
        return self.e_dynamic + self.e_static

    @property
    def t_dram(self) -> float:
        """Main-memory transfer time: external links plus vault accesses"""
        return self.time_breakdown.get("offchip", 0.0) + self.time_breakdown.get("vault", 0.0)


@dataclass(frozen=True)
class ComparisonResult:
    host: ModelResult
    nmc: ModelResult

    @property
    def normalized_delay(self) -> float:
        """host / (host+NMC); above 1 favors NMC"""
        return _ratio(self.host.t_total, self.nmc.t_total)

    @property
    def normalized_energy(self) -> float:
        return _ratio(self.host.e_total, self.nmc.e_total)


def _ratio(host: float, nmc: float) -> float:
    if host == nmc:
        return 1.0
    if nmc == 0.0:
        return float("inf")
    return host / nmc
