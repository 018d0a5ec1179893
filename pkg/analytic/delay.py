"""
First-order delay model

Host: private L1 per core, shared L2, external links to the memory stack.
Each cache level costs max(latency bound, bandwidth bound). Host+NMC: the
offloaded share runs on vault-attached cores that bypass the caches, the rest
runs on the host; the two phases serialize unless an overlap factor is set.
"""

import logging
from dataclasses import replace

from .params import ModelResult, SystemConfig, Traffic, WorkloadProfile, check

logger = logging.getLogger(__name__)


def amdahl_speedup(parallel_fraction: float, n_cores: int) -> float:
    return 1.0 / ((1.0 - parallel_fraction) + parallel_fraction / n_cores)


def host_delay(p: WorkloadProfile, s: SystemConfig) -> ModelResult:
    """
    Delay on the multi-core host.

    t_nonmem = non-memory instructions / (f_host * ipc_host * Amdahl speedup)
    L1 (private): max(hit cycles / f_host / speedup, bytes / (n_cores * bw_l1))
    L2 (shared):  max(hit cycles / f_host, bytes / bw_l2)
    off-chip:     bytes / (n_links * bw_per_link)
    """
    check(p, s)
    speedup = amdahl_speedup(p.parallel_fraction, s.n_cores)
    t_nonmem = (p.n_instr - p.n_mem) / (s.f_host * s.ipc_host * speedup)

    traffic = Traffic(
        l1=p.n_mem * s.line_size,
        l2=p.n_mem * p.m1 * s.line_size,
        offchip=p.n_mem * p.m1 * p.m2 * s.line_size,
    )
    l1_hits = p.n_mem * (1.0 - p.m1)
    l2_hits = p.n_mem * p.m1 * (1.0 - p.m2)
    t_l1 = max(l1_hits * s.lat_l1 / s.f_host / speedup, traffic.l1 / (s.n_cores * s.bw_l1))
    t_l2 = max(l2_hits * s.lat_l2 / s.f_host, traffic.l2 / s.bw_l2)
    t_offchip = traffic.offchip / s.external_bandwidth

    return ModelResult(
        t_nonmem=t_nonmem,
        t_mem=t_l1 + t_l2 + t_offchip,
        traffic=traffic,
        time_breakdown={"compute": t_nonmem, "l1": t_l1, "l2": t_l2, "offchip": t_offchip},
    )


def residual_profile(p: WorkloadProfile) -> WorkloadProfile:
    """The share of the workload that stays on the host"""
    keep = 1.0 - p.offload_fraction
    return replace(p, n_instr=p.n_instr * keep, n_mem=p.n_mem * keep, offload_fraction=0.0)


def nmc_delay(p: WorkloadProfile, s: SystemConfig) -> ModelResult:
    """Delay of the host+NMC system; offload_fraction = 0 reproduces host_delay"""
    check(p, s)
    host_part = host_delay(residual_profile(p), s)

    off_instr = p.n_instr * p.offload_fraction
    off_mem = p.n_mem * p.offload_fraction
    if off_instr == 0.0:
        return host_part

    t_compute = (off_instr - off_mem) / (s.nmc_cores * s.f_nmc * s.ipc_nmc)
    vault_bytes = off_mem * s.line_size
    t_vault = vault_bytes / s.internal_bandwidth
    t_launch = s.t_launch

    t_nonmem = host_part.t_nonmem + t_compute + t_launch
    t_mem = host_part.t_mem + t_vault

    if s.overlap > 0.0:
        nmc_part = t_compute + t_vault + t_launch
        saved = s.overlap * min(host_part.t_total, nmc_part)
        total = t_nonmem + t_mem
        if saved > 0.0 and total > 0.0:
            scale = (total - saved) / total
            t_nonmem *= scale
            t_mem *= scale

    breakdown = dict(host_part.time_breakdown)
    breakdown["nmc_compute"] = t_compute
    breakdown["vault"] = t_vault
    breakdown["launch"] = t_launch
    logger.debug(f"NMC delay: compute={t_compute:.3e}s vault={t_vault:.3e}s host={host_part.t_total:.3e}s")

    return ModelResult(
        t_nonmem=t_nonmem,
        t_mem=t_mem,
        traffic=host_part.traffic + Traffic(vault=vault_bytes),
        time_breakdown=breakdown,
        offloaded_instructions=off_instr,
    )
