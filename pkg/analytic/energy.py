"""
Energy model

Dynamic energy is bytes moved at each level times energy per bit, plus a
per-instruction cost. Static energy is run time times static power; host
static power scales with the core count and the total cache size.
"""

import logging
from dataclasses import replace

from .params import MB, PJ, EnergyParams, ModelResult, SystemConfig, WorkloadProfile, check

logger = logging.getLogger(__name__)

BITS_PER_BYTE = 8


def host_static_power(s: SystemConfig, ep: EnergyParams) -> float:
    cache_mb = (s.s_l1 * s.n_cores + s.s_l2) / MB
    return s.n_cores * ep.p_static_core + cache_mb * ep.p_static_cache_per_mb


def dynamic_breakdown(result: ModelResult, host_instructions: float, ep: EnergyParams) -> dict[str, float]:
    """Joules per component for the traffic and instructions of one system"""
    t = result.traffic
    bits = BITS_PER_BYTE * PJ
    return {
        "l1": t.l1 * bits * ep.e_l1_access,
        "l2": t.l2 * bits * ep.e_l2_access,
        "link": t.offchip * bits * ep.e_offchip_link,
        "dram": t.offchip * bits * ep.e_dram_layer + t.vault * bits * ep.e_dram_layer,
        "logic": t.vault * bits * ep.e_logic_layer,
        "ops": host_instructions * ep.e_op_host * PJ + result.offloaded_instructions * ep.e_op_nmc * PJ,
    }


def _with_energy(result: ModelResult, host_instructions: float, static_power: float, ep: EnergyParams) -> ModelResult:
    breakdown = dynamic_breakdown(result, host_instructions, ep)
    e_dynamic = sum(breakdown.values())
    e_static = result.t_total * static_power
    breakdown["static"] = e_static
    return replace(result, e_dynamic=e_dynamic, e_static=e_static, energy_breakdown=breakdown)


def energy(
    p: WorkloadProfile,
    s: SystemConfig,
    ep: EnergyParams,
    host_res: ModelResult,
    nmc_res: ModelResult,
) -> tuple[ModelResult, ModelResult]:
    """
    Fill the energy fields of both delay results.

    The logic-layer static power is charged only when work is offloaded.
    """
    check(p, s, ep)
    p_host = host_static_power(s, ep)
    host = _with_energy(host_res, p.n_instr, p_host, ep)

    p_nmc = p_host + (ep.p_static_nmc if nmc_res.offloaded_instructions > 0 else 0.0)
    nmc = _with_energy(nmc_res, p.n_instr - nmc_res.offloaded_instructions, p_nmc, ep)
    logger.debug(f"Energy host={host.e_total:.3e}J nmc={nmc.e_total:.3e}J")
    return host, nmc
