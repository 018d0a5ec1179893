from dataclasses import replace

import pytest

from analytic.delay import host_delay, nmc_delay
from analytic.energy import dynamic_breakdown, energy, host_static_power
from analytic.explore import compare
from analytic.params import EnergyParams, ModelResult, SystemConfig, Traffic, WorkloadProfile

SYSTEM = SystemConfig()
ENERGY = EnergyParams()


def evaluate(p: WorkloadProfile, s: SystemConfig = SYSTEM, ep: EnergyParams = ENERGY):
    return energy(p, s, ep, host_delay(p, s), nmc_delay(p, s))


def test_dram_layer_energy_of_one_gigabyte():
    result = ModelResult(t_nonmem=0.0, t_mem=0.0, traffic=Traffic(offchip=1e9))
    assert dynamic_breakdown(result, 0.0, ENERGY)["dram"] == pytest.approx(29.6e-3, rel=1e-6)


def test_published_constants_are_defaults():
    assert (ENERGY.e_dram_layer, ENERGY.e_logic_layer, ENERGY.p_static_nmc) == (3.7, 1.5, 0.96)


def test_vault_traffic_pays_dram_and_logic_layers():
    result = ModelResult(t_nonmem=0.0, t_mem=0.0, traffic=Traffic(vault=1e9))
    parts = dynamic_breakdown(result, 0.0, ENERGY)
    assert parts["dram"] == pytest.approx(29.6e-3)
    assert parts["logic"] == pytest.approx(12e-3)
    assert parts["link"] == 0.0


def test_host_static_power():
    # 4 cores at 0.5 W plus (4 x 32 KB + 256 KB) of cache at 0.25 W/MB
    assert host_static_power(SYSTEM, ENERGY) == pytest.approx(2.0 + 0.375 * 0.25)


def test_empty_workload_uses_no_energy():
    host, nmc = evaluate(WorkloadProfile(n_instr=0.0, n_mem=0.0))
    assert host.e_total == nmc.e_total == 0.0


def test_doubling_static_power_doubles_static_energy():
    p = WorkloadProfile(m1=0.5, m2=0.5, offload_fraction=0.0)
    base, _ = evaluate(p)
    doubled = replace(ENERGY, p_static_core=2 * ENERGY.p_static_core,
                      p_static_cache_per_mb=2 * ENERGY.p_static_cache_per_mb)
    hot, _ = evaluate(p, ep=doubled)
    assert hot.e_static == pytest.approx(2 * base.e_static)
    assert hot.e_dynamic == base.e_dynamic


def test_host_energy_is_linear_in_workload_size():
    p = WorkloadProfile(n_instr=1e8, n_mem=4e7, m1=0.3, m2=0.2)
    base, _ = evaluate(p)
    big, _ = evaluate(replace(p, n_instr=3e8, n_mem=1.2e8))
    assert big.e_dynamic == pytest.approx(3 * base.e_dynamic)
    assert big.e_total == pytest.approx(3 * base.e_total)


def test_breakdown_sums_to_total():
    _, nmc = evaluate(WorkloadProfile(offload_fraction=0.6))
    assert sum(nmc.energy_breakdown.values()) == pytest.approx(nmc.e_total)
    assert nmc.energy_breakdown["static"] == nmc.e_static


def test_nmc_static_power_only_when_offloading():
    host, nmc = evaluate(WorkloadProfile(offload_fraction=0.0))
    assert nmc.e_static == host.e_static

    host, nmc = evaluate(WorkloadProfile(offload_fraction=1.0))
    p_host = host_static_power(SYSTEM, ENERGY)
    assert nmc.e_static == pytest.approx(nmc.t_total * (p_host + ENERGY.p_static_nmc))


def test_offloaded_instructions_use_nmc_op_energy():
    p = WorkloadProfile(n_instr=1e9, n_mem=0.0, offload_fraction=1.0)
    _, nmc = evaluate(p)
    assert nmc.energy_breakdown["ops"] == pytest.approx(1e9 * ENERGY.e_op_nmc * 1e-12)


def test_zero_offload_ratios_are_exactly_one():
    result = compare(WorkloadProfile(m1=0.37, m2=0.81, offload_fraction=0.0), SYSTEM, ENERGY)
    assert result.normalized_delay == 1.0
    assert result.normalized_energy == 1.0
