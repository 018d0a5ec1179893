"""End-to-end properties of the characterizer and the model"""

import io
import time
import tracemalloc

import numpy as np
import pytest

from analytic.delay import host_delay, nmc_delay
from analytic.energy import dynamic_breakdown
from analytic.explore import parse_grid, sweep
from analytic.params import EnergyParams, ModelResult, SystemConfig, Traffic, WorkloadProfile
from characterization.entropy import entropy_curve, memory_entropy
from characterization.locality import miss_counts, spatial_locality_pair, spatial_locality_total
from characterization.parallelism import bb_parallelism, build_dependence_dag, dlp_per_opcode
from characterization.signature import signature
from tracecore.models import DepShape, OpcodeClass, PatternKind
from tracecore.parser import parse_trace, serialize_trace
from .factories import load_trace, op_trace, random_scatter, sequential, strided, synthetic
from .oracles import lines_of, naive_lru_misses

CAPACITY = 32 * 1024
FROM_LINES = (8, 16, 32, 64)


# =============================================================================
# Entropy
# =============================================================================


@pytest.mark.parametrize("k", [4, 8, 12])
def test_uniform_stream_entropy_is_exact(k):
    trace = load_trace(np.arange(2 ** k) * 8)
    assert memory_entropy(trace, 0) == pytest.approx(k, abs=1e-9)


def test_constant_stream_has_zero_entropy():
    assert memory_entropy(load_trace([0x4000] * 1000), 0) == 0.0


def random_spec_trace(rng: np.random.Generator):
    kind = PatternKind(rng.choice([k.value for k in PatternKind]))
    fields = {"seed": int(rng.integers(0, 1 << 16)), "element_size": int(rng.choice([4, 8, 16]))}
    if kind == PatternKind.STENCIL1D:
        fields["array_bytes"] = int(rng.integers(64, 8192))
    elif kind == PatternKind.DIAGONAL:
        fields["matrix_dim"] = int(rng.integers(2, 48))
    elif kind == PatternKind.POINTER_CHASE:
        fields["nodes"] = int(rng.integers(1, 2048))
    else:
        fields["n_accesses"] = int(rng.integers(1, 4096))
        fields["stride_bytes"] = int(rng.integers(1, 512))
        fields["range_bytes"] = int(rng.integers(64, 1 << 24))
    return synthetic(kind, **fields)


def test_entropy_never_grows_with_bit_reduction():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        values = [h for _, h in entropy_curve(random_spec_trace(rng), (0, 3, 6, 9)).points]
        assert all(b <= a for a, b in zip(values, values[1:]))


# =============================================================================
# Spatial locality
# =============================================================================


def test_sequential_locality_is_exactly_one():
    trace = sequential(4 * CAPACITY // 8)
    assert spatial_locality_total(trace, FROM_LINES, CAPACITY).total == 1.0


def test_far_apart_random_accesses_have_no_locality():
    trace = random_scatter(8192, 1 << 30, seed=11)
    assert spatial_locality_total(trace, FROM_LINES, CAPACITY).total <= 0.05


@pytest.mark.parametrize("from_line", FROM_LINES)
def test_sequential_beats_double_line_stride(from_line):
    seq, wide = sequential(8192), strided(8192, 2 * 64)
    assert spatial_locality_pair(seq, from_line, CAPACITY) > spatial_locality_pair(wide, from_line, CAPACITY)


def test_miss_counts_match_naive_replay():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 2000))
        addresses = rng.integers(0, int(rng.choice([1 << 10, 1 << 14, 1 << 20])), size=n) & ~7
        trace = load_trace(addresses)
        capacity = int(rng.choice([128, 512, 1024, 4096]))
        engine = miss_counts(trace, [8, 16, 32, 64], capacity)
        for line, misses in engine.items():
            assert misses == naive_lru_misses(lines_of(trace, line), capacity // line)


# =============================================================================
# Kernel analogues
# =============================================================================


def test_stencil_vs_diagonal(stencil_trace, diagonal_trace):
    capacity = 1024
    stencil = spatial_locality_total(stencil_trace, FROM_LINES, capacity).total
    diagonal = spatial_locality_total(diagonal_trace, FROM_LINES, capacity).total
    assert stencil > diagonal
    for reduction in (0, 6):
        assert memory_entropy(stencil_trace, reduction) < memory_entropy(diagonal_trace, reduction)


# =============================================================================
# Parallelism
# =============================================================================


def test_chain_and_independent_dlp():
    n = 32
    chain = op_trace([(OpcodeClass.FADD, i + 1, (i,) if i else ()) for i in range(n)])
    free = op_trace([(OpcodeClass.FADD, i + 1, ()) for i in range(n)])
    assert dlp_per_opcode(build_dependence_dag(chain))[OpcodeClass.FADD] == 1.0
    assert dlp_per_opcode(build_dependence_dag(free))[OpcodeClass.FADD] == n


def test_binary_block_tree():
    ops = []
    for b in range(7):
        parent = (b - 1) // 2
        sources = (2 * parent + 2,) if b else ()
        ops.append((OpcodeClass.IADD, 2 * b + 1, sources, b))
        ops.append((OpcodeClass.IADD, 2 * b + 2, (2 * b + 1,), b))
    assert bb_parallelism(op_trace(ops)) == pytest.approx(7 / 3, abs=1e-9)


# =============================================================================
# Model
# =============================================================================


def test_dram_energy_constant():
    result = ModelResult(t_nonmem=0.0, t_mem=0.0, traffic=Traffic(offchip=1e9))
    assert dynamic_breakdown(result, 0.0, EnergyParams())["dram"] == pytest.approx(29.6e-3, rel=1e-6)


def grid_ratios(offload: float):
    grid = parse_grid("m1=0:1:0.1,m2=0:1:0.1")
    profile = WorkloadProfile(n_instr=1e9, n_mem=5e8, offload_fraction=offload)
    rows = sweep(grid, SystemConfig(), EnergyParams(), profile)
    delay = np.array([r.result.normalized_delay for r in rows]).reshape(11, 11)
    energy = np.array([r.result.normalized_energy for r in rows]).reshape(11, 11)
    return delay, energy


def test_miss_rate_sweep_trends():
    started = time.perf_counter()
    delay, energy = grid_ratios(1.0)
    for ratio in (delay, energy):
        assert (np.diff(ratio, axis=0) >= 0).all()
        assert (np.diff(ratio, axis=1) >= 0).all()
        assert ratio.min() < 0.9
        assert ratio.max() > 1.5
    assert time.perf_counter() - started < 5.0


def test_zero_offload_sweep_is_neutral():
    delay, energy = grid_ratios(0.0)
    assert (delay == 1.0).all()
    assert (energy == 1.0).all()


def test_matched_bandwidths_give_matched_dram_time():
    s = SystemConfig(n_vaults=8, bw_per_vault=8e9, n_links=4, bw_per_link=16e9)
    p = WorkloadProfile(n_instr=1e9, n_mem=1e9, m1=1.0, m2=1.0)
    assert nmc_delay(p, s).t_dram == pytest.approx(host_delay(p, s).t_dram, rel=1e-9)


# =============================================================================
# Reproducibility
# =============================================================================


def test_every_subcommand_is_byte_reproducible(cli, tmp_path):
    def twice(name, *argv):
        outs = [tmp_path / f"{name}-{i}" for i in range(2)]
        for out in outs:
            code, _, _ = cli(*argv, "--out", out)
            assert code == 0
        assert outs[0].read_bytes() == outs[1].read_bytes()
        return outs[0]

    trace = twice("trace", "gen-trace", "--pattern", "random", "--n", 3000, "--seed", 5, "--compute-mix", 0.25)
    sig = twice("sig", "characterize", "--reuse", trace)
    twice("model", "model", "--m1", 0.3, "--m2", 0.6)
    twice("sweep", "sweep", "--grid", "m1=0:1:0.5,m2=0:1:0.5,n_vaults=8,16")
    twice("advise", "advise", sig)


# =============================================================================
# Throughput and memory
# =============================================================================

GIB = 1024 ** 3


def ten_million_records():
    return synthetic(PatternKind.RANDOM, n_accesses=7_500_000, compute_mix=0.25,
                     dep_shape=DepShape.FANOUT, range_bytes=1 << 28)


def test_parsed_trace_is_stored_compactly():
    data = serialize_trace(random_scatter(75_000, 1 << 28, seed=2, compute_mix=0.25, dep_shape=DepShape.FANOUT))
    tracemalloc.start()
    try:
        before, _ = tracemalloc.get_traced_memory()
        trace = parse_trace(io.BytesIO(data))
        after, _ = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert len(trace) == 100_000
    assert (after - before) / len(trace) < 100


@pytest.mark.slow
def test_ten_million_records_under_a_minute():
    trace = ten_million_records()
    assert len(trace) == 10_000_000
    started = time.perf_counter()
    signature(trace)
    assert time.perf_counter() - started < 60.0


@pytest.mark.slow
def test_ten_million_records_characterized_under_two_gigabytes():
    tracemalloc.start()
    try:
        trace = ten_million_records()
        signature(trace)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert peak < 2 * GIB
