import numpy as np
import pytest

from characterization.parallelism import build_dependence_dag
from tracecore.generator import generate_synthetic
from tracecore.models import (
    NO_REGISTER, OPCODE_CODE, InstructionRecord, OpcodeClass, PatternKind, PatternSpec,
    Trace, TraceBuilder, TraceMetadata,
)
from .factories import CHAIN, FANOUT, INDEPENDENT, make_trace, op_trace, sequential
from .oracles import naive_synthetic_records

RECORDS = [
    InstructionRecord(0, OpcodeClass.LOAD, 0, 1, (), 0x40, 8),
    InstructionRecord(1, OpcodeClass.FADD, 0, 2, (1, 1)),
    InstructionRecord(2, OpcodeClass.STORE, 1, None, (2,), 0, 4),
    InstructionRecord(3, OpcodeClass.BRANCH, 1),
]


def test_columns_hold_the_records():
    trace = make_trace(RECORDS)
    assert trace.seq_id.tolist() == [0, 1, 2, 3]
    assert trace.opcode.dtype == np.uint8
    assert trace.opcode.tolist() == [OPCODE_CODE[r.opcode] for r in RECORDS]
    assert trace.dest.tolist() == [1, 2, NO_REGISTER, NO_REGISTER]
    assert trace.src_offsets.tolist() == [0, 0, 2, 3, 3]
    assert trace.src_regs.tolist() == [1, 1, 2]
    # address 0 is a real address, distinct from "no address"
    assert trace.has_addr.tolist() == [True, False, True, False]
    assert trace.memory_addresses.tolist() == [0x40, 0]
    assert trace.memory_sizes.tolist() == [8, 4]
    assert trace.n_memory == 2


def test_records_are_rebuilt_on_demand():
    trace = make_trace(RECORDS)
    assert list(trace) == RECORDS
    assert trace.records[2] == RECORDS[2]
    assert trace.records[-1] == RECORDS[-1]
    assert trace.records[1:3] == tuple(RECORDS[1:3])
    assert trace.records[::2] == (RECORDS[0], RECORDS[2])
    assert trace.records == RECORDS
    with pytest.raises(IndexError):
        trace.records[4]


def test_iteration_crosses_chunk_boundaries():
    trace = sequential(70_000, compute_mix=0.5)
    assert sum(1 for _ in trace) == len(trace) == 140_000
    assert [r.seq_id for r in trace.records[65_534:65_538]] == [65_534, 65_535, 65_536, 65_537]


def test_columns_are_read_only():
    trace = make_trace(RECORDS)
    with pytest.raises(ValueError):
        trace.mem_addr[0] = 1


def test_equality_compares_columns_and_metadata():
    a = make_trace(RECORDS)
    assert a == make_trace(RECORDS)
    assert a != make_trace(RECORDS[:3])
    assert a != make_trace(RECORDS, name="other")
    assert a.records == make_trace(RECORDS, name="other").records


def test_mismatched_columns_are_rejected():
    trace = make_trace(RECORDS)
    with pytest.raises(ValueError, match="disagree"):
        Trace(
            seq_id=trace.seq_id, opcode=trace.opcode[:2], bb_id=trace.bb_id, dest=trace.dest,
            src_offsets=trace.src_offsets, src_regs=trace.src_regs, mem_addr=trace.mem_addr,
            has_addr=trace.has_addr, mem_size=trace.mem_size,
        )


def test_empty_builder_gives_empty_trace():
    trace = TraceBuilder().build(TraceMetadata(name="empty"))
    assert len(trace) == 0
    assert trace.n_memory == 0
    assert list(trace) == []
    assert trace.src_offsets.tolist() == [0]


def test_opcode_counts_by_code():
    counts = make_trace(RECORDS).opcode_counts()
    assert counts[OPCODE_CODE[OpcodeClass.FADD]] == 1
    assert counts.sum() == 4


@pytest.mark.parametrize("kind,fields", [
    (PatternKind.SEQUENTIAL, dict(n_accesses=300, compute_mix=0.4, store_every=3)),
    (PatternKind.RANDOM, dict(n_accesses=257, compute_mix=0.25, store_every=2, seed=5)),
    (PatternKind.STENCIL1D, dict(array_bytes=512, compute_mix=0.6)),
    (PatternKind.DIAGONAL, dict(matrix_dim=6, compute_mix=0.1)),
    (PatternKind.POINTER_CHASE, dict(nodes=50, n_accesses=120, store_every=1)),
])
@pytest.mark.parametrize("shape", [CHAIN, FANOUT, INDEPENDENT])
def test_generator_matches_record_at_a_time_emission(kind, fields, shape):
    spec = PatternSpec(kind=kind, dep_shape=shape, fanout=3, block_len=7, **fields)
    assert list(generate_synthetic(spec)) == naive_synthetic_records(spec)


def test_sparse_registers_give_the_same_dag():
    shape = [
        (OpcodeClass.FADD, 1, ()),
        (OpcodeClass.FADD, 2, (1,)),
        (OpcodeClass.FMUL, 3, (2, 1)),
        (OpcodeClass.FADD, 1, ()),
        (OpcodeClass.FMUL, 4, (1, 3), 1),
    ]
    spread = [(op, dest * 1_000_000_007, tuple(s * 1_000_000_007 for s in src), *rest)
              for op, dest, src, *rest in shape]
    dense = build_dependence_dag(op_trace(shape))
    sparse = build_dependence_dag(op_trace(spread))
    assert sparse.depths.tolist() == dense.depths.tolist() == [0, 1, 2, 0, 3]
    assert sparse.block_depths.tolist() == dense.block_depths.tolist()
