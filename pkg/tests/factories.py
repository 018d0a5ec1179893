"""Small trace builders shared by the tests"""

from typing import Iterable, Optional, Sequence

from tracecore.generator import generate_synthetic
from tracecore.models import (
    DepShape, InstructionRecord, OpcodeClass, PatternKind, PatternSpec, Trace, TraceMetadata,
)


def make_trace(records: Iterable[InstructionRecord], name: str = "t") -> Trace:
    return Trace.from_records(records, TraceMetadata(name=name))


def load_trace(addresses: Sequence[int], size: int = 8, name: str = "loads") -> Trace:
    """Independent LOADs, one per address, one basic block"""
    return make_trace(
        (InstructionRecord(i, OpcodeClass.LOAD, 0, i + 1, (), int(a), size) for i, a in enumerate(addresses)),
        name=name,
    )


def op_trace(ops: Sequence[tuple], name: str = "ops") -> Trace:
    """
    Compute-only trace from (opcode, dest, sources[, bb_id]) tuples.
    """
    records = []
    for i, op in enumerate(ops):
        opcode, dest, sources = op[:3]
        bb_id = op[3] if len(op) > 3 else 0
        records.append(InstructionRecord(i, opcode, bb_id, dest, tuple(sources)))
    return make_trace(records, name=name)


def synthetic(kind: PatternKind, name: Optional[str] = None, **fields) -> Trace:
    return generate_synthetic(PatternSpec(kind=kind, **fields), name=name)


def sequential(n: int, **fields) -> Trace:
    return synthetic(PatternKind.SEQUENTIAL, n_accesses=n, **fields)


def strided(n: int, stride: int, **fields) -> Trace:
    return synthetic(PatternKind.STRIDED, n_accesses=n, stride_bytes=stride, **fields)


def random_scatter(n: int, range_bytes: int, seed: int = 0, **fields) -> Trace:
    return synthetic(PatternKind.RANDOM, n_accesses=n, range_bytes=range_bytes, seed=seed, **fields)


CHAIN = DepShape.CHAIN
FANOUT = DepShape.FANOUT
INDEPENDENT = DepShape.INDEPENDENT
