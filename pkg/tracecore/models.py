"""Trace data model: opcode classes, instruction records, traces and synthetic pattern specs"""

from array import array
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Optional

import numpy as np


# =============================================================================
# Enums
# =============================================================================


class OpcodeClass(str, Enum):
    LOAD = "LOAD"
    STORE = "STORE"
    IADD = "IADD"
    IMUL = "IMUL"
    FADD = "FADD"
    FMUL = "FMUL"
    FDIV = "FDIV"
    BRANCH = "BRANCH"
    OTHER = "OTHER"

    @property
    def is_memory(self) -> bool:
        return self in MEMORY_OPCODES


MEMORY_OPCODES = frozenset({OpcodeClass.LOAD, OpcodeClass.STORE})

# Every opcode in declaration order; used for stable output ordering
OPCODE_ORDER = tuple(OpcodeClass)
OPCODE_CODE = {op: i for i, op in enumerate(OPCODE_ORDER)}

VALID_MEM_SIZES = (1, 2, 4, 8, 16, 32, 64)
DEFAULT_ELEMENT_SIZE = 8
MAX_ADDRESS = (1 << 64) - 1
NO_REGISTER = -1
ITER_CHUNK = 1 << 16


class PatternKind(str, Enum):
    SEQUENTIAL = "sequential"
    STRIDED = "strided"
    RANDOM = "random"
    POINTER_CHASE = "pointer_chase"
    STENCIL1D = "stencil1d"
    DIAGONAL = "diagonal"


class DepShape(str, Enum):
    INDEPENDENT = "independent"
    CHAIN = "chain"
    FANOUT = "fanout"


# =============================================================================
# Records and traces
# =============================================================================


@dataclass(frozen=True, slots=True)
class InstructionRecord:
    """One dynamic instruction"""
    seq_id: int
    opcode: OpcodeClass
    bb_id: int
    dest: Optional[int] = None
    sources: tuple[int, ...] = ()
    mem_addr: Optional[int] = None
    mem_size: Optional[int] = None

    @property
    def is_memory(self) -> bool:
        return self.mem_addr is not None


@dataclass(frozen=True)
class TraceMetadata:
    name: str = "trace"
    element_size: int = DEFAULT_ELEMENT_SIZE
    source: str = "parsed"  # parsed | synthetic:<pattern>


@dataclass(frozen=True, eq=False)
class Trace:
    """
    Immutable ordered sequence of records (iteration order == seq_id order)

    Stored column-wise. Records are materialized only when iterated or
    indexed. Missing registers are stored as NO_REGISTER.
    has_addr marks which mem_addr entries are real; a missing size is 0.
    """
    seq_id: np.ndarray       # int64
    opcode: np.ndarray       # uint8 code into OPCODE_ORDER
    bb_id: np.ndarray        # int64
    dest: np.ndarray         # int64
    src_offsets: np.ndarray  # int64, n + 1 entries; sources of i are src_regs[off[i]:off[i + 1]]
    src_regs: np.ndarray     # int64
    mem_addr: np.ndarray     # uint64
    has_addr: np.ndarray     # bool
    mem_size: np.ndarray     # uint32
    metadata: TraceMetadata = field(default_factory=TraceMetadata)

    def __post_init__(self):
        n = self.seq_id.size
        for column in (self.opcode, self.bb_id, self.dest, self.mem_addr, self.has_addr, self.mem_size):
            if column.size != n:
                raise ValueError(f"trace columns disagree in length ({column.size} != {n})")
        if self.src_offsets.size != n + 1:
            raise ValueError("src_offsets must have one entry more than the record count")
        for column in self.columns():
            column.flags.writeable = False

    @classmethod
    def from_records(cls, records: Iterable[InstructionRecord], metadata: Optional[TraceMetadata] = None) -> "Trace":
        builder = TraceBuilder()
        for record in records:
            builder.append(record)
        return builder.build(metadata or TraceMetadata())

    def columns(self) -> tuple[np.ndarray, ...]:
        return (
            self.seq_id, self.opcode, self.bb_id, self.dest, self.src_offsets,
            self.src_regs, self.mem_addr, self.has_addr, self.mem_size,
        )

    def __len__(self) -> int:
        return int(self.seq_id.size)

    def __iter__(self) -> Iterator[InstructionRecord]:
        for start in range(0, len(self), ITER_CHUNK):
            yield from self._records_between(start, min(start + ITER_CHUNK, len(self)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.metadata == other.metadata and self.same_records(other)

    __hash__ = None

    def same_records(self, other: "Trace") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.columns(), other.columns()))

    def record(self, index: int) -> InstructionRecord:
        n = len(self)
        if index < 0:
            index += n
        if not 0 <= index < n:
            raise IndexError("trace index out of range")
        return next(iter(self._records_between(index, index + 1)))

    def _records_between(self, start: int, stop: int) -> list[InstructionRecord]:
        seq = self.seq_id[start:stop].tolist()
        ops = self.opcode[start:stop].tolist()
        bbs = self.bb_id[start:stop].tolist()
        dests = self.dest[start:stop].tolist()
        offsets = self.src_offsets[start:stop + 1].tolist()
        regs = self.src_regs[offsets[0]:offsets[-1]].tolist()
        addrs = self.mem_addr[start:stop].tolist()
        present = self.has_addr[start:stop].tolist()
        sizes = self.mem_size[start:stop].tolist()
        base = offsets[0]

        out = []
        for k in range(stop - start):
            out.append(InstructionRecord(
                seq_id=seq[k],
                opcode=OPCODE_ORDER[ops[k]],
                bb_id=bbs[k],
                dest=None if dests[k] == NO_REGISTER else dests[k],
                sources=tuple(regs[offsets[k] - base:offsets[k + 1] - base]),
                mem_addr=addrs[k] if present[k] else None,
                mem_size=sizes[k] or None,
            ))
        return out

    @property
    def records(self) -> "RecordView":
        return RecordView(self)

    @property
    def name(self) -> str:
        return self.metadata.name

    @cached_property
    def memory_addresses(self) -> np.ndarray:
        """Addresses of all LOAD/STORE records in trace order (uint64)"""
        return self.mem_addr[self.has_addr]

    @cached_property
    def memory_sizes(self) -> np.ndarray:
        return self.mem_size[self.has_addr].astype(np.uint64)

    @property
    def n_memory(self) -> int:
        return int(np.count_nonzero(self.has_addr))

    def opcode_counts(self) -> np.ndarray:
        """Instruction count per OPCODE_ORDER position"""
        return np.bincount(self.opcode, minlength=len(OPCODE_ORDER))

    def with_records(self, records) -> "Trace":
        """New trace with the same metadata"""
        return Trace.from_records(records, self.metadata)


class RecordView(Sequence):
    """Read-only sequence of InstructionRecord over a columnar trace"""

    __slots__ = ("_trace",)

    def __init__(self, trace: Trace):
        self._trace = trace

    def __len__(self) -> int:
        return len(self._trace)

    def __iter__(self) -> Iterator[InstructionRecord]:
        return iter(self._trace)

    def __getitem__(self, index):
        if isinstance(index, slice):
            start, stop, step = index.indices(len(self._trace))
            if step == 1:
                return tuple(self._trace._records_between(start, max(start, stop)))
            return tuple(self._trace.record(i) for i in range(start, stop, step))
        return self._trace.record(index)

    def __eq__(self, other) -> bool:
        if isinstance(other, RecordView):
            return self._trace.same_records(other._trace)
        if isinstance(other, (tuple, list)):
            return tuple(self) == tuple(other)
        return NotImplemented

    __hash__ = None


def _frozen(buffer: array, dtype) -> np.ndarray:
    if not len(buffer):
        return np.zeros(0, dtype=dtype)
    return np.frombuffer(buffer, dtype=dtype)


class TraceBuilder:
    """Appends records column by column; build() freezes them into a Trace"""

    def __init__(self):
        self._seq = array("q")
        self._opcode = array("B")
        self._bb = array("q")
        self._dest = array("q")
        self._src_offsets = array("q", [0])
        self._src = array("q")
        self._addr = array("Q")
        self._has_addr = array("B")
        self._size = array("I")

    def __len__(self) -> int:
        return len(self._seq)

    def append(self, record: InstructionRecord) -> None:
        self._seq.append(record.seq_id)
        self._opcode.append(OPCODE_CODE[record.opcode])
        self._bb.append(record.bb_id)
        self._dest.append(NO_REGISTER if record.dest is None else record.dest)
        self._src.extend(record.sources)
        self._src_offsets.append(len(self._src))
        self._addr.append(0 if record.mem_addr is None else record.mem_addr)
        self._has_addr.append(record.mem_addr is not None)
        self._size.append(record.mem_size or 0)

    def build(self, metadata: TraceMetadata) -> Trace:
        return Trace(
            seq_id=_frozen(self._seq, np.int64),
            opcode=_frozen(self._opcode, np.uint8),
            bb_id=_frozen(self._bb, np.int64),
            dest=_frozen(self._dest, np.int64),
            src_offsets=_frozen(self._src_offsets, np.int64),
            src_regs=_frozen(self._src, np.int64),
            mem_addr=_frozen(self._addr, np.uint64),
            has_addr=_frozen(self._has_addr, np.uint8).astype(bool),
            mem_size=_frozen(self._size, np.uint32),
            metadata=metadata,
        )


# =============================================================================
# Synthetic pattern specification
# =============================================================================


@dataclass(frozen=True)
class PatternSpec:
    """Parameters of a synthetic trace; seed fully determines the output"""
    kind: PatternKind
    n_accesses: Optional[int] = None  # None = natural length (structured kinds) or 1024
    element_size: int = DEFAULT_ELEMENT_SIZE
    base: int = 0

    # strided
    stride_bytes: int = 64
    # sequential / strided working-set wraparound
    footprint_bytes: Optional[int] = None
    # random
    range_bytes: int = 1 << 20
    # pointer_chase
    nodes: int = 4096
    node_bytes: int = 64
    # stencil1d
    array_bytes: int = 1 << 20
    sweeps: int = 1
    # diagonal
    matrix_dim: int = 256

    seed: int = 0
    compute_mix: float = 0.0
    dep_shape: DepShape = DepShape.INDEPENDENT
    fanout: int = 2
    block_len: int = 16
    store_every: int = 0

    def problems(self) -> list[str]:
        """Validate pattern parameters"""
        errors = []
        if self.n_accesses is not None and self.n_accesses < 1:
            errors.append("n_accesses must be >= 1")
        if self.element_size not in VALID_MEM_SIZES:
            errors.append(f"element_size must be one of {VALID_MEM_SIZES}")
        if self.base < 0:
            errors.append("base must be non-negative")
        if not 0.0 <= self.compute_mix <= 1.0:
            errors.append("compute_mix must be in [0, 1]")
        if self.block_len < 1:
            errors.append("block_len must be >= 1")
        if self.store_every < 0:
            errors.append("store_every must be >= 0")
        if self.dep_shape == DepShape.FANOUT and self.fanout < 1:
            errors.append("fanout must be >= 1")
        if self.kind == PatternKind.STRIDED and self.stride_bytes < 1:
            errors.append("stride_bytes must be >= 1")
        if self.footprint_bytes is not None and self.footprint_bytes < self.element_size:
            errors.append("footprint_bytes must hold at least one element")
        if self.kind == PatternKind.RANDOM and self.range_bytes < self.element_size:
            errors.append("range_bytes must hold at least one element")
        if self.kind == PatternKind.POINTER_CHASE:
            if self.nodes < 1:
                errors.append("nodes must be >= 1")
            if self.node_bytes < self.element_size:
                errors.append("node_bytes must be >= element_size")
        if self.kind == PatternKind.STENCIL1D:
            if self.array_bytes // self.element_size < 3:
                errors.append("array_bytes must hold at least 3 elements")
            if self.sweeps < 1:
                errors.append("sweeps must be >= 1")
        if self.kind == PatternKind.DIAGONAL and self.matrix_dim < 1:
            errors.append("matrix_dim must be >= 1")
        return errors
