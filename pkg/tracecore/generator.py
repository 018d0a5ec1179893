"""
Synthetic trace generators

Deterministic given the PatternSpec (including its seed). Used as test oracles
and as stand-ins for real kernels: stencil1d behaves like a Jacobi-1d sweep and
diagonal like the column/diagonal walks of a Gram-Schmidt factorization.
"""

import logging
from typing import Optional

import numpy as np

from errors import PatternSpecError
from .models import (
    NO_REGISTER, OPCODE_CODE, DepShape, OpcodeClass, PatternKind, PatternSpec,
    Trace, TraceMetadata,
)

logger = logging.getLogger(__name__)

DEFAULT_ACCESSES = 1024

# r0 is never written, so reading it creates no dependence
ZERO_REGISTER = 0

DEFAULT_COMPUTE_OPCODES = (
    OpcodeClass.IADD,
    OpcodeClass.FADD,
    OpcodeClass.FMUL,
    OpcodeClass.IMUL,
)


# =============================================================================
# Address streams: (addresses, is_store) arrays
# =============================================================================


def _store_mask(n: int, store_every: int) -> np.ndarray:
    if store_every <= 0:
        return np.zeros(n, dtype=bool)
    return (np.arange(1, n + 1) % store_every) == 0


def _wrap(offsets: np.ndarray, spec: PatternSpec) -> np.ndarray:
    if spec.footprint_bytes is None:
        return offsets
    footprint = max(spec.footprint_bytes - spec.footprint_bytes % spec.element_size, spec.element_size)
    return offsets % footprint


def _sequential(spec: PatternSpec) -> tuple[np.ndarray, np.ndarray]:
    n = spec.n_accesses or DEFAULT_ACCESSES
    offsets = _wrap(np.arange(n, dtype=np.uint64) * spec.element_size, spec)
    return spec.base + offsets, _store_mask(n, spec.store_every)


def _strided(spec: PatternSpec) -> tuple[np.ndarray, np.ndarray]:
    n = spec.n_accesses or DEFAULT_ACCESSES
    offsets = _wrap(np.arange(n, dtype=np.uint64) * spec.stride_bytes, spec)
    return spec.base + offsets, _store_mask(n, spec.store_every)


def _random(spec: PatternSpec) -> tuple[np.ndarray, np.ndarray]:
    n = spec.n_accesses or DEFAULT_ACCESSES
    rng = np.random.default_rng(spec.seed)
    slots = spec.range_bytes // spec.element_size
    index = rng.integers(0, slots, size=n, dtype=np.uint64)
    return spec.base + index * spec.element_size, _store_mask(n, spec.store_every)


def _pointer_chase(spec: PatternSpec) -> tuple[np.ndarray, np.ndarray]:
    """Walk one fixed random permutation cycle over the node array"""
    n = spec.n_accesses or spec.nodes
    rng = np.random.default_rng(spec.seed)
    order = rng.permutation(spec.nodes).astype(np.uint64)
    visits = order[np.arange(n) % spec.nodes]
    return spec.base + visits * spec.node_bytes, _store_mask(n, spec.store_every)


def stencil1d_accesses_per_sweep(spec: PatternSpec) -> int:
    return 4 * (spec.array_bytes // spec.element_size - 2)


def _stencil1d(spec: PatternSpec) -> tuple[np.ndarray, np.ndarray]:
    """Jacobi-style 3-point stencil, ping-ponging between two arrays"""
    e = spec.element_size
    n = spec.array_bytes // e
    a_base = spec.base
    b_base = spec.base + n * e

    interior = np.arange(1, n - 1, dtype=np.uint64)
    # per point: LOAD src[i-1], LOAD src[i], LOAD src[i+1], STORE dst[i]
    pattern = np.stack([interior - 1, interior, interior + 1, interior], axis=1)
    is_store_one = np.tile(np.array([False, False, False, True]), n - 2)

    sweeps_addr = []
    for sweep in range(spec.sweeps):
        src, dst = (a_base, b_base) if sweep % 2 == 0 else (b_base, a_base)
        bases = np.array([src, src, src, dst], dtype=np.uint64)
        sweeps_addr.append((pattern * e + bases).reshape(-1))
    addrs = np.concatenate(sweeps_addr)
    is_store = np.tile(is_store_one, spec.sweeps)
    return _truncate(spec, addrs, is_store)


def _diagonal(spec: PatternSpec) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal element plus a column walk per k over row-major matrices"""
    d = spec.matrix_dim
    e = spec.element_size
    a_base = spec.base
    q_base = a_base + d * d * e
    r_base = q_base + d * d * e

    rows = np.arange(d, dtype=np.uint64)
    chunks = []
    for k in range(d):
        column = (rows * d + k) * e
        walk = np.empty(2 * d, dtype=np.uint64)
        walk[0::2] = a_base + column
        walk[1::2] = q_base + column
        chunks.append(np.array([r_base + (k * d + k) * e], dtype=np.uint64))
        chunks.append(walk)
    addrs = np.concatenate(chunks)

    per_k = np.zeros(1 + 2 * d, dtype=bool)
    per_k[2::2] = True
    is_store = np.tile(per_k, d)
    return _truncate(spec, addrs, is_store)


def _truncate(spec: PatternSpec, addrs: np.ndarray, is_store: np.ndarray):
    if spec.n_accesses is not None and spec.n_accesses < addrs.size:
        return addrs[:spec.n_accesses], is_store[:spec.n_accesses]
    return addrs, is_store


_STREAMS = {
    PatternKind.SEQUENTIAL: _sequential,
    PatternKind.STRIDED: _strided,
    PatternKind.RANDOM: _random,
    PatternKind.POINTER_CHASE: _pointer_chase,
    PatternKind.STENCIL1D: _stencil1d,
    PatternKind.DIAGONAL: _diagonal,
}


# =============================================================================
# Record emission
# =============================================================================


def _compute_count(spec: PatternSpec, n_mem: int) -> int:
    mix = spec.compute_mix
    if mix <= 0.0 or n_mem == 0:
        return 0
    return round(n_mem * mix / (1.0 - mix))


def _memory_positions(n_mem: int, n_compute: int) -> np.ndarray:
    """Instruction index of each access; compute ops are spread evenly between them"""
    j = np.arange(n_mem, dtype=np.int64)
    if n_mem == 0:
        return j
    return j + (j * n_compute) // n_mem


def _parents(n: int, spec: PatternSpec) -> np.ndarray:
    """Parent instruction under the dependence shape, -1 for none"""
    if spec.dep_shape == DepShape.INDEPENDENT:
        return np.full(n, -1, dtype=np.int64)
    i = np.arange(n, dtype=np.int64)
    parent = i - 1 if spec.dep_shape == DepShape.CHAIN else (i - 1) // spec.fanout
    if n:
        parent[0] = -1
    return parent


def _value_registers(parent: np.ndarray, is_store: np.ndarray) -> np.ndarray:
    """Register holding each instruction's value; a STORE forwards what it consumed"""
    owner = np.where(is_store, parent, np.arange(parent.size, dtype=np.int64))
    # pointer jumping over runs of STOREs
    while True:
        idx = np.maximum(owner, 0)
        pending = (owner >= 0) & is_store[idx]
        if not pending.any():
            break
        owner = np.where(pending, owner[idx], owner)
    return np.where(owner >= 0, owner + 1, ZERO_REGISTER)


def generate_synthetic(
    spec: PatternSpec,
    name: Optional[str] = None,
    compute_opcodes: tuple[OpcodeClass, ...] = DEFAULT_COMPUTE_OPCODES,
) -> Trace:
    """
    Generate a synthetic trace.

    Registers are SSA-like: instruction i writes r<i+1>. Instruction i reads
    the value of its parent under the dependence shape (chain: i-1,
    fanout(k): (i-1)//k). A STORE writes no register, so its children read
    the value the STORE itself consumed.

    Raises:
        PatternSpecError: if the spec is out of range
    """
    problems = spec.problems()
    if problems:
        raise PatternSpecError("; ".join(problems))
    if not compute_opcodes or any(op.is_memory for op in compute_opcodes):
        raise PatternSpecError("compute_opcodes must be non-memory opcode classes")

    if spec.compute_mix >= 1.0:
        addrs = np.empty(0, dtype=np.uint64)
        store_mask = np.empty(0, dtype=bool)
        n_compute = spec.n_accesses or DEFAULT_ACCESSES
    else:
        addrs, store_mask = _STREAMS[spec.kind](spec)
        n_compute = _compute_count(spec, int(addrs.size))

    n_mem = int(addrs.size)
    n = n_mem + n_compute
    index = np.arange(n, dtype=np.int64)
    mem_pos = _memory_positions(n_mem, n_compute)

    is_mem = np.zeros(n, dtype=bool)
    is_mem[mem_pos] = True
    is_store = np.zeros(n, dtype=bool)
    is_store[mem_pos] = store_mask

    opcode = np.empty(n, dtype=np.uint8)
    cycle = np.array([OPCODE_CODE[op] for op in compute_opcodes], dtype=np.uint8)
    opcode[~is_mem] = cycle[np.arange(n_compute) % cycle.size]
    opcode[mem_pos] = np.where(store_mask, OPCODE_CODE[OpcodeClass.STORE], OPCODE_CODE[OpcodeClass.LOAD])

    parent = _parents(n, spec)
    value_reg = _value_registers(parent, is_store)
    src = np.where(parent >= 0, value_reg[np.maximum(parent, 0)], ZERO_REGISTER)
    del parent, value_reg
    # a STORE always names its data register, r0 included
    has_source = (src != ZERO_REGISTER) | is_store
    src_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(has_source, dtype=np.int64, out=src_offsets[1:])

    mem_addr = np.zeros(n, dtype=np.uint64)
    mem_addr[mem_pos] = addrs
    mem_size = np.zeros(n, dtype=np.uint32)
    mem_size[mem_pos] = spec.element_size

    trace = Trace(
        seq_id=index,
        opcode=opcode,
        bb_id=index // spec.block_len,
        dest=np.where(is_store, NO_REGISTER, index + 1),
        src_offsets=src_offsets,
        src_regs=src[has_source],
        mem_addr=mem_addr,
        has_addr=is_mem,
        mem_size=mem_size,
        metadata=TraceMetadata(
            name=name or spec.kind.value,
            element_size=spec.element_size,
            source=f"synthetic:{spec.kind.value}",
        ),
    )
    logger.info(f"Generated {len(trace)} records ({n_mem} accesses) for {spec.kind.value}")
    return trace
