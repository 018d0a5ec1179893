"""
Dependence DAG, data-level parallelism and basic-block-level parallelism

Producers of an instruction are the latest prior writer of each source
register and, for a LOAD, the latest prior STORE to the same line. The DAG is
never materialized: depths are computed in a single pass because every
producer precedes its consumer.
"""

import logging
from array import array
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tracecore.models import ITER_CHUNK, NO_REGISTER, OPCODE_CODE, OPCODE_ORDER, OpcodeClass, Trace

logger = logging.getLogger(__name__)

DEFAULT_DEP_LINE_SIZE = 64
MAX_TRACKED_STORE_LINES = 1 << 20
# register numbers below max(4 * records, this) index a flat table directly
DENSE_REGISTER_FLOOR = 1 << 16

_LOAD = OPCODE_CODE[OpcodeClass.LOAD]
_STORE = OPCODE_CODE[OpcodeClass.STORE]


@dataclass(frozen=True)
class DependenceDag:
    """Per-instruction depths plus the matching block-level DAG summary"""
    depths: np.ndarray       # int64, longest producer chain ending at each instruction
    opcodes: np.ndarray      # uint8 index into OPCODE_ORDER
    block_depths: np.ndarray  # int64, per dynamic basic block
    critical_path_len: int

    @property
    def n_instructions(self) -> int:
        return int(self.depths.size)

    @property
    def n_blocks(self) -> int:
        return int(self.block_depths.size)

    @property
    def block_critical_path_len(self) -> int:
        return int(self.block_depths.max()) + 1 if self.block_depths.size else 0

    def level_occupancy(self, opcode: OpcodeClass) -> dict[int, int]:
        """depth level -> number of instructions of this class at that level"""
        mask = self.opcodes == OPCODE_CODE[opcode]
        levels, counts = np.unique(self.depths[mask], return_counts=True)
        return {int(l): int(c) for l, c in zip(levels, counts)}


def _register_ids(trace: Trace) -> tuple[np.ndarray, np.ndarray, int]:
    """Dest and source registers as table indices; sparse numbering is compacted"""
    dest, src = trace.dest, trace.src_regs
    top = int(max(dest.max(initial=NO_REGISTER), src.max(initial=NO_REGISTER)))
    if top < max(4 * len(trace), DENSE_REGISTER_FLOOR):
        return dest, src, top + 1

    has_dest = dest != NO_REGISTER
    n_dest = int(np.count_nonzero(has_dest))
    names, inverse = np.unique(np.concatenate([dest[has_dest], src]), return_inverse=True)
    inverse = inverse.astype(np.int64)
    dest_ids = np.full(dest.size, NO_REGISTER, dtype=np.int64)
    dest_ids[has_dest] = inverse[:n_dest]
    logger.debug(f"Compacted {names.size} sparse register numbers (max r{top})")
    return dest_ids, inverse[n_dest:], int(names.size)


def _frozen(buffer: array, dtype) -> np.ndarray:
    return np.frombuffer(buffer, dtype=dtype) if len(buffer) else np.zeros(0, dtype=dtype)


def build_dependence_dag(trace: Trace, line_size: int = DEFAULT_DEP_LINE_SIZE) -> DependenceDag:
    """
    Compute instruction and block depths in one pass over the trace columns.

    Memory use is one register table, the tracked store lines (bounded at
    MAX_TRACKED_STORE_LINES, oldest evicted first) and the output depth
    arrays. No per-record objects are created.
    """
    n = len(trace)
    shift = np.uint64(line_size.bit_length() - 1)
    dest_ids, src_ids, n_registers = _register_ids(trace)
    last_writer = array("q", [-1]) * n_registers
    last_store: OrderedDict[int, int] = OrderedDict()

    depths = array("q", [0]) * n
    block_of = array("q", [0]) * n
    block_depths = array("q")

    current_bb: Optional[int] = None
    block_index = -1
    block_depth = 0

    for start in range(0, n, ITER_CHUNK):
        stop = min(start + ITER_CHUNK, n)
        ops = trace.opcode[start:stop].tolist()
        bbs = trace.bb_id[start:stop].tolist()
        dests = dest_ids[start:stop].tolist()
        lines = (trace.mem_addr[start:stop] >> shift).tolist()
        offsets = trace.src_offsets[start:stop + 1].tolist()
        base = offsets[0]
        srcs = src_ids[base:offsets[-1]].tolist()

        for k in range(stop - start):
            i = start + k
            if bbs[k] != current_bb:
                if block_index >= 0:
                    block_depths.append(block_depth)
                current_bb = bbs[k]
                block_index += 1
                block_depth = 0

            producers = [last_writer[s] for s in srcs[offsets[k] - base:offsets[k + 1] - base]]
            op = ops[k]
            if op == _LOAD:
                store = last_store.get(lines[k])
                if store is not None:
                    producers.append(store)

            depth = 0
            for p in producers:
                if p < 0:
                    continue
                if depths[p] + 1 > depth:
                    depth = depths[p] + 1
                producer_block = block_of[p]
                if producer_block != block_index and block_depths[producer_block] + 1 > block_depth:
                    block_depth = block_depths[producer_block] + 1

            depths[i] = depth
            block_of[i] = block_index

            if dests[k] != NO_REGISTER:
                last_writer[dests[k]] = i
            if op == _STORE:
                line = lines[k]
                last_store[line] = i
                last_store.move_to_end(line)
                if len(last_store) > MAX_TRACKED_STORE_LINES:
                    last_store.popitem(last=False)

    if block_index >= 0:
        block_depths.append(block_depth)
    del block_of

    depth_arr = _frozen(depths, np.int64)
    dag = DependenceDag(
        depths=depth_arr,
        opcodes=trace.opcode,
        block_depths=_frozen(block_depths, np.int64),
        critical_path_len=int(depth_arr.max()) + 1 if depth_arr.size else 0,
    )
    logger.info(
        f"Dependence DAG for '{trace.name}': critical path {dag.critical_path_len}, "
        f"{dag.n_blocks} blocks"
    )
    return dag


# =============================================================================
# Parallelism metrics
# =============================================================================


def dlp_per_opcode(dag: DependenceDag, trace: Optional[Trace] = None) -> dict[OpcodeClass, float]:
    """
    DLP_c = N_c / L_c, where L_c is the number of distinct DAG depth levels
    holding at least one instruction of class c. Absent classes are omitted.
    """
    result: dict[OpcodeClass, float] = {}
    for opcode in OPCODE_ORDER:
        mask = dag.opcodes == OPCODE_CODE[opcode]
        n_c = int(mask.sum())
        if n_c == 0:
            continue
        levels = int(np.unique(dag.depths[mask]).size)
        result[opcode] = n_c / levels
    return result


def opcode_counts(trace: Trace) -> dict[OpcodeClass, int]:
    counts = trace.opcode_counts()
    return {op: int(counts[i]) for i, op in enumerate(OPCODE_ORDER) if counts[i]}


def dlp_weighted(per_opcode: dict[OpcodeClass, float], trace: Trace) -> float:
    """sum_c (N_c / N) * DLP_c over the classes present"""
    if len(trace) == 0:
        raise ValueError("empty trace")
    counts = opcode_counts(trace)
    total = len(trace)
    return sum(counts[op] / total * dlp for op, dlp in per_opcode.items() if op in counts)


def bb_parallelism(trace: Trace, dag: Optional[DependenceDag] = None) -> float:
    """Dynamic blocks divided by the critical path of the block-level DAG"""
    if dag is None:
        dag = build_dependence_dag(trace)
    if dag.n_blocks == 0:
        raise ValueError("trace has no basic blocks")
    return dag.n_blocks / dag.block_critical_path_len


def instruction_level_parallelism(dag: DependenceDag) -> float:
    if dag.critical_path_len == 0:
        return 0.0
    return dag.n_instructions / dag.critical_path_len
