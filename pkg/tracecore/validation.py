"""Trace validation: invariant violations are reported as data, not raised"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .models import MAX_ADDRESS, MEMORY_OPCODES, VALID_MEM_SIZES, Trace

logger = logging.getLogger(__name__)


class ViolationKind(str, Enum):
    ORDERING = "ordering"
    SIZE_DOMAIN = "size_domain"
    ADDRESS_PRESENCE = "address_presence"
    SIZE_PRESENCE = "size_presence"
    ADDRESS_RANGE = "address_range"
    NEGATIVE_FIELD = "negative_field"


@dataclass(frozen=True)
class Violation:
    seq_id: int
    kind: ViolationKind
    message: str


@dataclass
class ValidationReport:
    """Every invariant violation found in a trace"""
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def of_kind(self, kind: ViolationKind) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]


def validate(trace: Trace) -> ValidationReport:
    """Check every InstructionRecord invariant plus seq_id ordering"""
    report = ValidationReport()
    add = report.violations.append
    last_seq: Optional[int] = None

    for record in trace:
        seq = record.seq_id
        if last_seq is not None and seq <= last_seq:
            add(Violation(seq, ViolationKind.ORDERING, f"seq_id {seq} does not follow {last_seq}"))
        last_seq = seq if last_seq is None else max(seq, last_seq)

        if seq < 0 or record.bb_id < 0:
            add(Violation(seq, ViolationKind.NEGATIVE_FIELD, "seq_id and bb_id must be non-negative"))

        is_mem_op = record.opcode in MEMORY_OPCODES
        has_addr = record.mem_addr is not None
        if is_mem_op != has_addr:
            reason = "address on non-memory opcode" if has_addr else f"{record.opcode.value} without address"
            add(Violation(seq, ViolationKind.ADDRESS_PRESENCE, reason))
        if has_addr != (record.mem_size is not None):
            add(Violation(seq, ViolationKind.SIZE_PRESENCE, "mem_size present iff mem_addr present"))
        if record.mem_size is not None and record.mem_size not in VALID_MEM_SIZES:
            add(Violation(seq, ViolationKind.SIZE_DOMAIN, f"mem_size {record.mem_size} not in {VALID_MEM_SIZES}"))
        if has_addr and not 0 <= record.mem_addr <= MAX_ADDRESS:
            add(Violation(seq, ViolationKind.ADDRESS_RANGE, "address outside 64-bit unsigned range"))

    if report.violations:
        logger.info(f"Trace '{trace.name}' has {len(report)} invariant violations")
    return report
