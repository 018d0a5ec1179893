"""Trace data model, text format, synthetic generators and validation"""

from .models import (
    OpcodeClass, InstructionRecord, Trace, TraceBuilder, TraceMetadata,
    PatternSpec, PatternKind, DepShape, MEMORY_OPCODES, VALID_MEM_SIZES,
)
from .parser import parse_trace, iter_records, read_trace_file, serialize_trace, write_trace_file
from .generator import generate_synthetic
from .validation import validate, ValidationReport, Violation

__all__ = [
    "OpcodeClass", "InstructionRecord", "Trace", "TraceBuilder", "TraceMetadata",
    "PatternSpec", "PatternKind", "DepShape", "MEMORY_OPCODES", "VALID_MEM_SIZES",
    "parse_trace", "iter_records", "read_trace_file", "serialize_trace", "write_trace_file",
    "generate_synthetic",
    "validate", "ValidationReport", "Violation",
]
