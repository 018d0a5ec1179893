"""
Trace text format: parsing and serialization

One record per line:

    I <seq_id> <OPCODE> <bb_id> <dest|-> <src1,src2,...|-> [<hex_addr> <size_bytes>]

Lines starting with '#' are comments. Header comments of the form
'# name: ...', '# element_size: ...' and '# source: ...' carry trace metadata.
Gzip-compressed files are detected by their magic bytes.
"""

import gzip
import io
import logging
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, Optional, TextIO, Union

from errors import TraceInvariantError, TraceOrderingError, TraceParseError
from .models import (
    DEFAULT_ELEMENT_SIZE, MAX_ADDRESS, MEMORY_OPCODES, VALID_MEM_SIZES,
    InstructionRecord, OpcodeClass, Trace, TraceBuilder, TraceMetadata,
)

logger = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"
METADATA_KEYS = ("name", "element_size", "source")

_OPCODES = {op.value: op for op in OpcodeClass}


# =============================================================================
# Field parsing
# =============================================================================


def _parse_int(token: str, what: str, line_no: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise TraceParseError(line_no, f"invalid {what} '{token}'")
    if value < 0:
        raise TraceParseError(line_no, f"negative {what} '{token}'")
    return value


def _parse_register(token: str, line_no: int) -> int:
    """Registers are written r<N>; a bare integer is accepted too"""
    text = token[1:] if token[:1] in ("r", "R") else token
    return _parse_int(text, "register", line_no)


def _parse_sources(token: str, line_no: int) -> tuple[int, ...]:
    if token == "-":
        return ()
    return tuple(_parse_register(t, line_no) for t in token.split(",") if t)


def parse_line(line: str, line_no: int) -> Optional[InstructionRecord]:
    """Parse one line; returns None for blank and comment lines"""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None

    fields = stripped.split()
    if fields[0] != "I":
        raise TraceParseError(line_no, f"expected record tag 'I', got '{fields[0]}'")
    if len(fields) not in (6, 8):
        raise TraceParseError(line_no, f"expected 6 or 8 fields, got {len(fields)}")

    seq_id = _parse_int(fields[1], "seq_id", line_no)
    opcode = _OPCODES.get(fields[2].upper())
    if opcode is None:
        raise TraceParseError(line_no, f"unknown opcode '{fields[2]}'")
    bb_id = _parse_int(fields[3], "bb_id", line_no)
    dest = None if fields[4] == "-" else _parse_register(fields[4], line_no)
    sources = _parse_sources(fields[5], line_no)

    mem_addr = mem_size = None
    if len(fields) == 8:
        if opcode not in MEMORY_OPCODES:
            raise TraceInvariantError(line_no, "address on non-memory opcode")
        addr_token = fields[6]
        if not addr_token.lower().startswith("0x"):
            raise TraceParseError(line_no, f"address must be 0x-prefixed hex, got '{addr_token}'")
        try:
            mem_addr = int(addr_token, 16)
        except ValueError:
            raise TraceParseError(line_no, f"invalid address '{addr_token}'")
        if mem_addr > MAX_ADDRESS:
            raise TraceInvariantError(line_no, "address exceeds 64 bits")
        mem_size = _parse_int(fields[7], "size", line_no)
        if mem_size not in VALID_MEM_SIZES:
            raise TraceInvariantError(line_no, f"access size {mem_size} not in {VALID_MEM_SIZES}")
    elif opcode in MEMORY_OPCODES:
        raise TraceInvariantError(line_no, f"{opcode.value} without address")

    return InstructionRecord(
        seq_id=seq_id,
        opcode=opcode,
        bb_id=bb_id,
        dest=dest,
        sources=sources,
        mem_addr=mem_addr,
        mem_size=mem_size,
    )


def _parse_metadata_comment(line: str, meta: dict) -> None:
    body = line.strip()[1:].strip()
    key, sep, value = body.partition(":")
    key = key.strip()
    if sep and key in METADATA_KEYS and key not in meta:
        meta[key] = value.strip()


# =============================================================================
# Streaming parser
# =============================================================================


def _open_text(stream: BinaryIO) -> TextIO:
    """Wrap a binary stream, transparently decompressing gzip input"""
    buffered = stream if isinstance(stream, io.BufferedReader) else io.BufferedReader(stream)
    if buffered.peek(2)[:2] == GZIP_MAGIC:
        logger.debug("Detected gzip-compressed trace")
        buffered = gzip.GzipFile(fileobj=buffered, mode="rb")
    return io.TextIOWrapper(buffered, encoding="ascii", newline=None)


def iter_records(stream: BinaryIO, meta: Optional[dict] = None) -> Iterator[InstructionRecord]:
    """
    Yield records one at a time.

    Args:
        stream: binary input (plain or gzip)
        meta: optional dict filled with header metadata as it is encountered

    Raises:
        TraceParseError and subclasses, carrying the 1-based line number
    """
    meta = meta if meta is not None else {}
    last_seq: Optional[int] = None
    line_no = 0
    text = _open_text(stream)
    try:
        for line_no, line in enumerate(text, start=1):
            if line.lstrip().startswith("#"):
                _parse_metadata_comment(line, meta)
                continue
            record = parse_line(line, line_no)
            if record is None:
                continue
            if last_seq is not None and record.seq_id <= last_seq:
                raise TraceOrderingError(
                    line_no, f"seq_id {record.seq_id} does not follow {last_seq}"
                )
            last_seq = record.seq_id
            yield record
    except UnicodeDecodeError:
        raise TraceParseError(line_no + 1, "non-ASCII content")
    finally:
        text.detach()


def _metadata_from(meta: dict, default_name: str) -> TraceMetadata:
    element_size = DEFAULT_ELEMENT_SIZE
    if "element_size" in meta:
        try:
            element_size = int(meta["element_size"])
        except ValueError:
            logger.warning(f"Ignoring invalid element_size header '{meta['element_size']}'")
    return TraceMetadata(
        name=meta.get("name") or default_name,
        element_size=element_size,
        source=meta.get("source") or "parsed",
    )


def parse_trace(stream: BinaryIO, name: str = "trace") -> Trace:
    """Parse a whole trace from a binary stream"""
    meta: dict = {}
    builder = TraceBuilder()
    for record in iter_records(stream, meta):
        builder.append(record)
    trace = builder.build(_metadata_from(meta, name))
    logger.info(f"Parsed {len(trace)} records for trace '{trace.name}'")
    return trace


def read_trace_file(path: Union[str, Path]) -> Trace:
    """Parse a trace file; errors name the file"""
    path = Path(path)
    try:
        with path.open("rb") as f:
            return parse_trace(f, name=path.stem)
    except TraceParseError as e:
        raise e.with_source(str(path)) from None


# =============================================================================
# Serialization
# =============================================================================


def format_record(record: InstructionRecord) -> str:
    """Canonical text form of one record (no trailing newline)"""
    dest = "-" if record.dest is None else f"r{record.dest}"
    sources = ",".join(f"r{s}" for s in record.sources) if record.sources else "-"
    line = f"I {record.seq_id} {record.opcode.value} {record.bb_id} {dest} {sources}"
    if record.mem_addr is not None:
        line += f" 0x{record.mem_addr:x} {record.mem_size}"
    return line


def iter_lines(trace: Trace) -> Iterable[str]:
    meta = trace.metadata
    yield f"# name: {meta.name}\n"
    yield f"# element_size: {meta.element_size}\n"
    yield f"# source: {meta.source}\n"
    for record in trace:
        yield format_record(record) + "\n"


def serialize_trace(trace: Trace) -> bytes:
    """Canonical byte form; parse_trace(serialize_trace(t)) == t"""
    return "".join(iter_lines(trace)).encode("ascii")


def write_trace_file(trace: Trace, path: Union[str, Path], compress: bool = False) -> int:
    """Write a trace (optionally gzip); returns the record count"""
    path = Path(path)
    if compress:
        # mtime=0 keeps the gzip header byte-identical across runs
        with open(path, "wb") as raw:
            with gzip.GzipFile(filename="", mode="wb", fileobj=raw, mtime=0) as f:
                for line in iter_lines(trace):
                    f.write(line.encode("ascii"))
    else:
        with open(path, "w", encoding="ascii", newline="\n") as f:
            f.writelines(iter_lines(trace))
    logger.info(f"Wrote {len(trace)} records to {path}")
    return len(trace)
