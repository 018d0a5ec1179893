"""Exception hierarchy shared by all packages"""

from typing import Optional


class NmcDseError(Exception):
    """Base class for every error raised by the explorer"""


# =============================================================================
# Traces
# =============================================================================


class TraceError(NmcDseError):
    """Problem with a trace file or trace value"""


class TraceParseError(TraceError):
    """Malformed trace line"""

    def __init__(self, line_no: int, reason: str, source: Optional[str] = None):
        self.line_no = line_no
        self.reason = reason
        self.source = source
        where = f"{source}:{line_no}" if source else f"line {line_no}"
        super().__init__(f"{where}: {reason}")

    def with_source(self, source: str) -> "TraceParseError":
        """Return a copy of this error that names the file it came from"""
        return type(self)(self.line_no, self.reason, source)


class TraceInvariantError(TraceParseError):
    """Record violates an InstructionRecord invariant"""


class TraceOrderingError(TraceParseError):
    """seq_id is not strictly increasing"""


class PatternSpecError(TraceError):
    """Synthetic pattern parameters are out of range"""


# =============================================================================
# Characterization / model / config
# =============================================================================


class EmptyAddressStreamError(NmcDseError):
    """Metric needs memory accesses but the trace has none"""

    def __init__(self, message: str = "empty address stream"):
        super().__init__(message)


class ModelError(NmcDseError):
    """Analytic model received parameters it cannot evaluate"""


class ConfigError(NmcDseError):
    """Invalid key-value configuration"""

    def __init__(self, key: Optional[str], reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"config key '{key}': {reason}" if key else f"config: {reason}")


# =============================================================================
# Command line
# =============================================================================


class UsageError(NmcDseError):
    """Invalid flag value or flag combination"""
