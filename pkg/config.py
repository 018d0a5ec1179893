"""Runtime configuration for the NMC design-space explorer"""

import os
from dataclasses import dataclass, field
from dotenv import load_dotenv

load_dotenv()

TOOL_VERSION = "0.4.0"
SCHEMA_VERSION = 1


def cpu_threads() -> int:
    return os.cpu_count() or 1


def _default_threads() -> int:
    raw = os.getenv("NMCDSE_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        value = -1
    if value == 0:
        return cpu_threads()
    return value


@dataclass
class Config:
    # Worker pool cap for sweeps and multi-file characterization
    threads: int = field(default_factory=_default_threads)

    # Logging
    log_level: str = os.getenv("NMCDSE_LOG_LEVEL", "WARNING").upper()

    # Default --config path
    config_path: str = os.getenv("NMCDSE_CONFIG", "")

    @property
    def has_config_file(self) -> bool:
        """Check if a default config file is set"""
        return bool(self.config_path)

    def validate(self) -> list[str]:
        """Validate runtime configuration"""
        errors = []
        if self.threads < 1:
            errors.append("NMCDSE_THREADS must be a positive integer")
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"NMCDSE_LOG_LEVEL '{self.log_level}' is not a log level")
        if self.config_path and not os.path.exists(self.config_path):
            errors.append(f"NMCDSE_CONFIG points to a missing file: {self.config_path}")
        return errors


config = Config()
