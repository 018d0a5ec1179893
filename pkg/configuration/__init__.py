"""Key-value parameter files with unit suffixes"""

from .units import Dimension, parse_quantity, parse_list, parse_bool
from .loader import (
    KEYS, UNIT_SYNTAX, RunConfig,
    parse_value, parse_config_text, parse_override, build_run_config, load_run_config,
)

__all__ = [
    "Dimension", "parse_quantity", "parse_list", "parse_bool",
    "KEYS", "UNIT_SYNTAX", "RunConfig",
    "parse_value", "parse_config_text", "parse_override", "build_run_config", "load_run_config",
]
