"""Quantities with unit suffixes: '3GHz', '16GB/s', '32KB', '3.7pJ/b', '0.96W'"""

import re
from enum import Enum


class Dimension(str, Enum):
    COUNT = "count"
    REAL = "real"
    FREQUENCY = "frequency"
    BANDWIDTH = "bandwidth"
    BYTES = "bytes"
    ENERGY_PER_BIT = "energy_per_bit"
    ENERGY_PER_OP = "energy_per_op"
    POWER = "power"
    TIME = "time"
    CYCLES = "cycles"


# Lower-cased suffix -> factor to the internal unit of the dimension
UNITS: dict[Dimension, dict[str, float]] = {
    Dimension.FREQUENCY: {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9},
    Dimension.BANDWIDTH: {"b/s": 1.0, "kb/s": 1e3, "mb/s": 1e6, "gb/s": 1e9, "tb/s": 1e12},
    Dimension.BYTES: {"b": 1, "kb": 1024, "kib": 1024, "mb": 1024 ** 2, "mib": 1024 ** 2, "gb": 1024 ** 3, "gib": 1024 ** 3},
    Dimension.ENERGY_PER_BIT: {"fj/b": 1e-3, "pj/b": 1.0, "nj/b": 1e3, "fj/bit": 1e-3, "pj/bit": 1.0, "nj/bit": 1e3},
    Dimension.ENERGY_PER_OP: {"fj": 1e-3, "pj": 1.0, "nj": 1e3},
    Dimension.POWER: {"mw": 1e-3, "w": 1.0},
    Dimension.TIME: {"ns": 1e-9, "us": 1e-6, "ms": 1e-3, "s": 1.0},
    Dimension.CYCLES: {"cycle": 1.0, "cycles": 1.0},
}

_QUANTITY = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-z/]*)\s*$")


def parse_quantity(text: str, dimension: Dimension):
    """
    Parse a number with an optional unit suffix into the internal unit.

    A bare number is already in the internal unit. COUNT and BYTES return int.

    Raises:
        ValueError: unparsable number or a unit foreign to the dimension
    """
    match = _QUANTITY.match(text)
    if not match:
        raise ValueError(f"cannot parse '{text}' as a {dimension.value}")
    number, suffix = match.group(1), match.group(2).lower()

    if dimension in (Dimension.COUNT, Dimension.REAL):
        if suffix:
            raise ValueError(f"'{text}': {dimension.value} takes no unit")
        value = float(number)
        return _as_int(value, text) if dimension == Dimension.COUNT else value

    factor = 1.0
    if suffix:
        table = UNITS[dimension]
        if suffix not in table:
            raise ValueError(f"'{text}': unit '{match.group(2)}' is not a {dimension.value} unit")
        factor = table[suffix]
    value = float(number) * factor
    if dimension == Dimension.BYTES:
        return _as_int(value, text)
    return value


def _as_int(value: float, text: str) -> int:
    if value != int(value):
        raise ValueError(f"'{text}' is not a whole number")
    return int(value)


def parse_list(text: str, dimension: Dimension) -> tuple:
    items = [t for t in (s.strip() for s in text.split(",")) if t]
    if not items:
        raise ValueError("empty list")
    return tuple(parse_quantity(item, dimension) for item in items)


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"'{text}' is not a boolean")
