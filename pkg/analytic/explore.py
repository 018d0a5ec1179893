"""Host vs host+NMC comparison and design-space sweeps"""

import csv
import io
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from errors import ModelError
from .delay import host_delay, nmc_delay
from .energy import energy
from .params import ComparisonResult, EnergyParams, SystemConfig, WorkloadProfile

logger = logging.getLogger(__name__)

SWEEP_HEADER = [
    "m1", "m2", "n_vaults", "n_links",
    "t_host", "t_nmc", "e_host", "e_nmc", "norm_delay", "norm_energy",
]

# Axis name -> parameter object it varies
PROFILE_AXES = ("m1", "m2", "offload_fraction")
SYSTEM_AXES = ("n_vaults", "n_links")
AXIS_BOUNDS = {
    "m1": (0.0, 1.0),
    "m2": (0.0, 1.0),
    "offload_fraction": (0.0, 1.0),
    "n_vaults": (1, None),
    "n_links": (1, None),
}


def compare(p: WorkloadProfile, s: SystemConfig, ep: EnergyParams) -> ComparisonResult:
    """Evaluate both systems; ratios are host / (host+NMC)"""
    host, nmc = energy(p, s, ep, host_delay(p, s), nmc_delay(p, s))
    return ComparisonResult(host=host, nmc=nmc)


# =============================================================================
# Sweeps
# =============================================================================


@dataclass(frozen=True)
class SweepSpec:
    m1: tuple[float, ...]
    m2: tuple[float, ...]
    n_vaults: tuple[int, ...] = ()
    n_links: tuple[int, ...] = ()
    offload_fraction: tuple[float, ...] = ()

    def problems(self) -> list[str]:
        errors = []
        if not self.m1 or not self.m2:
            errors.append("grid needs at least one m1 and one m2 value")
        for axis, (low, high) in AXIS_BOUNDS.items():
            for value in getattr(self, axis):
                if value < low or (high is not None and value > high):
                    bound = f"[{low}, {high}]" if high is not None else f">= {low}"
                    errors.append(f"{axis}={value} outside {bound}")
        return errors


@dataclass(frozen=True)
class SweepRow:
    m1: float
    m2: float
    n_vaults: int
    n_links: int
    offload_fraction: float
    result: ComparisonResult


def _points(grid: SweepSpec, s: SystemConfig, p: WorkloadProfile):
    """Lexicographic order over (m1, m2, n_vaults, n_links, offload_fraction)"""
    return itertools.product(
        grid.m1,
        grid.m2,
        grid.n_vaults or (s.n_vaults,),
        grid.n_links or (s.n_links,),
        grid.offload_fraction or (p.offload_fraction,),
    )


def sweep(
    grid: SweepSpec,
    s: SystemConfig,
    ep: EnergyParams,
    profile: Optional[WorkloadProfile] = None,
    workers: int = 1,
) -> list[SweepRow]:
    """
    Evaluate compare() at every grid point.

    Rows come back in grid order regardless of the number of workers.
    """
    problems = grid.problems()
    if problems:
        raise ModelError("; ".join(problems))
    profile = profile or WorkloadProfile()

    def evaluate(point) -> SweepRow:
        m1, m2, n_vaults, n_links, offload = point
        p = replace(profile, m1=m1, m2=m2, offload_fraction=offload)
        sys_point = replace(s, n_vaults=int(n_vaults), n_links=int(n_links))
        return SweepRow(m1, m2, int(n_vaults), int(n_links), offload, compare(p, sys_point, ep))

    points = list(_points(grid, s, profile))
    logger.info(f"Sweeping {len(points)} points with {workers} worker(s)")
    if workers <= 1:
        return [evaluate(pt) for pt in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, points))


# =============================================================================
# Grid text and CSV
# =============================================================================


def _range_values(axis: str, text: str) -> list[float]:
    """'start:stop:step' (inclusive) or a single value"""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ModelError(f"axis '{axis}': expected start:stop:step, got '{text}'")
    start, stop, step = (float(x) for x in parts)
    if step <= 0 or stop < start:
        raise ModelError(f"axis '{axis}': empty range '{text}'")
    # inclusive of stop, never past it
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(count)]


def parse_grid(text: str) -> SweepSpec:
    """
    Parse 'm1=0:1:0.1,m2=0:1:0.1,n_vaults=8,16,32'.

    A comma-separated token without '=' extends the previous axis.
    """
    axes: dict[str, list[float]] = {}
    current: Optional[str] = None
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if "=" in token:
            current, _, value = token.partition("=")
            current = current.strip()
            if current not in AXIS_BOUNDS:
                raise ModelError(f"unknown grid axis '{current}'")
            axes.setdefault(current, [])
        elif current is None:
            raise ModelError(f"grid value '{token}' has no axis")
        else:
            value = token
        try:
            axes[current].extend(_range_values(current, value))
        except ValueError:
            raise ModelError(f"axis '{current}': invalid value '{value}'")

    spec = SweepSpec(
        m1=tuple(axes.get("m1", ())),
        m2=tuple(axes.get("m2", ())),
        n_vaults=tuple(int(v) for v in axes.get("n_vaults", ())),
        n_links=tuple(int(v) for v in axes.get("n_links", ())),
        offload_fraction=tuple(axes.get("offload_fraction", ())),
    )
    problems = spec.problems()
    if problems:
        raise ModelError("; ".join(problems))
    return spec


def fmt(value: float) -> str:
    """6 significant digits"""
    return f"{value:.6g}"


def row_values(m1: float, m2: float, n_vaults: int, n_links: int, result: ComparisonResult) -> list[str]:
    return [
        fmt(m1), fmt(m2), str(n_vaults), str(n_links),
        fmt(result.host.t_total), fmt(result.nmc.t_total),
        fmt(result.host.e_total), fmt(result.nmc.e_total),
        fmt(result.normalized_delay), fmt(result.normalized_energy),
    ]


def rows_to_csv(rows: Sequence[SweepRow], with_offload: bool = False) -> str:
    """Sweep CSV; an offload_fraction column is appended when that axis is swept"""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER + (["offload_fraction"] if with_offload else []))
    for row in rows:
        values = row_values(row.m1, row.m2, row.n_vaults, row.n_links, row.result)
        if with_offload:
            values.append(fmt(row.offload_fraction))
        writer.writerow(values)
    return out.getvalue()
