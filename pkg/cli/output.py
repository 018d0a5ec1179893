"""Data writers (stdout or file) and rich tables for humans"""

import csv
import io
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from rich.console import Console
from rich.table import Table

from advisor.scoring import OffloadRecommendation, Verdict
from analytic.explore import fmt
from analytic.params import ComparisonResult
from characterization.signature import WorkloadSignature

logger = logging.getLogger(__name__)

# Tables go to stderr whenever stdout carries CSV/JSON
console = Console(stderr=True)
stdout_console = Console()

VERDICT_STYLE = {
    Verdict.OFFLOAD: "green",
    Verdict.BORDERLINE: "yellow",
    Verdict.KEEP_ON_HOST: "red",
}


def write_output(text: str, path: Optional[Path] = None) -> None:
    """Write to `path`, or to stdout when no path is given"""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"Wrote {path}")


def _two_column_csv(header: tuple[str, str], rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def entropy_csv(sig: WorkloadSignature) -> str:
    rows = [] if sig.entropy is None else [(r, fmt(h)) for r, h in sig.entropy.points]
    return _two_column_csv(("bit_reduction", "entropy_bits"), rows)


def spatial_csv(sig: WorkloadSignature) -> str:
    rows = [] if sig.spatial is None else [
        (f"{p.from_line}-{p.to_line}", fmt(p.score)) for p in sig.spatial.pairs
    ]
    return _two_column_csv(("line_pair", "spatial_locality"), rows)


# =============================================================================
# Tables
# =============================================================================


def signature_table(sigs: Sequence[WorkloadSignature]) -> Table:
    table = Table(title="Workload signatures")
    table.add_column("Kernel", style="cyan")
    table.add_column("Instr", justify="right")
    table.add_column("Mem", justify="right")
    table.add_column("Entropy", justify="right")
    table.add_column("Spatial", justify="right")
    table.add_column("DLP", justify="right")
    table.add_column("BBLP", justify="right")
    table.add_column("m1", justify="right")
    table.add_column("m2", justify="right")
    for sig in sigs:
        entropy = sig.finest_entropy
        table.add_row(
            sig.name,
            str(sig.n_instr),
            str(sig.n_mem),
            "-" if entropy is None else f"{entropy:.3f}",
            "-" if sig.spatial is None else f"{sig.spatial.total:.3f}",
            f"{sig.dlp_weighted:.2f}",
            f"{sig.bb_parallelism:.2f}",
            "-" if sig.m1 is None else f"{sig.m1:.4f}",
            "-" if sig.m2 is None else f"{sig.m2:.4f}",
        )
    return table


def comparison_table(result: ComparisonResult) -> Table:
    table = Table(title="Host vs host+NMC")
    table.add_column("Component", style="cyan")
    table.add_column("Host", justify="right")
    table.add_column("Host+NMC", justify="right")

    host, nmc = result.host, result.nmc
    for key in sorted(set(host.time_breakdown) | set(nmc.time_breakdown)):
        table.add_row(
            f"time {key} (s)",
            fmt(host.time_breakdown.get(key, 0.0)),
            fmt(nmc.time_breakdown.get(key, 0.0)),
        )
    table.add_row("time total (s)", fmt(host.t_total), fmt(nmc.t_total), style="bold")
    for key in sorted(set(host.energy_breakdown) | set(nmc.energy_breakdown)):
        table.add_row(
            f"energy {key} (J)",
            fmt(host.energy_breakdown.get(key, 0.0)),
            fmt(nmc.energy_breakdown.get(key, 0.0)),
        )
    table.add_row("energy total (J)", fmt(host.e_total), fmt(nmc.e_total), style="bold")
    table.caption = (
        f"normalized delay {fmt(result.normalized_delay)}, "
        f"normalized energy {fmt(result.normalized_energy)} (>1 favors NMC)"
    )
    return table


def recommendation_table(recs: Sequence[OffloadRecommendation], errors: Sequence[dict] = ()) -> Table:
    table = Table(title="Offload recommendations")
    table.add_column("#", justify="right")
    table.add_column("Kernel", style="cyan")
    table.add_column("Verdict")
    table.add_column("Speedup", justify="right")
    table.add_column("Energy ratio", justify="right")
    table.add_column("Signals")
    for rank, rec in enumerate(recs, start=1):
        signals = ", ".join(name for name, on in rec.metric_flags.items() if on) or "-"
        style = VERDICT_STYLE[rec.verdict]
        table.add_row(
            str(rank),
            rec.kernel,
            f"[{style}]{rec.verdict.value}[/{style}]",
            fmt(rec.predicted_speedup),
            fmt(rec.predicted_energy_ratio),
            signals,
        )
    for entry in errors:
        table.add_row("-", entry["kernel"], "[red]error[/red]", "-", "-", entry["error"])
    return table
