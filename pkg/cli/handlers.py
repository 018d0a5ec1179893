"""Subcommand handlers"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from advisor.scoring import rank_kernels, score_kernel
from analytic.explore import SWEEP_HEADER, compare, parse_grid, row_values, rows_to_csv, sweep
from characterization.signature import WorkloadSignature, load_signature, signature
from configuration.loader import RunConfig
from errors import ModelError, UsageError
from tracecore.generator import generate_synthetic
from tracecore.models import DepShape, PatternKind, PatternSpec
from tracecore.parser import read_trace_file, serialize_trace, write_trace_file
from .output import (
    comparison_table, console, entropy_csv, recommendation_table, stdout_console,
    signature_table, spatial_csv, write_output,
)

logger = logging.getLogger(__name__)

SIGNATURE_SUFFIX = ".sig.json"


@dataclass
class RunContext:
    """What a handler needs, plus what it produced (for the manifest)"""
    args: object
    run: RunConfig
    threads: int = 1
    quiet: bool = False
    inputs: list[str] = field(default_factory=list)
    outputs: list[Path] = field(default_factory=list)
    seed: Optional[int] = None

    def show(self, renderable) -> None:
        if self.quiet:
            return
        (stdout_console if self.outputs else console).print(renderable)

    def emit(self, text: str, path: Optional[Path]) -> None:
        write_output(text, path)
        if path is not None:
            self.outputs.append(path)


# =============================================================================
# gen-trace
# =============================================================================


def pattern_spec_from_args(args) -> PatternSpec:
    spec = PatternSpec(
        kind=PatternKind(args.pattern),
        n_accesses=args.n,
        element_size=args.element_size,
        base=args.base,
        stride_bytes=args.stride,
        footprint_bytes=args.footprint,
        range_bytes=args.range,
        nodes=args.nodes,
        node_bytes=args.node_bytes,
        array_bytes=args.array,
        sweeps=args.sweeps,
        matrix_dim=args.matrix_dim,
        seed=args.seed,
        compute_mix=args.compute_mix,
        dep_shape=DepShape(args.dep_shape),
        fanout=args.fanout,
        block_len=args.block_len,
        store_every=args.store_every,
    )
    problems = spec.problems()
    if problems:
        raise UsageError("; ".join(problems))
    return spec


def cmd_gen_trace(ctx: RunContext) -> int:
    args = ctx.args
    if args.gzip and args.out is None:
        raise UsageError("--gzip needs --out")
    spec = pattern_spec_from_args(args)
    ctx.seed = spec.seed

    trace = generate_synthetic(spec, name=args.name)
    if args.out is None:
        write_output(serialize_trace(trace).decode("ascii"))
        ctx.show(f"{len(trace)} records")
        return 0

    count = write_trace_file(trace, args.out, compress=args.gzip)
    ctx.outputs.append(args.out)
    print(f"{count} records -> {args.out}")
    return 0


# =============================================================================
# characterize
# =============================================================================


def characterization_config_from_args(ctx: RunContext):
    args = ctx.args
    changes = {}
    if args.capacity is not None:
        changes["capacity"] = args.capacity
    if args.l2_capacity is not None:
        changes["l2_capacity"] = args.l2_capacity
    if args.pairs is not None:
        changes["line_pairs"] = args.pairs
        changes["weights"] = None
    if args.weights is not None:
        changes["weights"] = args.weights
    if args.reductions is not None:
        changes["reductions"] = args.reductions
    if args.reuse:
        changes["reuse_profile"] = True
    cfg = replace(ctx.run.characterization, **changes)
    problems = cfg.problems()
    if problems:
        raise UsageError("; ".join(problems))
    return cfg


def _output_paths(ctx: RunContext) -> list[Optional[Path]]:
    """Where each signature goes; None means stdout"""
    args = ctx.args
    if args.out is not None and args.out_dir is not None:
        raise UsageError("--out and --out-dir are mutually exclusive")
    if args.out is not None and len(args.traces) > 1:
        raise UsageError("--out takes a single trace; use --out-dir for several")
    if args.csv and args.out is None and args.out_dir is None:
        raise UsageError("--csv needs --out or --out-dir")
    if args.out is not None:
        return [args.out]
    if args.out_dir is not None:
        return [args.out_dir / (Path(t).name.split(".")[0] + SIGNATURE_SUFFIX) for t in args.traces]
    return [None] * len(args.traces)


def _curve_path(sig_path: Path, kind: str) -> Path:
    stem = sig_path.name[: -len(SIGNATURE_SUFFIX)] if sig_path.name.endswith(SIGNATURE_SUFFIX) else sig_path.stem
    return sig_path.with_name(f"{stem}.{kind}.csv")


def cmd_characterize(ctx: RunContext) -> int:
    args = ctx.args
    cfg = characterization_config_from_args(ctx)
    paths = _output_paths(ctx)
    ctx.inputs = [str(t) for t in args.traces]

    def characterize(path: Path) -> WorkloadSignature:
        return signature(read_trace_file(path), cfg)

    workers = max(1, min(ctx.threads, len(args.traces)))
    logger.info(f"Characterizing {len(args.traces)} trace(s) with {workers} worker(s)")
    if workers == 1:
        sigs = [characterize(t) for t in args.traces]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sigs = list(pool.map(characterize, args.traces))

    if all(p is None for p in paths):
        if len(sigs) == 1:
            write_output(sigs[0].to_json())
        else:
            write_output(json.dumps([s.to_dict() for s in sigs], indent=2) + "\n")
    else:
        for sig, path in zip(sigs, paths):
            ctx.emit(sig.to_json(), path)
            if args.csv:
                ctx.emit(entropy_csv(sig), _curve_path(path, "entropy"))
                ctx.emit(spatial_csv(sig), _curve_path(path, "spatial"))

    ctx.show(signature_table(sigs))
    return 0


# =============================================================================
# model / sweep
# =============================================================================


def cmd_model(ctx: RunContext) -> int:
    args = ctx.args
    changes = {
        name: value for name, value in (
            ("m1", args.m1),
            ("m2", args.m2),
            ("offload_fraction", args.offload),
            ("parallel_fraction", args.parallel_fraction),
        ) if value is not None
    }
    profile = replace(ctx.run.profile, **changes)
    s = ctx.run.system
    result = compare(profile, s, ctx.run.energy)

    header = ",".join(SWEEP_HEADER) + "\n"
    row = ",".join(row_values(profile.m1, profile.m2, s.n_vaults, s.n_links, result)) + "\n"
    ctx.emit(header + row, args.out)
    ctx.show(comparison_table(result))
    return 0


def cmd_sweep(ctx: RunContext) -> int:
    args = ctx.args
    grid = parse_grid(args.grid)
    rows = sweep(grid, ctx.run.system, ctx.run.energy, ctx.run.profile, workers=ctx.threads)
    ctx.emit(rows_to_csv(rows, with_offload=bool(grid.offload_fraction)), args.out)
    ctx.show(f"{len(rows)} grid points")
    return 0


# =============================================================================
# advise
# =============================================================================


def cmd_advise(ctx: RunContext) -> int:
    """Always exits 0; unreadable signatures become error entries"""
    args = ctx.args
    ctx.inputs = [str(p) for p in args.signatures]

    recs = []
    errors: list[dict] = []
    for path in args.signatures:
        try:
            sig = load_signature(path)
            recs.append(score_kernel(
                sig, ctx.run.system, ctx.run.energy, ctx.run.thresholds,
                offload_fraction=args.offload,
                parallel_fraction=args.parallel_fraction,
            ))
        except (OSError, ValueError, KeyError, TypeError, ModelError) as e:
            reason = f"missing field {e}" if isinstance(e, KeyError) else str(e)
            logger.warning(f"Skipping {path}: {reason}")
            errors.append({"kernel": Path(path).name, "source": str(path), "error": reason})

    ranked = rank_kernels(recs)
    payload = [r.to_dict() for r in ranked] + errors
    ctx.emit(json.dumps(payload, indent=2) + "\n", args.out)
    ctx.show(recommendation_table(ranked, errors))
    return 0
