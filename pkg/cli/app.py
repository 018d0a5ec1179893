"""
Command-line entry point

Global options go before the subcommand:

    python main.py [--config FILE] [--set key=value ...] [-v] <subcommand> ...

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from config import TOOL_VERSION, config, cpu_threads
from configuration.loader import UNIT_SYNTAX, load_run_config
from configuration.units import Dimension, parse_list, parse_quantity
from errors import ConfigError, NmcDseError, UsageError
from tracecore.generator import DEFAULT_ACCESSES
from tracecore.models import DEFAULT_ELEMENT_SIZE, DepShape, PatternKind, PatternSpec, VALID_MEM_SIZES
from .handlers import RunContext, cmd_advise, cmd_characterize, cmd_gen_trace, cmd_model, cmd_sweep
from .manifest import RunManifest, write_manifest
from .output import console

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

DEFAULT_GRID = "m1=0:1:0.1,m2=0:1:0.1"


class CliParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; usage errors here exit with 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# =============================================================================
# Flag value types
# =============================================================================


def _typed(parse, what: str):
    def convert(text: str):
        try:
            return parse(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"invalid {what} '{text}': {e}")
    convert.__name__ = what
    return convert


bytes_arg = _typed(lambda t: parse_quantity(t, Dimension.BYTES), "size")
bytes_list_arg = _typed(lambda t: parse_list(t, Dimension.BYTES), "size list")
count_list_arg = _typed(lambda t: parse_list(t, Dimension.COUNT), "integer list")
real_list_arg = _typed(lambda t: parse_list(t, Dimension.REAL), "number list")


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise ValueError("must be in [0, 1]")
    return value


fraction_arg = _typed(_fraction, "fraction")


# =============================================================================
# Parser
# =============================================================================


def _subparser(sub, name: str, help_text: str) -> argparse.ArgumentParser:
    return sub.add_parser(
        name,
        help=help_text,
        epilog=UNIT_SYNTAX,
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )


def _add_gen_trace(sub) -> None:
    p = _subparser(sub, "gen-trace", "write a synthetic trace")
    defaults = PatternSpec(kind=PatternKind.SEQUENTIAL)
    p.add_argument("--pattern", required=True, choices=[k.value for k in PatternKind])
    p.add_argument("--n", type=int, default=None,
                   help=f"memory accesses (truncates structured patterns; {DEFAULT_ACCESSES} otherwise)")
    p.add_argument("--element-size", type=int, default=DEFAULT_ELEMENT_SIZE, choices=VALID_MEM_SIZES)
    p.add_argument("--base", type=bytes_arg, default=defaults.base, help="base address in bytes")
    p.add_argument("--stride", type=bytes_arg, default=defaults.stride_bytes, help="strided: bytes between accesses")
    p.add_argument("--footprint", type=bytes_arg, default=None,
                   help="sequential/strided: wrap addresses within this many bytes")
    p.add_argument("--range", type=bytes_arg, default=defaults.range_bytes, help="random: address range (e.g. 1MB)")
    p.add_argument("--nodes", type=int, default=defaults.nodes, help="pointer_chase: list nodes")
    p.add_argument("--node-bytes", type=bytes_arg, default=defaults.node_bytes, help="pointer_chase: node size")
    p.add_argument("--array", type=bytes_arg, default=defaults.array_bytes, help="stencil1d: bytes per array")
    p.add_argument("--sweeps", type=int, default=defaults.sweeps, help="stencil1d: sweeps over the array")
    p.add_argument("--matrix-dim", type=int, default=defaults.matrix_dim, help="diagonal: matrix dimension")
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--compute-mix", type=float, default=defaults.compute_mix,
                   help="fraction of compute instructions; 1 gives a compute-only trace")
    p.add_argument("--dep-shape", default=defaults.dep_shape.value, choices=[d.value for d in DepShape])
    p.add_argument("--fanout", type=int, default=defaults.fanout)
    p.add_argument("--block-len", type=int, default=defaults.block_len, help="instructions per basic block")
    p.add_argument("--store-every", type=int, default=defaults.store_every,
                   help="every k-th access is a STORE (0 = never)")
    p.add_argument("--name", default=None, help="trace name (default: pattern)")
    p.add_argument("--gzip", action="store_true", help="gzip the output file")
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    p.set_defaults(handler=cmd_gen_trace)


def _add_characterize(sub) -> None:
    p = _subparser(sub, "characterize", "compute workload signatures of trace files")
    p.add_argument("traces", nargs="+", type=Path, help="trace files (plain or gzip)")
    p.add_argument("--capacity", type=bytes_arg, default=None,
                   help="LRU capacity for spatial locality and L1 (e.g. 32KB; default: config)")
    p.add_argument("--l2-capacity", type=bytes_arg, default=None, help="L2 capacity (default: config)")
    p.add_argument("--pairs", type=bytes_list_arg, default=None,
                   help="line sizes, consecutive doublings (e.g. 8,16,32,64,128; default: config)")
    p.add_argument("--weights", type=real_list_arg, default=None, help="one weight per line pair (default: uniform)")
    p.add_argument("--reductions", type=count_list_arg, default=None,
                   help="entropy bit reductions, ascending (default: config)")
    p.add_argument("--reuse", action="store_true", help="add the reuse-distance profile")
    p.add_argument("--csv", action="store_true", help="also write entropy and spatial-locality curve CSVs")
    p.add_argument("--out", type=Path, default=None, help="signature file for a single trace (default: stdout)")
    p.add_argument("--out-dir", type=Path, default=None, help="directory for one <trace>.sig.json per trace")
    p.set_defaults(handler=cmd_characterize)


def _add_model(sub) -> None:
    p = _subparser(sub, "model", "compare host and host+NMC for one workload profile")
    p.add_argument("--m1", type=fraction_arg, default=None, help="L1 miss ratio (default: config)")
    p.add_argument("--m2", type=fraction_arg, default=None, help="L2 local miss ratio (default: config)")
    p.add_argument("--offload", type=fraction_arg, default=None, help="offload fraction (default: config)")
    p.add_argument("--parallel-fraction", type=fraction_arg, default=None,
                   help="Amdahl parallel fraction (default: config)")
    p.add_argument("--out", type=Path, default=None, help="CSV file (default: stdout)")
    p.set_defaults(handler=cmd_model)


def _add_sweep(sub) -> None:
    p = _subparser(sub, "sweep", "evaluate the model over a parameter grid")
    p.add_argument("--grid", default=DEFAULT_GRID,
                   help="axes m1, m2, n_vaults, n_links, offload_fraction as start:stop:step or lists")
    p.add_argument("--out", type=Path, default=None, help="CSV file (default: stdout)")
    p.set_defaults(handler=cmd_sweep)


def _add_advise(sub) -> None:
    p = _subparser(sub, "advise", "rank kernels by predicted benefit of offloading")
    p.add_argument("signatures", nargs="*", type=Path, help="signature JSON files")
    p.add_argument("--offload", type=fraction_arg, default=1.0, help="share of each kernel offloaded")
    p.add_argument("--parallel-fraction", type=fraction_arg, default=1.0, help="Amdahl parallel fraction")
    p.add_argument("--out", type=Path, default=None, help="JSON file (default: stdout)")
    p.set_defaults(handler=cmd_advise)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="nmcdse",
        description="Near-memory computing workload characterization and design-space exploration",
        epilog=UNIT_SYNTAX + " Exit codes: 0 ok, 1 usage error, 2 data error.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--config", type=Path, default=None,
                        help="key-value parameter file (default: NMCDSE_CONFIG)")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key; repeatable")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads, 0 = CPU count (default: NMCDSE_THREADS)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    parser.add_argument("-q", "--quiet", action="store_true", help="no tables on stderr")
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")

    sub = parser.add_subparsers(dest="command", metavar="<command>")
    sub.required = True
    _add_gen_trace(sub)
    _add_characterize(sub)
    _add_model(sub)
    _add_sweep(sub)
    _add_advise(sub)
    return parser


# =============================================================================
# Dispatch
# =============================================================================


def _apply_verbosity(verbose: int) -> None:
    if verbose >= 2:
        logging.getLogger().setLevel(logging.DEBUG)
    elif verbose == 1:
        logging.getLogger().setLevel(logging.INFO)


def _threads(requested: Optional[int]) -> int:
    if requested is None:
        return config.threads
    if requested < 0:
        raise UsageError("--threads must be >= 0")
    return requested or cpu_threads()


def _environment_problems(args) -> list[str]:
    """Config.validate() minus problems a flag already overrides"""
    problems = config.validate()
    if args.threads is not None:
        problems = [p for p in problems if "NMCDSE_THREADS" not in p]
    if args.config is not None:
        problems = [p for p in problems if "NMCDSE_CONFIG" not in p]
    return problems


def _report(message: str) -> None:
    console.print(f"error: {message}", style="red", markup=False, highlight=False, soft_wrap=True)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse flags, run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _apply_verbosity(args.verbose)

    config_path = args.config
    if config_path is None and config.has_config_file:
        config_path = Path(config.config_path)

    started = time.perf_counter()
    try:
        threads = _threads(args.threads)
        problems = _environment_problems(args)
        if problems:
            raise ConfigError(None, "; ".join(problems))
        run_config = load_run_config(config_path, args.overrides)
        ctx = RunContext(args=args, run=run_config, threads=threads, quiet=args.quiet)
        code = args.handler(ctx)
    except UsageError as e:
        _report(str(e))
        return EXIT_USAGE
    except (NmcDseError, ValueError, OSError) as e:
        logger.debug("Data error", exc_info=True)
        _report(str(e))
        return EXIT_DATA

    elapsed = time.perf_counter() - started
    argv_list = list(argv) if argv is not None else sys.argv[1:]
    for output in ctx.outputs:
        write_manifest(RunManifest(
            subcommand=args.command,
            inputs=ctx.inputs,
            config_path=str(config_path) if config_path else None,
            output=str(output),
            seed=ctx.seed,
            argv=argv_list,
            wall_clock_seconds=round(elapsed, 6),
        ), output)
    logger.info(f"{args.command} finished in {elapsed:.3f}s")
    return code
