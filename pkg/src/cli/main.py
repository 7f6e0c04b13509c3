"""
Command-Line Front End

    hslr_sdp -i model.hslr [-c options.cfg] [-p primal.csv] [-d dual.csv] [--<option> value ...]
    hslr_sdp -i model.dat-s --trace_bound 10
    hslr_sdp --run_tests
    hslr_sdp gen stableset --cycle 4 -o c4.hslr
    hslr_sdp gen matcomp --n1 20 --n2 30 --rank 2 --fraction 0.3 -o mc.hslr

Exit codes: 0 optimal, 2 iteration / time limit or numerical trouble,
1 usage, option or input errors.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

# Add src directory to path for imports
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from formats.errors import OptionError
from formats.hslr import write_hslr
from formats.options import (
    OPTION_SPECS,
    PROVENANCE_CLI,
    PROVENANCE_DEFAULT,
    OptionSet,
    coerce_value,
    load_default_options,
    merge_options,
    option_descriptions,
    parse_config,
)
from formats.solution import read_instance, read_warm_start, write_dual, write_primal
from generators.instances import (
    gen_cycle,
    gen_matcomp,
    gen_random_matcomp,
    gen_stableset,
    read_edge_list,
    read_observations,
)
from cli.console import render_final, render_header, render_iteration, render_problem
from cli.selftest import run_tests
from solver.outer import solve_original

logger = logging.getLogger("hslr_sdp.cli")

_SHORT_FLAGS = {
    "input_path": "-i",
    "primal_output_path": "-p",
    "dual_output_path": "-d",
    "config_path": "-c",
    "initial_solution": "-w",
    "output_path": "-o",
}

_LOG_LEVELS = {1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}


class UsageError(Exception):
    """Bad command line: unknown flag, missing value or missing input."""
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Invocation:
    mode: str                       # 'solve', 'run_tests' or 'gen'
    input_path: Optional[str]
    overrides: OptionSet
    gen_args: List[str] = field(default_factory=list)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hslr_sdp", description="Low-rank first-order SDP solver for HSLR and SDPA inputs",
                     allow_abbrev=False)
    help_text = option_descriptions()
    for key in OPTION_SPECS:
        if key == "run_tests":
            parser.add_argument("--run_tests", action="store_true", default=argparse.SUPPRESS, help=help_text[key])
            continue
        flags = [_SHORT_FLAGS[key]] if key in _SHORT_FLAGS else []
        flags.append(f"--{key}")
        if key == "config_path":
            flags.append("--config")
        parser.add_argument(*flags, dest=key, default=argparse.SUPPRESS, metavar="VALUE", help=help_text[key])
    return parser


def parse_args(argv: Sequence[str]) -> Invocation:
    """
    Turn argv into an Invocation with command-line option overrides.

    Raises:
        UsageError: Unrecognized flag or missing value
        OptionError: A value of the wrong type or range
    """
    argv = list(argv)
    if argv and argv[0] == "gen":
        return Invocation("gen", None, OptionSet(provenance=PROVENANCE_CLI), argv[1:])
    namespace = build_parser().parse_args(argv)
    overrides = OptionSet(provenance=PROVENANCE_CLI)
    for key, raw in vars(namespace).items():
        overrides.set(key, coerce_value(key, raw), PROVENANCE_CLI)
    mode = "run_tests" if overrides.get("run_tests") else "solve"
    return Invocation(mode, overrides.get("input_path"), overrides)


def derive_output_paths(output_path: str) -> Tuple[str, str]:
    """out.csv -> (out_primal.csv, out_dual.csv)."""
    stem, ext = os.path.splitext(output_path)
    return f"{stem}_primal{ext}", f"{stem}_dual{ext}"


def resolve_output_paths(options: OptionSet) -> Tuple[str, str]:
    """-o derives both paths unless -p / -d were given by the command line or config file."""
    primal, dual = options["primal_output_path"], options["dual_output_path"]
    base = options.get("output_path")
    if base:
        derived_primal, derived_dual = derive_output_paths(base)
        if options.provenance("primal_output_path") == PROVENANCE_DEFAULT:
            primal = derived_primal
        if options.provenance("dual_output_path") == PROVENANCE_DEFAULT:
            dual = derived_dual
    return primal, dual


def configure_logging(verbosity: int):
    """Attach one stderr handler to the package logger at the level verbosity asks for."""
    root = logging.getLogger("hslr_sdp")
    for handler in list(root.handlers):
        if getattr(handler, "_hslr_cli", False):
            root.removeHandler(handler)
    if verbosity <= 0:
        root.setLevel(logging.CRITICAL + 1)
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._hslr_cli = True
    root.addHandler(handler)
    root.setLevel(_LOG_LEVELS[min(verbosity, 3)])


def load_options(overrides: OptionSet) -> OptionSet:
    """Merge command line, configuration file (from -c) and compiled defaults."""
    cfg = OptionSet(provenance="config")
    config_path = overrides.get("config_path")
    if config_path:
        with open(config_path, 'r') as f:
            cfg = parse_config(f.read(), config_path)
    return merge_options(overrides, cfg, load_default_options())


def _fail(message: str) -> int:
    print(f"Error: {message}", file=sys.stderr)
    return 1


def run_main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Full pipeline: options, input, optional warm start, scaled solve,
    unscaling, output files and the console report.
    """
    argv = sys.argv[1:] if argv is None else argv
    try:
        invocation = parse_args(argv)
    except (UsageError, OptionError) as exc:
        print(build_parser().format_usage().rstrip(), file=sys.stderr)
        return _fail(str(exc))

    if invocation.mode == "gen":
        return gen_main(invocation.gen_args)

    try:
        options = load_options(invocation.overrides)
        verbosity = options["verbosity"]
        configure_logging(verbosity)
        if options["run_tests"]:
            return run_tests(verbosity=verbosity)
        if not options["input_path"]:
            raise UsageError("an input file is required (-i <path>)")
        solver_opts = options.to_solver_options()
        input_path = options["input_path"]
        inst, kind = read_instance(input_path, options["format"], options["trace_bound"])
        warm = read_warm_start(options["initial_solution"], inst) if options["initial_solution"] else None
        primal_path, dual_path = resolve_output_paths(options)
    except (UsageError, ValueError, OSError) as exc:
        # FormatError and OptionError are ValueErrors
        if isinstance(exc, ValueError) and "trace_bound" in str(exc):
            logger.warning("%s", exc)
        return _fail(str(exc))

    def emit(text: str):
        if text:
            print(text)

    emit(render_header(options, verbosity))
    emit(render_problem(inst, kind, input_path, verbosity))
    result, _, unscaled = solve_original(inst, solver_opts, warm,
                                         callback=lambda rec: emit(render_iteration(rec, verbosity)))
    try:
        write_primal(unscaled.Y, primal_path)
        write_dual(unscaled.dual.theta, unscaled.dual.p, dual_path)
    except OSError as exc:
        return _fail(f"could not write output: {exc}")
    emit(render_final(result, unscaled.pval, result.elapsed, primal_path, dual_path, verbosity))
    return result.status.exit_code


def _gen_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hslr_sdp gen", description="Write generated instances as HSLR files",
                     allow_abbrev=False)
    sub = parser.add_subparsers(dest="family")
    sub.required = True

    mc = sub.add_parser("matcomp", help="Nuclear-norm matrix completion")
    mc.add_argument("--observations", help="File with 'n1 n2' then 'i j value' lines")
    mc.add_argument("--n1", type=int, help="Rows of the random matrix")
    mc.add_argument("--n2", type=int, help="Columns of the random matrix")
    mc.add_argument("--rank", type=int, default=1, help="Rank of the random matrix")
    mc.add_argument("--fraction", type=float, default=0.5, help="Fraction of observed entries")
    mc.add_argument("--seed", type=int, default=0, help="Random seed")
    mc.add_argument("-o", "--output", required=True, help="HSLR file to write")

    ss = sub.add_parser("stableset", help="Lovasz theta relaxation of maximum stable set")
    ss.add_argument("--edges", help="Edge list file, one 'i j' pair per line")
    ss.add_argument("--n", type=int, help="Vertex count for --edges (default: largest index)")
    ss.add_argument("--cycle", type=int, help="Use the cycle graph on this many vertices")
    ss.add_argument("-o", "--output", required=True, help="HSLR file to write")
    return parser


def gen_main(args: Sequence[str]) -> int:
    """`gen matcomp` and `gen stableset` subcommands."""
    parser = _gen_parser()
    try:
        ns = parser.parse_args(list(args))
        if ns.family == "matcomp":
            if ns.observations:
                with open(ns.observations, 'r') as f:
                    spec = read_observations(f.read(), ns.observations)
            elif ns.n1 is not None and ns.n2 is not None:
                spec, _ = gen_random_matcomp(ns.n1, ns.n2, ns.rank, ns.fraction, ns.seed)
            else:
                raise UsageError("gen matcomp needs --observations FILE or --n1 and --n2")
            inst = gen_matcomp(spec)
        else:
            if (ns.edges is None) == (ns.cycle is None):
                raise UsageError("gen stableset needs exactly one of --edges FILE or --cycle N")
            if ns.cycle is not None:
                graph = gen_cycle(ns.cycle)
            else:
                with open(ns.edges, 'r') as f:
                    graph = read_edge_list(f.read(), ns.n, ns.edges)
            inst = gen_stableset(graph)
        with open(ns.output, 'w') as f:
            f.write(write_hslr(inst))
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return _fail(str(exc))
    except (ValueError, OSError) as exc:
        return _fail(str(exc))
    print(f"Wrote {ns.output}: m = {inst.m}, n = {inst.n}, trace bound = {inst.tau}")
    return 0


def main():
    sys.exit(run_main())


if __name__ == '__main__':
    main()
