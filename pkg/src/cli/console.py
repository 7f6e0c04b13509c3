"""
Console Report

The settings header, the per-iteration table and the final results block.
Every function returns text; the caller decides whether to print it.
"""

import math
from typing import Optional

from core.hybrid import SdpInstance
from formats.options import PROVENANCE_DEFAULT, OptionSet
from solver.records import IterRecord, SolveResult

SEPARATOR = "#" * 74
TABLE_HEADER = "  #   rank        gap      feas        pval        dval     pnlty steps"

# Always listed in the settings block, whatever their provenance
_BASIC_KEYS = ("input_path", "primal_output_path", "dual_output_path", "config_path", "initial_solution")


def format_report_float(value: Optional[float]) -> str:
    """Shortest round-trip text with a compact exponent: 8.844561680506419e-6, 1.0e11."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "NaN"
    text = repr(float(value))
    if "e" not in text:
        return text
    mantissa, exponent = text.split("e")
    if "." not in mantissa:
        mantissa += ".0"
    return f"{mantissa}e{int(exponent)}"


def render_header(options: OptionSet, verbosity: int = 1) -> str:
    """
    Basic settings block. Verbosity 1 lists the paths and every option that
    differs from its compiled default; verbosity 2 and up lists all options
    with the source that set them.
    """
    if verbosity <= 0:
        return ""
    lines = ["---------- Basic Settings ------------------"]
    for key, value, provenance in options.items():
        if key == "run_tests":
            continue
        if verbosity >= 2:
            lines.append(f"{key} = {value} ({provenance})")
        elif key in _BASIC_KEYS and value:
            lines.append(f"{key} = {value}")
        elif key not in _BASIC_KEYS and provenance != PROVENANCE_DEFAULT:
            lines.append(f"{key} = {value}")
    return "\n".join(lines)


def render_problem(inst: SdpInstance, kind: str, path: str, verbosity: int = 1) -> str:
    """Reading line, problem dimensions, and the table header."""
    if verbosity <= 0:
        return ""
    label = "SDPA" if kind == "sdpa" else "HSLR"
    lines = [
        f"Reading {label} file: {path}",
        "Problem dimensions:",
        f"  - Matrix size: {inst.n} x {inst.n}",
        f"  - Number of constraints: {inst.m}",
        f"  - Trace bound: {inst.require_trace_bound()}",
        "",
        "Solving SDP problem...",
        "",
        SEPARATOR,
        TABLE_HEADER,
    ]
    return "\n".join(lines)


def render_iteration(rec: IterRecord, verbosity: int = 1) -> str:
    """
    One table row: #, rank, gap, feas, pval, dval, pnlty, steps.

    An undefined gap prints '-' on iteration 0 and 'NaN' afterwards; an
    undefined dval prints 'NaN'.
    """
    if verbosity <= 0:
        return ""
    if rec.gap is None or math.isnan(rec.gap):
        gap = "-" if rec.iteration == 0 else "NaN"
    else:
        gap = f"{rec.gap:.1e}"
    dval = "NaN" if rec.dval is None or math.isnan(rec.dval) else f"{rec.dval:.3e}"
    row = (f"{rec.iteration:3d} {rec.rank:6d} {gap:>10} {rec.feas:9.1e} {rec.pval:11.3e} "
           f"{dval:>11} {rec.beta:9.1e} {rec.steps}")
    if rec.fw_skipped and verbosity >= 2:
        row += "  (eig)"
    return row


def render_final(result: SolveResult, unscaled_value: float, elapsed: float,
                 primal_path: Optional[str] = None, dual_path: Optional[str] = None,
                 verbosity: int = 1) -> str:
    """Final results block, counters, unscaled value, run time and output lines."""
    if verbosity <= 0:
        return ""
    lines = [
        "Final Results",
        f"Primal Obj              = {format_report_float(result.pval)}",
        f"Dual Obj                = {format_report_float(result.dval)}",
        f"PD Gap                  = {format_report_float(result.gap)}",
        f"Primal infeasibility      = {format_report_float(result.feas)}",
    ]
    if verbosity >= 2:
        lines.append(f"Status                  = {result.status.value}")
        if result.diagnostic:
            lines.append(f"Diagnostic              = {result.diagnostic}")
    lines += [
        "",
        f"#ADAP FISTA Calls: {result.stats.fista_calls}",
        f"#ACG Iterations: {result.stats.acg_iterations}",
        f"#FW Calls: {result.stats.fw_calls}",
        f"Primal val unscaled = {format_report_float(unscaled_value)}",
        f"Run time = {elapsed:.6f} seconds",
    ]
    if primal_path is not None and dual_path is not None:
        lines += ["Writing output", f"Output written to {primal_path} and {dual_path}."]
    return "\n".join(lines)
