"""
Solution Files, Warm Starts and Input Detection

Primal file: n lines of r comma-separated fields (the factor Y).
Dual file: one line, theta followed by p_1 ... p_m.
Both are header-free; lines starting with '#' are skipped when reading.
"""

import logging
import os
from typing import Optional, Tuple

import numpy as np

from core.hybrid import FactoredPrimal, SdpInstance
from formats.errors import FormatError
from formats.hslr import logical_lines, looks_like_hslr, parse_float, parse_hslr
from formats.sdpa import parse_sdpa

logger = logging.getLogger("hslr_sdp.formats")

SDPA_EXTENSIONS = (".dat-s", ".dat")


def format_csv_field(value: float) -> str:
    """Shortest round-trip decimal, with a trailing '.0' dropped (0.0 -> '0')."""
    value = float(value)
    if value == 0.0:
        return "0"
    text = repr(value)
    if text.endswith(".0"):
        text = text[:-2]
    return text


def write_primal(Y, path: str):
    """Write the n x r factor as header-free CSV."""
    Y = Y.Y if isinstance(Y, FactoredPrimal) else np.atleast_2d(np.asarray(Y, dtype=float))
    with open(path, 'w') as f:
        for row in Y:
            f.write(",".join(format_csv_field(v) for v in row) + "\n")


def write_dual(theta: float, p, path: str):
    """Write theta followed by the multipliers on a single line."""
    fields = [format_csv_field(theta)] + [format_csv_field(v) for v in np.asarray(p, dtype=float).ravel()]
    with open(path, 'w') as f:
        f.write(",".join(fields) + "\n")


def _read_csv_rows(path: str):
    with open(path, 'r') as f:
        text = f.read()
    rows = []
    for lineno, line in logical_lines(text):
        fields = line.split(",")
        rows.append((lineno, [parse_float(tok.strip(), lineno, "CSV field", path) for tok in fields]))
    return rows


def read_primal(path: str) -> np.ndarray:
    """
    Read a dense header-free CSV factor.

    Raises:
        FormatError: Empty file, ragged rows or non-numeric fields
    """
    rows = _read_csv_rows(path)
    if not rows:
        raise FormatError("primal file holds no data rows", None, None, path)
    width = len(rows[0][1])
    for lineno, values in rows:
        if len(values) != width:
            raise FormatError(f"row has {len(values)} fields, expected {width}", lineno, str(len(values)), path)
    return np.array([values for _, values in rows], dtype=float)


def read_dual(path: str) -> Tuple[float, np.ndarray]:
    """Read (theta, p) from a dual file."""
    rows = _read_csv_rows(path)
    if len(rows) != 1:
        raise FormatError(f"dual file must hold exactly one data line, found {len(rows)}", None, None, path)
    lineno, values = rows[0]
    if values[0] < 0:
        raise FormatError("theta must be nonnegative", lineno, format_csv_field(values[0]), path)
    return values[0], np.array(values[1:], dtype=float)


def read_warm_start(path: str, inst: SdpInstance) -> FactoredPrimal:
    """
    Load Y0 and make it satisfy ||Y0||_F^2 <= tau.

    A factor outside the spectraplex is rescaled onto its boundary with a
    warning instead of being rejected.
    """
    Y = read_primal(path)
    if Y.shape[0] != inst.n:
        raise FormatError(f"warm start has {Y.shape[0]} rows, expected n={inst.n}", None, None, path)
    tau = inst.require_trace_bound()
    norm_sq = float(np.sum(Y * Y))
    if norm_sq > tau:
        logger.warning("Warm start has ||Y0||_F^2 = %.6g > trace bound %.6g; rescaling onto the boundary", norm_sq, tau)
        Y = Y * (np.sqrt(tau) / np.sqrt(norm_sq))
    return FactoredPrimal(Y)


def detect_format(path: str, text: Optional[str] = None, override: str = "auto") -> str:
    """
    Decide between 'hslr' and 'sdpa'.

    An explicit override wins; then the .dat-s extension; otherwise the text
    is sniffed: a leading '"' / '*' comment means SDPA, and an 'm n' opening
    counts as HSLR only when the b vector, a lone trace bound and a block
    header follow in the HSLR positions (SDPA may also open with 'm nBLOCK').
    """
    if override in ("hslr", "sdpa"):
        return override
    if path.lower().endswith(SDPA_EXTENSIONS):
        return "sdpa"
    if text is None:
        return "hslr"
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith(('"', '*')):
            return "sdpa"
        break
    return "hslr" if looks_like_hslr(text) else "sdpa"


def read_instance(path: str, fmt: str = "auto", trace_bound: Optional[float] = None) -> Tuple[SdpInstance, str]:
    """
    Read a problem file in either format.

    Args:
        path: Problem file
        fmt: 'auto', 'hslr' or 'sdpa'
        trace_bound: Overrides the file's trace bound; mandatory for SDPA

    Returns:
        Tuple of (instance, detected format)

    Raises:
        FormatError: Malformed file
        ValueError: SDPA input without a trace bound
    """
    with open(path, 'r') as f:
        text = f.read()
    kind = detect_format(path, text, fmt)
    source = os.path.basename(path) or path
    inst = parse_sdpa(text, source) if kind == "sdpa" else parse_hslr(text, source)
    if trace_bound is not None:
        if inst.tau is not None and inst.tau != trace_bound:
            logger.info("Trace bound %.6g from the command line replaces %.6g from %s", trace_bound, inst.tau, source)
        inst = inst.with_trace_bound(trace_bound)
    elif inst.tau is None:
        raise ValueError("SDPA input must specify --trace_bound; the solver will not run without it")
    return inst, kind
