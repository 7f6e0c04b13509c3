"""
HSLR (Hybrid Sparse Low-Rank) Reader and Writer

File layout, after dropping blank lines and lines starting with '#':

    m n
    b_1 ... b_m            (omitted when m = 0)
    tau
    l SP                   then 'i j val' triplets, 1 <= i <= j <= n
    l LR                   then 'p_1 ... p_n ; d_1 ... d_r' lines, one
                           column of P_l and of D_l per line

Blocks may come in any order, but a matrix's SP block must precede its LR
block. Matrices that never appear are zero.
"""

import logging
import math
import re
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.hybrid import HybridMatrix, LowRankFactor, SdpInstance, SparseSym
from formats.errors import FormatError

logger = logging.getLogger("hslr_sdp.formats")

_INT_RE = re.compile(r"^[+-]?\d+$")
_HEADER_RE = re.compile(r"^([+-]?\d+)\s+(SP|LR)$", re.IGNORECASE)

# D_l must be symmetric to this relative tolerance; asymmetry is an error
D_SYMMETRY_TOL = 1e-8


def logical_lines(text: str, comment_prefixes: Tuple[str, ...] = ("#",)) -> List[Tuple[int, str]]:
    """Non-blank, non-comment lines with their 1-based physical line numbers."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefixes):
            continue
        out.append((lineno, line))
    return out


def parse_int(token: str, lineno: int, what: str, source: str = "") -> int:
    if not _INT_RE.match(token):
        raise FormatError(f"{what} must be an integer", lineno, token, source)
    return int(token)


def parse_float(token: str, lineno: int, what: str, source: str = "") -> float:
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"{what} must be a number", lineno, token, source) from None
    if not math.isfinite(value):
        raise FormatError(f"{what} must be finite", lineno, token, source)
    return value


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def looks_like_hslr(text: str) -> bool:
    """
    Cheap layout check: 'm n', then m entries of b (when m > 0), then a
    lone trace bound, then a block header if anything follows. Truncated
    documents pass so that the parser reports what is missing.
    """
    lines = [line.replace(",", " ").split() for _, line in logical_lines(text)]
    if not lines:
        return True
    head = lines[0]
    if len(head) != 2 or not all(_INT_RE.match(t) for t in head):
        return False
    m = int(head[0])
    if m > 0:
        if len(lines) < 2:
            return True
        if len(lines[1]) != m or not all(_is_number(t) for t in lines[1]):
            return False
    tau_at = 2 if m > 0 else 1
    if len(lines) <= tau_at:
        return True
    if len(lines[tau_at]) != 1 or not _is_number(lines[tau_at][0]):
        return False
    if len(lines) == tau_at + 1:
        return True
    return _HEADER_RE.match(" ".join(lines[tau_at + 1])) is not None


def format_hslr_float(value: float) -> str:
    """repr-style shortest round-trip text, so 1 is written as 1.0."""
    return repr(float(value))


class _MatrixBlocks:
    """Accumulates the SP / LR blocks seen for one matrix index."""

    def __init__(self):
        self.sparse: Optional[List[Tuple[int, int, float]]] = None
        self.sparse_line: Optional[int] = None
        self.lowrank_p: Optional[List[List[float]]] = None
        self.lowrank_d: Optional[List[List[float]]] = None
        self.lowrank_line: Optional[int] = None


def parse_hslr(text: str, source: str = "") -> SdpInstance:
    """
    Parse an HSLR document into an SdpInstance.

    Args:
        text: Complete file contents
        source: Name used in error messages (usually the path)

    Returns:
        The instance with matrices indexed 0..m (0 = cost)

    Raises:
        FormatError: On any grammar or consistency violation
    """
    lines = logical_lines(text)
    pos = 0

    def next_line(what: str) -> Tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            raise FormatError(f"missing {what} line", None, None, source)
        item = lines[pos]
        pos += 1
        return item

    lineno, line = next_line("'m n' header")
    tokens = line.split()
    if len(tokens) != 2:
        raise FormatError("header must contain exactly 'm n'", lineno, line, source)
    m = parse_int(tokens[0], lineno, "m", source)
    n = parse_int(tokens[1], lineno, "n", source)
    if m < 0:
        raise FormatError("m must be nonnegative", lineno, tokens[0], source)
    if n < 1:
        raise FormatError("n must be positive", lineno, tokens[1], source)

    b = np.zeros(m)
    if m > 0:
        lineno, line = next_line("b vector")
        tokens = line.split()
        if len(tokens) != m:
            raise FormatError(f"b vector has {len(tokens)} entries, expected m={m}", lineno, line, source)
        b = np.array([parse_float(t, lineno, "b entry", source) for t in tokens])

    lineno, line = next_line("trace bound")
    tokens = line.split()
    if len(tokens) != 1:
        raise FormatError("trace bound line must hold a single number", lineno, line, source)
    tau = parse_float(tokens[0], lineno, "trace bound", source)
    if tau <= 0:
        raise FormatError("trace bound must be positive", lineno, tokens[0], source)

    blocks: Dict[int, _MatrixBlocks] = {}
    current: Optional[Tuple[int, str]] = None
    for lineno, line in lines[pos:]:
        header = _HEADER_RE.match(line)
        if header:
            ell = parse_int(header.group(1), lineno, "matrix index", source)
            kind = header.group(2).upper()
            if not 0 <= ell <= m:
                raise FormatError(f"matrix index outside [0, {m}]", lineno, header.group(1), source)
            entry = blocks.setdefault(ell, _MatrixBlocks())
            if kind == "SP":
                if entry.lowrank_line is not None:
                    raise FormatError(f"SP block of matrix {ell} must precede its LR block (line {entry.lowrank_line})", lineno, line, source)
                if entry.sparse is not None:
                    raise FormatError(f"duplicate SP block for matrix {ell}", lineno, line, source)
                entry.sparse, entry.sparse_line = [], lineno
            else:
                if entry.lowrank_line is not None:
                    raise FormatError(f"duplicate LR block for matrix {ell}", lineno, line, source)
                entry.lowrank_p, entry.lowrank_d, entry.lowrank_line = [], [], lineno
            current = (ell, kind)
            continue
        if current is None:
            raise FormatError("data line before any 'l SP' / 'l LR' header", lineno, line.split()[0], source)
        ell, kind = current
        entry = blocks[ell]
        if kind == "SP":
            entry.sparse.append(_parse_triplet(line, lineno, n, source))
        else:
            p_col, d_col = _parse_lowrank_line(line, lineno, n, entry, source)
            entry.lowrank_p.append(p_col)
            entry.lowrank_d.append(d_col)

    mats = []
    for ell in range(m + 1):
        entry = blocks.get(ell)
        if entry is None:
            logger.warning("Matrix %d does not appear in %s; treating it as zero", ell, source or "the HSLR input")
            mats.append(HybridMatrix.zeros(n))
            continue
        mats.append(_assemble(ell, entry, n, source))
    return SdpInstance(m, n, b, tau, mats)


def _parse_triplet(line: str, lineno: int, n: int, source: str) -> Tuple[int, int, float]:
    tokens = line.split()
    if len(tokens) != 3:
        raise FormatError("sparse entry must be 'i j val'", lineno, line, source)
    i = parse_int(tokens[0], lineno, "row index", source)
    j = parse_int(tokens[1], lineno, "column index", source)
    val = parse_float(tokens[2], lineno, "entry value", source)
    if not 1 <= i <= n:
        raise FormatError(f"row index outside [1, {n}]", lineno, tokens[0], source)
    if not 1 <= j <= n:
        raise FormatError(f"column index outside [1, {n}]", lineno, tokens[1], source)
    if i > j:
        raise FormatError("only upper-triangle entries (i <= j) are allowed", lineno, f"{tokens[0]} {tokens[1]}", source)
    return i, j, val


def _parse_lowrank_line(line: str, lineno: int, n: int, entry: _MatrixBlocks, source: str) -> Tuple[List[float], List[float]]:
    if line.count(";") != 1:
        raise FormatError("low-rank line must be 'p_1 ... p_n ; d_1 ... d_r'", lineno, line, source)
    left, right = line.split(";")
    p_tokens, d_tokens = left.split(), right.split()
    if len(p_tokens) != n:
        raise FormatError(f"P column has {len(p_tokens)} entries, expected n={n}", lineno, left.strip(), source)
    if not d_tokens:
        raise FormatError("D column is empty", lineno, line, source)
    if entry.lowrank_d and len(d_tokens) != len(entry.lowrank_d[0]):
        raise FormatError(
            f"D column has {len(d_tokens)} entries, previous lines of this block have {len(entry.lowrank_d[0])}",
            lineno, right.strip(), source)
    p_col = [parse_float(t, lineno, "P entry", source) for t in p_tokens]
    d_col = [parse_float(t, lineno, "D entry", source) for t in d_tokens]
    return p_col, d_col


def _assemble(ell: int, entry: _MatrixBlocks, n: int, source: str) -> HybridMatrix:
    sparse = None
    if entry.sparse is not None:
        seen = {}
        for i, j, _ in entry.sparse:
            if (i, j) in seen:
                raise FormatError(f"duplicate triplet ({i}, {j}) in matrix {ell} (first at line {seen[(i, j)]})",
                                  entry.sparse_line, f"{i} {j}", source)
            seen[(i, j)] = entry.sparse_line
        sparse = SparseSym.from_triplets(n, entry.sparse)
    lowrank = None
    if entry.lowrank_p:
        r = len(entry.lowrank_d[0])
        if len(entry.lowrank_p) != r:
            raise FormatError(f"LR block of matrix {ell} has {len(entry.lowrank_p)} lines but D columns of length {r}",
                              entry.lowrank_line, str(ell), source)
        P = np.array(entry.lowrank_p, dtype=float).T
        D = np.array(entry.lowrank_d, dtype=float).T
        scale = max(1.0, float(np.max(np.abs(D))))
        if np.max(np.abs(D - D.T)) > D_SYMMETRY_TOL * scale:
            raise FormatError(f"D factor of matrix {ell} is not symmetric", entry.lowrank_line, str(ell), source)
        lowrank = LowRankFactor(P, 0.5 * (D + D.T))
    return HybridMatrix(n, sparse, lowrank)


def write_hslr(inst: SdpInstance, comments: bool = True) -> str:
    """
    Serialize an instance to HSLR text.

    Zero matrices are written as an empty 'l SP' block so that reading the
    file back does not warn about missing matrices.
    """
    tau = inst.require_trace_bound()
    out = []
    if comments:
        out.append("# m n")
    out.append(f"{inst.m} {inst.n}")
    if inst.m > 0:
        if comments:
            out.append("# b vector")
        out.append(" ".join(format_hslr_float(v) for v in inst.b))
    if comments:
        out.append("# Trace bound")
    out.append(format_hslr_float(tau))
    for ell, mat in enumerate(inst.mats):
        out.append("")
        if comments:
            out.append(f"# Matrix {ell}")
        if mat.sparse is not None or mat.is_zero:
            out.append(f"{ell} SP")
            if mat.sparse is not None:
                for i, j, v in mat.sparse.entries():
                    out.append(f"{i} {j} {format_hslr_float(v)}")
        if mat.lowrank is not None:
            out.append(f"{ell} LR")
            P, D = mat.lowrank.P, mat.lowrank.D
            for k in range(mat.lowrank.rank):
                p_text = " ".join(format_hslr_float(v) for v in P[:, k])
                d_text = " ".join(format_hslr_float(v) for v in D[:, k])
                out.append(f"{p_text} ; {d_text}")
    return "\n".join(out) + "\n"
