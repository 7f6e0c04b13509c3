"""
Sparse SDPA (.dat-s) Reader

Header: m, number of blocks, the block sizes and the m-vector, in that
order; m and the block count may share a line, the other groups take
one line each. Entry lines are 'matno blkno i j val' with
matno 0 the objective matrix. Negative block sizes mark diagonal blocks.
All blocks are embedded as a direct sum into a single n x n matrix; the
data carries no trace bound, so the returned instance has tau = None.
"""

import re
from typing import Dict, List, Tuple

import numpy as np

from core.hybrid import HybridMatrix, SdpInstance, SparseSym
from formats.errors import FormatError
from formats.hslr import logical_lines, parse_float, parse_int

_PUNCTUATION = re.compile(r"[,{}()]")


def _tokens(line: str) -> List[str]:
    return _PUNCTUATION.sub(" ", line).split()


def parse_sdpa(text: str, source: str = "") -> SdpInstance:
    """
    Parse sparse SDPA text.

    The objective matrix F0 becomes C and F_l becomes A_l, with the header
    vector as b; the problem solved is min C . X subject to A(X) = b.

    Raises:
        FormatError: On a malformed header, lower-triangle entries,
            duplicate entries or entries outside their block
    """
    lines = logical_lines(text, comment_prefixes=('"', "*"))
    pos = 0

    def header_tokens(what: str) -> Tuple[int, List[str]]:
        nonlocal pos
        if pos >= len(lines):
            raise FormatError(f"missing {what}", None, None, source)
        lineno, line = lines[pos]
        pos += 1
        toks = _tokens(line)
        if not toks:
            raise FormatError(f"empty {what} line", lineno, line, source)
        return lineno, toks

    lineno, toks = header_tokens("constraint count")
    m = parse_int(toks[0], lineno, "constraint count", source)
    if m < 0:
        raise FormatError("constraint count must be nonnegative", lineno, toks[0], source)

    if len(toks) >= 2 and toks[1].lstrip("+-").isdigit():
        # m and nBLOCK may share the first line
        toks = toks[1:]
    else:
        lineno, toks = header_tokens("block count")
    nblocks = parse_int(toks[0], lineno, "block count", source)
    if nblocks < 1:
        raise FormatError("block count must be positive", lineno, toks[0], source)

    lineno, toks = header_tokens("block sizes")
    if len(toks) < nblocks:
        raise FormatError(f"expected {nblocks} block sizes, found {len(toks)}", lineno, " ".join(toks), source)
    sizes = [parse_int(t, lineno, "block size", source) for t in toks[:nblocks]]
    for t, s in zip(toks, sizes):
        if s == 0:
            raise FormatError("block size must be nonzero", lineno, t, source)

    b = np.zeros(m)
    if m > 0:
        values: List[float] = []
        first_line = None
        while len(values) < m:
            lineno, toks = header_tokens("right-hand side vector")
            first_line = first_line or lineno
            values.extend(parse_float(t, lineno, "right-hand side entry", source) for t in toks)
        if len(values) != m:
            raise FormatError(f"right-hand side has {len(values)} entries, expected m={m}", first_line, None, source)
        b = np.array(values)

    offsets = np.concatenate([[0], np.cumsum(np.abs(sizes))]).astype(int)
    n = int(offsets[-1])

    triplets: Dict[int, List[Tuple[int, int, float]]] = {ell: [] for ell in range(m + 1)}
    seen: Dict[Tuple[int, int, int], int] = {}
    for lineno, line in lines[pos:]:
        toks = _tokens(line)
        if len(toks) != 5:
            raise FormatError("entry line must be 'matno blkno i j val'", lineno, line, source)
        matno = parse_int(toks[0], lineno, "matrix number", source)
        blkno = parse_int(toks[1], lineno, "block number", source)
        i = parse_int(toks[2], lineno, "row index", source)
        j = parse_int(toks[3], lineno, "column index", source)
        val = parse_float(toks[4], lineno, "entry value", source)
        if not 0 <= matno <= m:
            raise FormatError(f"matrix number outside [0, {m}]", lineno, toks[0], source)
        if not 1 <= blkno <= nblocks:
            raise FormatError(f"block number outside [1, {nblocks}]", lineno, toks[1], source)
        size = sizes[blkno - 1]
        if not (1 <= i <= abs(size) and 1 <= j <= abs(size)):
            raise FormatError(f"entry outside block {blkno} of size {abs(size)}", lineno, f"{toks[2]} {toks[3]}", source)
        if size < 0 and i != j:
            raise FormatError(f"off-diagonal entry in diagonal block {blkno}", lineno, f"{toks[2]} {toks[3]}", source)
        if i > j:
            raise FormatError("only upper-triangle entries (i <= j) are allowed", lineno, f"{toks[2]} {toks[3]}", source)
        gi = int(offsets[blkno - 1]) + i
        gj = int(offsets[blkno - 1]) + j
        key = (matno, gi, gj)
        if key in seen:
            raise FormatError(f"duplicate entry for matrix {matno} (first at line {seen[key]})", lineno, f"{toks[2]} {toks[3]}", source)
        seen[key] = lineno
        triplets[matno].append((gi, gj, val))

    mats = []
    for ell in range(m + 1):
        entries = triplets[ell]
        if entries:
            mats.append(HybridMatrix(n, sparse=SparseSym.from_triplets(n, entries)))
        else:
            mats.append(HybridMatrix.zeros(n))
    return SdpInstance(m, n, b, None, mats)
