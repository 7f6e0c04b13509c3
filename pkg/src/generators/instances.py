"""
Instance Generators

Matrix completion through the SDP representation of the nuclear norm, and
the Lovasz theta relaxation of maximum stable set. Both emit HSLR-ready
SdpInstance values; indices in the specs are 1-based like the files.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from core.hybrid import HybridMatrix, LowRankFactor, SdpInstance, SparseSym
from formats.errors import FormatError
from formats.hslr import logical_lines, parse_float, parse_int


@dataclass
class MatCompSpec:
    """Observed entries M_ij, (i, j) in omega, of an n1 x n2 matrix."""
    n1: int
    n2: int
    omega: List[Tuple[int, int]] = field(default_factory=list)
    values: List[float] = field(default_factory=list)

    def __post_init__(self):
        if not 1 <= self.n1 <= self.n2:
            raise ValueError(f"Matrix completion needs 1 <= n1 <= n2, got n1={self.n1}, n2={self.n2}")
        if len(self.omega) != len(self.values):
            raise ValueError(f"{len(self.omega)} observed positions but {len(self.values)} values")
        seen = set()
        for i, j in self.omega:
            if not (1 <= i <= self.n1 and 1 <= j <= self.n2):
                raise ValueError(f"Observed position ({i}, {j}) outside the {self.n1} x {self.n2} matrix")
            if (i, j) in seen:
                raise ValueError(f"Duplicate observed position ({i}, {j})")
            seen.add((i, j))


@dataclass
class GraphSpec:
    """Undirected simple graph on vertices 1..n."""
    n: int
    edges: List[Tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Graph needs at least one vertex, got n={self.n}")
        canonical = []
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"Self-loop at vertex {i} is not allowed")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"Edge ({i}, {j}) references a vertex outside 1..{self.n}")
            edge = (min(i, j), max(i, j))
            if edge in seen:
                raise ValueError(f"Duplicate edge {{{edge[0]}, {edge[1]}}}")
            seen.add(edge)
            canonical.append(edge)
        self.edges = canonical


def matcomp_trace_bound(spec: MatCompSpec) -> float:
    """2 sqrt(n1) ||Y_hat||_F with Y_hat the zero-filled observations."""
    return 2.0 * math.sqrt(spec.n1) * float(np.linalg.norm(np.asarray(spec.values, dtype=float)))


def gen_matcomp(spec: MatCompSpec) -> SdpInstance:
    """
    Nuclear-norm matrix completion as an SDP over the (n1 + n2)-square block
    matrix [[W1, Y], [Y^T, W2]]: C = 0.5 I and one constraint per observed
    entry, selecting Y_ij through a 0.5 entry at (i, n1 + j).
    """
    n = spec.n1 + spec.n2
    tau = matcomp_trace_bound(spec)
    if not tau > 0:
        raise ValueError("Trace bound 2 sqrt(n1) ||Y_hat||_F is zero; at least one nonzero observation is required")
    diag = np.arange(n)
    cost = HybridMatrix(n, sparse=SparseSym(n, diag, diag, np.full(n, 0.5)))
    mats = [cost]
    for i, j in spec.omega:
        mats.append(HybridMatrix(n, sparse=SparseSym(n, [i - 1], [spec.n1 + j - 1], [0.5])))
    return SdpInstance(len(spec.omega), n, spec.values, tau, mats)


def gen_stableset(spec: GraphSpec) -> SdpInstance:
    """
    Lovasz theta relaxation: min -J . X s.t. X_ij = 0 on edges, Tr X <= 1.
    C is the rank-one term e [-1] e^T; each edge gives a 0.5 entry at (i, j).
    """
    n = spec.n
    cost = HybridMatrix(n, lowrank=LowRankFactor(np.ones((n, 1)), np.array([[-1.0]])))
    mats = [cost]
    for i, j in spec.edges:
        mats.append(HybridMatrix(n, sparse=SparseSym(n, [i - 1], [j - 1], [0.5])))
    m = len(spec.edges)
    return SdpInstance(m, n, np.zeros(m), 1.0, mats)


def gen_cycle(n: int) -> GraphSpec:
    """Cycle C_n: {i, i+1} for i < n, then {1, n}."""
    if n < 3:
        raise ValueError(f"A cycle needs at least 3 vertices, got {n}")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return GraphSpec(n, edges)


def gen_random_matcomp(n1: int, n2: int, rank: int, sample_fraction: float,
                       seed: int = 0) -> Tuple[MatCompSpec, np.ndarray]:
    """
    Seeded random rank-r matrix M = U V^T with a uniform sample of its entries.

    Returns:
        Tuple of (spec, M)
    """
    if not 1 <= n1 <= n2:
        raise ValueError(f"Matrix completion needs 1 <= n1 <= n2, got n1={n1}, n2={n2}")
    if not 1 <= rank <= n1:
        raise ValueError(f"Rank must lie in [1, {n1}], got {rank}")
    if not 0 < sample_fraction <= 1:
        raise ValueError(f"Sample fraction must lie in (0, 1], got {sample_fraction}")
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n1, rank)) @ rng.standard_normal((rank, n2))
    total = n1 * n2
    count = max(1, int(round(sample_fraction * total)))
    chosen = np.sort(rng.choice(total, size=count, replace=False))
    omega = [(int(k // n2) + 1, int(k % n2) + 1) for k in chosen]
    values = [float(M[i - 1, j - 1]) for i, j in omega]
    return MatCompSpec(n1, n2, omega, values), M


def read_edge_list(text: str, n: Optional[int] = None, source: str = "") -> GraphSpec:
    """
    One 'i j' pair per line, '#' comments. The vertex count is the largest
    index seen unless given.
    """
    edges = []
    for lineno, line in logical_lines(text):
        tokens = line.split()
        if len(tokens) != 2:
            raise FormatError("edge line must be 'i j'", lineno, line, source)
        i = parse_int(tokens[0], lineno, "vertex", source)
        j = parse_int(tokens[1], lineno, "vertex", source)
        if i < 1 or j < 1:
            raise FormatError("vertices are numbered from 1", lineno, line, source)
        edges.append((i, j))
    if n is None:
        n = max((max(e) for e in edges), default=0)
    if n < 1:
        raise FormatError("edge list defines no vertices; pass the vertex count", None, None, source)
    try:
        return GraphSpec(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc), None, None, source) from None


def read_observations(text: str, source: str = "") -> MatCompSpec:
    """First data line 'n1 n2', then 'i j value' per observed entry."""
    lines = logical_lines(text)
    if not lines:
        raise FormatError("missing 'n1 n2' header", None, None, source)
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2:
        raise FormatError("header must be 'n1 n2'", lineno, header, source)
    n1 = parse_int(tokens[0], lineno, "n1", source)
    n2 = parse_int(tokens[1], lineno, "n2", source)
    omega, values = [], []
    for lineno, line in lines[1:]:
        tokens = line.split()
        if len(tokens) != 3:
            raise FormatError("observation line must be 'i j value'", lineno, line, source)
        omega.append((parse_int(tokens[0], lineno, "row", source), parse_int(tokens[1], lineno, "column", source)))
        values.append(parse_float(tokens[2], lineno, "value", source))
    try:
        return MatCompSpec(n1, n2, omega, values)
    except ValueError as exc:
        raise FormatError(str(exc), None, None, source) from None
