"""
Hybrid Sparse + Low-Rank Data Types

Symmetric matrices stored as an upper-triangular sparse part plus a factored
low-rank part P D P^T, the SDP instance built from them, and the factored
primal / dual points the solver works with. Indices are 0-based in memory;
the 1-based file convention is handled by the parsers and writers.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp


# Dense materialization guard for test oracles
DENSE_SIZE_LIMIT = 2048


class SparseSym:
    """Upper triangle of a symmetric sparse matrix, kept in CSC layout."""

    def __init__(self, n: int, rows: Sequence[int], cols: Sequence[int], vals: Sequence[float]):
        """
        Build from 0-based upper-triangle triplets.

        Args:
            n: Matrix dimension
            rows: Row indices (i <= j)
            cols: Column indices
            vals: Entry values

        Raises:
            ValueError: On lower-triangle, out-of-range or duplicate entries
        """
        if n < 1:
            raise ValueError(f"Matrix dimension must be positive, got {n}")
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=float).ravel()
        if not (rows.size == cols.size == vals.size):
            raise ValueError("Triplet arrays must have equal length")
        if rows.size:
            if rows.min() < 0 or cols.max() >= n:
                raise ValueError(f"Sparse index outside [0, {n - 1}]")
            if np.any(rows > cols):
                raise ValueError("Sparse entries must satisfy i <= j (upper triangle)")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if rows.size > 1:
            dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
            if np.any(dup):
                k = int(np.flatnonzero(dup)[0])
                raise ValueError(f"Duplicate sparse entry ({rows[k] + 1}, {cols[k] + 1})")
        self.n = int(n)
        self.rows = rows
        self.cols = cols
        self.vals = vals
        self.upper = sp.csc_matrix((vals, (rows, cols)), shape=(n, n))

    @classmethod
    def from_triplets(cls, n: int, triplets: Sequence[Tuple[int, int, float]], one_based: bool = True) -> "SparseSym":
        """Build from (i, j, value) triplets, 1-based by default as in the file formats."""
        if len(triplets) == 0:
            return cls(n, [], [], [])
        arr = np.asarray(triplets, dtype=float)
        offset = 1 if one_based else 0
        rows = arr[:, 0].astype(np.int64) - offset
        cols = arr[:, 1].astype(np.int64) - offset
        return cls(n, rows, cols, arr[:, 2])

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def entries(self, one_based: bool = True) -> List[Tuple[int, int, float]]:
        """Triplets sorted by (row, col)."""
        offset = 1 if one_based else 0
        return [(int(i) + offset, int(j) + offset, float(v)) for i, j, v in zip(self.rows, self.cols, self.vals)]

    def matvec(self, V: np.ndarray) -> np.ndarray:
        """Symmetric product: upper part, its mirror, and the diagonal counted once."""
        diag = self.upper.diagonal()
        if V.ndim == 1:
            return self.upper @ V + self.upper.T @ V - diag * V
        return self.upper @ V + self.upper.T @ V - diag[:, None] * V

    def quadform(self, Y: np.ndarray) -> float:
        """<A, Y Y^T> without forming Y Y^T."""
        if self.nnz == 0:
            return 0.0
        weights = np.where(self.rows == self.cols, 1.0, 2.0)
        dots = np.einsum("kr,kr->k", Y[self.rows], Y[self.cols])
        return float(np.dot(self.vals * weights, dots))

    def scaled(self, factor: float) -> "SparseSym":
        return SparseSym(self.n, self.rows, self.cols, self.vals * factor)

    def dense(self) -> np.ndarray:
        upper = self.upper.toarray()
        return upper + upper.T - np.diag(np.diag(upper))


class LowRankFactor:
    """Low-rank term P D P^T with P (n x r, column-major) and symmetric D (r x r)."""

    def __init__(self, P: np.ndarray, D: np.ndarray):
        P = np.asfortranarray(np.asarray(P, dtype=float))
        D = np.asarray(D, dtype=float)
        if P.ndim == 1:
            P = np.asfortranarray(P.reshape(-1, 1))
        if D.ndim == 0:
            D = D.reshape(1, 1)
        r = P.shape[1]
        if D.shape != (r, r):
            raise ValueError(f"D must be {r}x{r} to match P's {r} columns, got {D.shape}")
        if r == 0:
            raise ValueError("Low-rank factor must have at least one column")
        scale = max(1.0, float(np.max(np.abs(D))))
        if np.max(np.abs(D - D.T)) > 1e-12 * scale:
            raise ValueError("Low-rank middle factor D is not symmetric")
        self.P = P
        self.D = D

    @property
    def n(self) -> int:
        return int(self.P.shape[0])

    @property
    def rank(self) -> int:
        return int(self.P.shape[1])

    def matvec(self, V: np.ndarray) -> np.ndarray:
        return self.P @ (self.D @ (self.P.T @ V))

    def quadform(self, Y: np.ndarray) -> float:
        W = self.P.T @ Y
        return float(np.sum(W * (self.D @ W)))

    def scaled(self, factor: float) -> "LowRankFactor":
        # P stays untouched, the scale goes into D
        return LowRankFactor(self.P, self.D * factor)

    def dense(self) -> np.ndarray:
        return self.P @ self.D @ self.P.T


class HybridMatrix:
    """Symmetric n x n matrix A = A_sp + P D P^T; both parts absent means zero."""

    def __init__(self, n: int, sparse: Optional[SparseSym] = None, lowrank: Optional[LowRankFactor] = None):
        if sparse is not None and sparse.n != n:
            raise ValueError(f"Sparse part has dimension {sparse.n}, expected {n}")
        if lowrank is not None and lowrank.n != n:
            raise ValueError(f"Low-rank part has dimension {lowrank.n}, expected {n}")
        self.n = int(n)
        self.sparse = sparse
        self.lowrank = lowrank

    @classmethod
    def zeros(cls, n: int) -> "HybridMatrix":
        return cls(n)

    @property
    def is_zero(self) -> bool:
        return self.sparse is None and self.lowrank is None

    def scaled(self, factor: float) -> "HybridMatrix":
        return HybridMatrix(
            self.n,
            self.sparse.scaled(factor) if self.sparse is not None else None,
            self.lowrank.scaled(factor) if self.lowrank is not None else None,
        )


class HybridStack:
    """
    All matrices of an instance concatenated for vectorized kernels.

    Sparse triplets and low-rank columns are tagged with the index of the
    matrix that owns them, so A(YY^T) for every matrix is one gather plus a
    bincount, and any weighted combination sum_l w_l A_l can be assembled
    into a single CSR matrix and one stacked low-rank product.
    """

    def __init__(self, n: int, mats: Sequence[HybridMatrix]):
        self.n = n
        self.count = len(mats)
        owners, rows, cols, vals = [], [], [], []
        lr_owners, lr_P, lr_D = [], [], []
        for idx, mat in enumerate(mats):
            if mat.sparse is not None and mat.sparse.nnz:
                owners.append(np.full(mat.sparse.nnz, idx, dtype=np.int64))
                rows.append(mat.sparse.rows)
                cols.append(mat.sparse.cols)
                vals.append(mat.sparse.vals)
            if mat.lowrank is not None:
                lr_owners.append(np.full(mat.lowrank.rank, idx, dtype=np.int64))
                lr_P.append(mat.lowrank.P)
                lr_D.append(mat.lowrank.D)
        if owners:
            self.sp_owner = np.concatenate(owners)
            self.sp_rows = np.concatenate(rows)
            self.sp_cols = np.concatenate(cols)
            self.sp_vals = np.concatenate(vals)
        else:
            self.sp_owner = np.zeros(0, dtype=np.int64)
            self.sp_rows = np.zeros(0, dtype=np.int64)
            self.sp_cols = np.zeros(0, dtype=np.int64)
            self.sp_vals = np.zeros(0)
        self.sp_offdiag = self.sp_rows != self.sp_cols
        self.sp_weights = np.where(self.sp_offdiag, 2.0, 1.0) * self.sp_vals
        if lr_owners:
            self.lr_owner = np.concatenate(lr_owners)
            self.lr_P = np.asfortranarray(np.hstack(lr_P))
            self.lr_D = sp.block_diag(lr_D, format="csr")
        else:
            self.lr_owner = np.zeros(0, dtype=np.int64)
            self.lr_P = None
            self.lr_D = None

    def quadforms(self, Y: np.ndarray) -> np.ndarray:
        """Vector of A_l . (Y Y^T) for every matrix in the stack."""
        out = np.zeros(self.count)
        if self.sp_vals.size:
            dots = np.einsum("kr,kr->k", Y[self.sp_rows], Y[self.sp_cols])
            out += np.bincount(self.sp_owner, weights=self.sp_weights * dots, minlength=self.count)
        if self.lr_P is not None:
            W = self.lr_P.T @ Y
            per_column = np.einsum("kr,kr->k", W, self.lr_D @ W)
            out += np.bincount(self.lr_owner, weights=per_column, minlength=self.count)
        return out

    def combine(self, weights: np.ndarray) -> "HybridCombination":
        """Assemble sum_l weights[l] * A_l as a reusable operator."""
        weights = np.asarray(weights, dtype=float)
        sparse_part = None
        if self.sp_vals.size:
            vals = weights[self.sp_owner] * self.sp_vals
            off = self.sp_offdiag
            data = np.concatenate([vals, vals[off]])
            rr = np.concatenate([self.sp_rows, self.sp_cols[off]])
            cc = np.concatenate([self.sp_cols, self.sp_rows[off]])
            sparse_part = sp.coo_matrix((data, (rr, cc)), shape=(self.n, self.n)).tocsr()
        lr_scale = weights[self.lr_owner] if self.lr_P is not None else None
        if lr_scale is not None and not np.any(lr_scale):
            lr_scale = None
        return HybridCombination(self.n, sparse_part, self.lr_P, self.lr_D, lr_scale)


@dataclass
class HybridCombination:
    """A fixed weighted sum of instance matrices, applied to vectors or blocks."""
    n: int
    sparse: Optional[sp.csr_matrix]
    P: Optional[np.ndarray]
    D: Optional[sp.csr_matrix]
    lr_scale: Optional[np.ndarray]

    def matmat(self, V: np.ndarray) -> np.ndarray:
        out = np.zeros(V.shape) if self.sparse is None else np.asarray(self.sparse @ V, dtype=float)
        if self.lr_scale is not None:
            W = self.D @ (self.P.T @ V)
            if W.ndim == 1:
                W = W * self.lr_scale
            else:
                W = W * self.lr_scale[:, None]
            out = out + self.P @ W
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.matmat(v)


class SdpInstance:
    """
    min C . X  s.t.  A(X) = b,  Tr(X) <= tau,  X PSD.

    mats[0] is the cost matrix C, mats[1..m] the constraint matrices. The
    trace bound may be None only for SDPA data awaiting --trace_bound.
    """

    def __init__(self, m: int, n: int, b: Sequence[float], tau: Optional[float], mats: Sequence[HybridMatrix]):
        b = np.array(b, dtype=float).ravel()
        if m < 0 or n < 1:
            raise ValueError(f"Invalid dimensions m={m}, n={n}")
        if b.size != m:
            raise ValueError(f"Right-hand side has length {b.size}, expected m={m}")
        if len(mats) != m + 1:
            raise ValueError(f"Expected {m + 1} matrices (cost + {m} constraints), got {len(mats)}")
        for idx, mat in enumerate(mats):
            if mat.n != n:
                raise ValueError(f"Matrix {idx} has dimension {mat.n}, expected {n}")
        if tau is not None and not tau > 0:
            raise ValueError(f"Trace bound must be positive, got {tau}")
        self.m = int(m)
        self.n = int(n)
        self.b = b
        self.b.setflags(write=False)
        self.tau = None if tau is None else float(tau)
        self.mats = tuple(mats)
        self._stack: Optional[HybridStack] = None

    @property
    def C(self) -> HybridMatrix:
        return self.mats[0]

    @property
    def stack(self) -> HybridStack:
        if self._stack is None:
            self._stack = HybridStack(self.n, self.mats)
        return self._stack

    def require_trace_bound(self) -> float:
        if self.tau is None:
            raise ValueError("Trace bound is not set; SDPA inputs must specify --trace_bound")
        return self.tau

    def with_trace_bound(self, tau: float) -> "SdpInstance":
        return SdpInstance(self.m, self.n, self.b, tau, self.mats)


@dataclass
class FactoredPrimal:
    """Primal iterate X = Y Y^T kept only through its n x r factor."""
    Y: np.ndarray

    def __post_init__(self):
        Y = np.asarray(self.Y, dtype=float)
        if Y.ndim == 1:
            Y = Y.reshape(-1, 1)
        if Y.ndim != 2 or Y.shape[1] < 1:
            raise ValueError(f"Factor must be an n x r array with r >= 1, got shape {Y.shape}")
        self.Y = Y

    @property
    def n(self) -> int:
        return int(self.Y.shape[0])

    @property
    def rank(self) -> int:
        return int(self.Y.shape[1])

    @property
    def trace(self) -> float:
        """Tr(Y Y^T), which is ||Y||_F^2."""
        return float(np.sum(self.Y * self.Y))

    def in_spectraplex(self, tau: float, slack: float = 1e-12) -> bool:
        return self.trace <= tau + slack


@dataclass
class DualPoint:
    """Dual multipliers p and trace multiplier theta; S = C + A*(p) + theta I is implicit."""
    p: np.ndarray
    theta: float = 0.0

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float).ravel()
        if self.theta < 0:
            raise ValueError(f"theta must be nonnegative, got {self.theta}")


def as_factor(Y: Union[FactoredPrimal, np.ndarray]) -> np.ndarray:
    """Accept a FactoredPrimal or raw array and return a 2-D float array."""
    if isinstance(Y, FactoredPrimal):
        return Y.Y
    arr = np.asarray(Y, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr
