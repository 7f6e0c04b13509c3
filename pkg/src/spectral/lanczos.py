"""
Minimum Eigenpair of Implicit Symmetric Operators

Restarted Lanczos with full reorthogonalization. Each cycle builds a Krylov
basis of at most `subspace` vectors, takes the smallest Ritz pair of the
tridiagonal projection and restarts from its Ritz vector. The budget `maxit`
counts operator applications, including the one used for each residual.
"""

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

logger = logging.getLogger("hslr_sdp.spectral")

DEFAULT_SUBSPACE = 30
_BREAKDOWN_TOL = 1e-13


@dataclass
class SymOperator:
    """A symmetric linear map of R^dim given only through v -> S v."""
    dim: int
    matvec: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"Operator dimension must be positive, got {self.dim}")

    @classmethod
    def from_dense(cls, S: np.ndarray) -> "SymOperator":
        S = np.asarray(S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ValueError(f"Expected a square matrix, got shape {S.shape}")
        return cls(S.shape[0], lambda v: S @ v)


class EigPair(NamedTuple):
    lam: float
    vec: np.ndarray
    converged: bool
    residual: float
    matvecs: int
    ritz_history: Tuple[float, ...] = ()


def _orthogonalize(w: np.ndarray, V: np.ndarray) -> np.ndarray:
    # two passes of classical Gram-Schmidt keep the basis orthogonal to working precision
    if V.shape[1] == 0:
        return w
    w = w - V @ (V.T @ w)
    return w - V @ (V.T @ w)


def min_eigpair(opr: SymOperator, tol: float = 1e-8, maxit: int = 1000, seed: int = 0,
                v0: Optional[np.ndarray] = None, subspace: int = DEFAULT_SUBSPACE) -> EigPair:
    """
    Smallest eigenvalue and a unit eigenvector of a symmetric operator.

    Args:
        opr: The operator
        tol: Converged once ||Sv - lam v|| <= tol * max(1, |lam|)
        maxit: Budget of operator applications
        seed: Seed for the start vector and for breakdown restarts
        v0: Optional warm-start vector (ignored if zero or of the wrong size)
        subspace: Maximum Krylov basis size per restart cycle

    Returns:
        EigPair with lam the smallest Rayleigh quotient seen, which never
        increases from one restart cycle to the next (ritz_history lists it
        per cycle); when the budget runs out first, the best pair found so
        far with converged=False
    """
    if not tol > 0:
        raise ValueError(f"Eigensolver tolerance must be positive, got {tol}")
    n = opr.dim
    rng = np.random.default_rng(seed)

    if n == 1:
        v = np.ones(1)
        lam = float(np.asarray(opr.matvec(v)).ravel()[0])
        return EigPair(lam, v, True, 0.0, 1, (lam,))

    x = None
    if v0 is not None:
        v0 = np.asarray(v0, dtype=float).ravel()
        if v0.size == n and np.linalg.norm(v0) > 0:
            x = v0 / np.linalg.norm(v0)
    if x is None:
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)

    k = min(n, max(2, subspace))
    maxit = max(int(maxit), 2)
    best: Optional[EigPair] = None
    history = []
    matvecs = 0
    cycle = 0

    while matvecs < maxit:
        cycle += 1
        V = np.zeros((n, k))
        alphas, betas = [], []
        V[:, 0] = x
        steps = 0
        anorm = 0.0
        for j in range(k):
            w = np.asarray(opr.matvec(V[:, j]), dtype=float).ravel()
            matvecs += 1
            steps = j + 1
            alpha = float(np.dot(V[:, j], w))
            alphas.append(alpha)
            w = _orthogonalize(w, V[:, :j + 1])
            beta = float(np.linalg.norm(w))
            anorm = max(anorm, abs(alpha) + beta)
            # leave one application for the residual of this cycle
            if j + 1 == k or matvecs >= maxit - 1:
                break
            if beta <= _BREAKDOWN_TOL * max(1.0, anorm):
                # invariant subspace found: continue with a fresh direction
                w = _orthogonalize(rng.standard_normal(n), V[:, :j + 1])
                norm = float(np.linalg.norm(w))
                if norm <= _BREAKDOWN_TOL:
                    break
                betas.append(0.0)
                V[:, j + 1] = w / norm
                continue
            betas.append(beta)
            V[:, j + 1] = w / beta

        d = np.array(alphas)
        e = np.array(betas[:steps - 1])
        if steps == 1:
            s = np.ones(1)
        else:
            _, vecs = eigh_tridiagonal(d, e, select='i', select_range=(0, 0))
            s = vecs[:, 0]
        y = V[:, :steps] @ s
        y /= np.linalg.norm(y)
        Sy = np.asarray(opr.matvec(y), dtype=float).ravel()
        matvecs += 1
        lam = float(np.dot(y, Sy))
        residual = float(np.linalg.norm(Sy - lam * y))
        converged = residual <= tol * max(1.0, abs(lam))
        logger.debug("Lanczos cycle %d: basis %d, lambda %.12g, residual %.3e, matvecs %d",
                     cycle, steps, lam, residual, matvecs)

        if best is None or lam <= best.lam:
            best = EigPair(lam, y, converged, residual, matvecs)
        elif converged:
            # a converged Ritz value may sit a rounding error above the best one
            best = EigPair(best.lam, y, True, residual, matvecs)
        else:
            best = best._replace(matvecs=matvecs)
        history.append(best.lam)
        if converged:
            break
        x = y

    if not best.converged:
        logger.debug("Lanczos stopped after %d matvecs without convergence (residual %.3e)", matvecs, best.residual)
    return best._replace(ritz_history=tuple(history))
