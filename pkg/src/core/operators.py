"""
Linear-Algebra Kernels on Factored Iterates

A(YY^T), A*(p)v, the augmented Lagrangian and its gradient in Y, and the
primal / dual objective values. Every kernel works on the factor Y and the
hybrid storage; only hm_dense builds an n x n array and it is meant for
test oracles.
"""

from typing import Tuple, Union

import numpy as np

from core.hybrid import (
    DENSE_SIZE_LIMIT,
    FactoredPrimal,
    HybridCombination,
    HybridMatrix,
    SdpInstance,
    as_factor,
)

Factor = Union[FactoredPrimal, np.ndarray]


def _check_rows(n: int, Y: np.ndarray, what: str = "Factor"):
    if Y.shape[0] != n:
        raise ValueError(f"{what} has {Y.shape[0]} rows, expected n={n}")


def hm_quadform(A: HybridMatrix, Y: Factor) -> float:
    """A . (Y Y^T) from the sparse triplets and (P^T Y)."""
    Y = as_factor(Y)
    _check_rows(A.n, Y)
    value = 0.0
    if A.sparse is not None:
        value += A.sparse.quadform(Y)
    if A.lowrank is not None:
        value += A.lowrank.quadform(Y)
    return value


def hm_matvec(A: HybridMatrix, V: np.ndarray) -> np.ndarray:
    """A V for a single vector or a block of columns."""
    V = np.asarray(V, dtype=float)
    _check_rows(A.n, V, "Operand")
    out = np.zeros(V.shape)
    if A.sparse is not None:
        out = out + A.sparse.matvec(V)
    if A.lowrank is not None:
        out = out + A.lowrank.matvec(V)
    return out


def hm_dense(A: HybridMatrix) -> np.ndarray:
    """Dense symmetric copy of A. Test oracle only."""
    if A.n > DENSE_SIZE_LIMIT:
        raise ValueError(f"Refusing to densify a {A.n} x {A.n} matrix (limit {DENSE_SIZE_LIMIT})")
    out = np.zeros((A.n, A.n))
    if A.sparse is not None:
        out += A.sparse.dense()
    if A.lowrank is not None:
        out += A.lowrank.dense()
    return out


def quadforms(inst: SdpInstance, Y: Factor) -> np.ndarray:
    """(C . YY^T, A_1 . YY^T, ..., A_m . YY^T) in one pass."""
    Y = as_factor(Y)
    _check_rows(inst.n, Y)
    return inst.stack.quadforms(Y)


def apply_A(inst: SdpInstance, Y: Factor) -> np.ndarray:
    """A(Y Y^T) in R^m."""
    return quadforms(inst, Y)[1:]


def primal_value(inst: SdpInstance, Y: Factor) -> float:
    """pval = C . X with X = Y Y^T."""
    return hm_quadform(inst.C, Y)


def dual_value(inst: SdpInstance, p: np.ndarray, theta: float) -> float:
    """dval = -b^T p - tau * theta."""
    if theta < 0:
        raise ValueError(f"theta must be nonnegative, got {theta}")
    p = np.asarray(p, dtype=float).ravel()
    if p.size != inst.m:
        raise ValueError(f"Multiplier vector has length {p.size}, expected m={inst.m}")
    return float(-np.dot(inst.b, p) - inst.require_trace_bound() * theta)


def slack_operator(inst: SdpInstance, q: np.ndarray, cost_weight: float = 1.0) -> HybridCombination:
    """The operator cost_weight * C + A*(q) as one assembled combination."""
    q = np.asarray(q, dtype=float).ravel()
    if q.size != inst.m:
        raise ValueError(f"Multiplier vector has length {q.size}, expected m={inst.m}")
    weights = np.concatenate([[cost_weight], q])
    return inst.stack.combine(weights)


def apply_Astar(inst: SdpInstance, p: np.ndarray, V: np.ndarray) -> np.ndarray:
    """(sum_l p_l A_l) V for a vector or a block of columns."""
    V = np.asarray(V, dtype=float)
    if V.shape[0] != inst.n:
        raise ValueError(f"Operand has {V.shape[0]} rows, expected n={inst.n}")
    return slack_operator(inst, p, cost_weight=0.0).matmat(V)


def apply_Astar_vec(inst: SdpInstance, p: np.ndarray, v: np.ndarray) -> np.ndarray:
    """A*(p) v."""
    v = np.asarray(v, dtype=float).ravel()
    return apply_Astar(inst, p, v)


def _residual(inst: SdpInstance, Y: np.ndarray) -> Tuple[float, np.ndarray]:
    values = quadforms(inst, Y)
    return values[0], values[1:] - inst.b


def al_objective(inst: SdpInstance, Y: Factor, p: np.ndarray, beta: float) -> float:
    """C . X + <p, A(X) - b> + (beta/2) ||A(X) - b||^2 at X = Y Y^T."""
    if not beta > 0:
        raise ValueError(f"Penalty parameter must be positive, got {beta}")
    Y = as_factor(Y)
    cost, r = _residual(inst, Y)
    return float(cost + np.dot(p, r) + 0.5 * beta * np.dot(r, r))


def al_gradient(inst: SdpInstance, Y: Factor, p: np.ndarray, beta: float) -> np.ndarray:
    """2 (C + A*(q)) Y with q = p + beta (A(YY^T) - b)."""
    return al_value_and_gradient(inst, as_factor(Y), p, beta)[1]


def al_value_and_gradient(inst: SdpInstance, Y: np.ndarray, p: np.ndarray, beta: float) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Objective, gradient and residual of the augmented Lagrangian sharing one A(YY^T).

    Returns:
        Tuple of (value, gradient, residual A(YY^T) - b)
    """
    if not beta > 0:
        raise ValueError(f"Penalty parameter must be positive, got {beta}")
    cost, r = _residual(inst, Y)
    q = p + beta * r
    value = float(cost + np.dot(p, r) + 0.5 * beta * np.dot(r, r))
    grad = 2.0 * slack_operator(inst, q).matmat(Y)
    return value, grad, r


def feasibility_residual(inst: SdpInstance, Y: Factor) -> float:
    """||A(X) - b||_2 / (1 + ||b||_1)."""
    _, r = _residual(inst, as_factor(Y))
    return float(np.linalg.norm(r) / (1.0 + np.sum(np.abs(inst.b))))
