"""
Dual Construction and Termination Test
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.hybrid import SdpInstance, as_factor
from core.operators import dual_value, feasibility_residual, primal_value, slack_operator
from solver.options import SolverOptions
from solver.records import SolveStats
from spectral.lanczos import SymOperator, min_eigpair

logger = logging.getLogger("hslr_sdp.solver")


def compute_theta(inst: SdpInstance, p: np.ndarray, opts: SolverOptions, stats: Optional[SolveStats] = None,
                  v0: Optional[np.ndarray] = None) -> Optional[float]:
    """
    theta = max(0, -lambda_min(C + A*(p))), or None when the eigensolve failed.

    The Ritz value is lowered by its residual before negation so that
    C + A*(p) + theta I stays PSD when the Ritz value sits slightly above
    the true minimum.
    """
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)):
        return None
    S = slack_operator(inst, p)
    eig = min_eigpair(SymOperator(inst.n, S.matvec), tol=opts.eps_eig, maxit=opts.maxiter_eig,
                      seed=opts.seed, v0=v0)
    if stats is not None:
        stats.eig_calls += 1
        stats.matvecs += eig.matvecs
    if not eig.converged and eig.residual > opts.err_tol_eig * max(1.0, abs(eig.lam)):
        logger.warning("Eigensolver did not converge for the dual slack (residual %.3e); dual value unavailable",
                       eig.residual)
        return None
    return max(0.0, -(eig.lam - eig.residual))


@dataclass
class TerminationCheck:
    feas: float
    gap: Optional[float]
    pval: float
    dval: Optional[float]
    done: bool


def relative_gap(pval: float, dval: float) -> float:
    return abs(pval - dval) / (1.0 + abs(pval) + abs(dval))


def check_termination(inst: SdpInstance, Y, p: np.ndarray, theta: Optional[float],
                      opts: SolverOptions) -> TerminationCheck:
    """
    Relative feasibility ||A(X) - b|| / (1 + ||b||_1) and relative gap
    |pval - dval| / (1 + |pval| + |dval|); done when both meet their
    tolerances. Without theta the gap is undefined and done is False.
    """
    Y = as_factor(Y)
    feas = feasibility_residual(inst, Y)
    pval = primal_value(inst, Y)
    if theta is None:
        return TerminationCheck(feas, None, pval, None, False)
    dval = dual_value(inst, p, theta)
    gap = relative_gap(pval, dval)
    done = feas <= opts.eps_pfeas and gap <= opts.eps_gap
    return TerminationCheck(feas, gap, pval, dval, done)
