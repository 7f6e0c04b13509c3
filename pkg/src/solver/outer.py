"""
Augmented Lagrangian Outer Loop

Each outer iteration approximately minimizes the augmented Lagrangian over
the spectraplex with the hybrid low-rank inner solver, takes a multiplier
step, builds theta from the minimum eigenvalue of C + A*(p), tests the
stopping criteria, adapts the penalty and truncates the factor's rank.
"""

import logging
import math
import time
from typing import Callable, Optional, Tuple

import numpy as np

from core.hybrid import FactoredPrimal, SdpInstance, as_factor
from core.operators import apply_A
from scaling.scaling import ScaleParams, UnscaledResult, scale_instance, scale_primal, unscale_result
from solver.dual import check_termination, compute_theta
from solver.inner import hlr_subproblem, project_ball
from solver.options import SolverOptions
from solver.records import IterRecord, SolveResult, SolveStats, SolveStatus

logger = logging.getLogger("hslr_sdp.solver")

RecordCallback = Callable[[IterRecord], None]


def default_initial(inst: SdpInstance, seed: int = 0) -> FactoredPrimal:
    """Seeded unit column scaled to norm sqrt(tau)/2."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(inst.n)
    v /= np.linalg.norm(v)
    return FactoredPrimal((0.5 * math.sqrt(inst.require_trace_bound()) * v).reshape(-1, 1))


def update_beta(beta: float, feas_prev: Optional[float], feas: float, opts: SolverOptions) -> float:
    """
    Raise beta by beta_inc when feasibility is still above eps_pfeas and fell
    by less than half, lower it when feasibility fell below 5% of its previous
    value, else keep it. Always clamped to [beta_min, beta_max].
    """
    if feas_prev is None:
        return beta
    if feas > opts.eps_pfeas and feas > 0.5 * feas_prev:
        return min(beta * opts.beta_inc, opts.beta_max)
    if feas < 0.05 * feas_prev and beta > opts.beta_min:
        return max(beta / opts.beta_inc, opts.beta_min)
    return beta


def truncate_rank(Y, tol: float = 1e-7) -> FactoredPrimal:
    """
    Drop directions of Y whose singular value is at most tol * sigma_max.

    Y = Q R and R = U diag(s) V^T give YY^T = (Q U s)(Q U s)^T, so keeping
    the columns of Q U s with large s changes X only by the dropped energy.
    A zero factor becomes a single zero column.
    """
    Y = as_factor(Y)
    if not np.any(Y):
        return FactoredPrimal(np.zeros((Y.shape[0], 1)))
    Q, R = np.linalg.qr(Y, mode='reduced')
    U, s, _ = np.linalg.svd(R)
    keep = s > tol * s[0]
    return FactoredPrimal(Q @ (U[:, keep] * s[keep]))


def _finite(*values) -> bool:
    return all(v is None or np.all(np.isfinite(v)) for v in values)


def solve(inst: SdpInstance, opts: Optional[SolverOptions] = None, warm=None,
          callback: Optional[RecordCallback] = None) -> SolveResult:
    """
    Run the augmented Lagrangian method on an instance.

    The CLI passes the scaled instance (trace bound 1); any positive trace
    bound works. The penalty starts at beta0 on the instance given.

    Args:
        inst: Instance with a trace bound
        opts: Solver options (defaults when None)
        warm: Optional starting factor, projected into the ball if needed
        callback: Called with each IterRecord as it is produced

    Returns:
        SolveResult; numerical trouble ends the run with NUMERICAL_ERROR
        instead of raising
    """
    opts = opts if opts is not None else SolverOptions()
    start = time.perf_counter()
    deadline = start + opts.time_limit
    tau = inst.require_trace_bound()
    stats = SolveStats()

    Y = default_initial(inst, opts.seed).Y if warm is None else as_factor(warm).copy()
    if Y.shape[0] != inst.n:
        raise ValueError(f"Starting factor has {Y.shape[0]} rows, expected n={inst.n}")
    Y = project_ball(Y, tau)
    p = np.zeros(inst.m)
    beta = opts.beta0
    theta = None
    certified = None
    feas_prev = None
    vec = None
    records = []
    status = SolveStatus.ITERATION_LIMIT
    diagnostic = ""
    check = None

    for k in range(opts.maxiter_hallar):
        if time.perf_counter() > deadline:
            status = SolveStatus.TIME_LIMIT
            break
        outcome = hlr_subproblem(inst, Y, p, beta, opts, stats=stats, deadline=deadline, v0=vec)
        Y, vec = outcome.Y, outcome.vec
        r = apply_A(inst, Y) - inst.b
        p = p + beta * r
        theta = compute_theta(inst, p, opts, stats=stats)
        if theta is not None:
            certified = (p, theta)
        check = check_termination(inst, Y, p, theta, opts)
        record = IterRecord(k, Y.shape[1], check.gap, check.feas, check.pval, check.dval, beta, outcome.steps,
                            outcome.fw_skipped)
        records.append(record)
        if callback is not None:
            callback(record)

        if not _finite(Y, p, check.pval, check.feas, check.dval):
            status = SolveStatus.NUMERICAL_ERROR
            diagnostic = f"non-finite values at outer iteration {k}"
            logger.warning("Stopping: %s", diagnostic)
            break
        if check.done:
            status = SolveStatus.OPTIMAL
            break

        beta = update_beta(beta, feas_prev, check.feas, opts)
        feas_prev = check.feas
        Y = truncate_rank(Y, opts.rank_tol).Y
    else:
        diagnostic = f"maxiter_hallar = {opts.maxiter_hallar} reached"

    if status is SolveStatus.TIME_LIMIT:
        diagnostic = f"time_limit = {opts.time_limit} s reached"
    if theta is None:
        theta = compute_theta(inst, p, opts.replace(maxiter_eig=10 * opts.maxiter_eig), stats=stats)
        if theta is not None:
            certified = (p, theta)
        elif certified is not None:
            logger.warning("No dual slack certificate for the final multipliers; returning the last certified pair")
    p_out, theta_out = certified if certified is not None else (p, 0.0)
    if check is None or check.dval is None:
        check = check_termination(inst, Y, p_out, None if certified is None else theta_out, opts)
    return SolveResult(
        Y=FactoredPrimal(Y),
        p=p_out,
        theta=theta_out,
        status=status,
        stats=stats,
        records=records,
        elapsed=time.perf_counter() - start,
        pval=check.pval,
        dval=check.dval,
        gap=check.gap,
        feas=check.feas,
        beta=beta,
        diagnostic=diagnostic,
    )


def solve_original(inst: SdpInstance, opts: Optional[SolverOptions] = None, warm=None,
                   callback: Optional[RecordCallback] = None) -> Tuple[SolveResult, ScaleParams, UnscaledResult]:
    """
    Scale to trace bound 1, solve, and map the solution back.

    Args:
        inst: Original instance with its trace bound
        opts: Solver options; scale_A and scale_C set the scale factors
        warm: Optional starting factor in original units

    Returns:
        Tuple of (scaled SolveResult, ScaleParams, UnscaledResult)
    """
    opts = opts if opts is not None else SolverOptions()
    sp = ScaleParams.from_options(inst.require_trace_bound(), opts)
    scaled = scale_instance(inst, sp)
    warm_scaled = None if warm is None else scale_primal(warm, sp)
    result = solve(scaled, opts, warm_scaled, callback)
    return result, sp, unscale_result(result, sp)
