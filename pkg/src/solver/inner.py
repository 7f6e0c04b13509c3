"""
Inner Solver: Accelerated Descent and Frank-Wolfe Rank Growth

One outer iteration minimizes the augmented Lagrangian over the spectraplex
in factored form. The descent phase ('A') runs an adaptive accelerated
projected gradient on Y inside the ball ||Y||_F^2 <= tau; the Frank-Wolfe
phase ('F') adds the minimum eigenvector of the AL gradient as a new column
when the smooth phase has stalled at a point that is not optimal over the
spectraplex.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.hybrid import SdpInstance, as_factor
from core.operators import al_value_and_gradient, apply_A, primal_value, slack_operator
from solver.options import SolverOptions
from solver.records import SolveStats
from spectral.lanczos import SymOperator, min_eigpair

logger = logging.getLogger("hslr_sdp.solver")

MAX_BACKTRACKS = 60
FW_TRIGGER_FACTOR = 10.0
FW_GAP_FRACTION = 0.1


def project_ball(Y: np.ndarray, tau: float) -> np.ndarray:
    """Radial projection onto {||Y||_F^2 <= tau}."""
    norm = float(np.linalg.norm(Y))
    radius = math.sqrt(tau)
    if norm <= radius:
        return Y
    return Y * (radius / norm)


def inner_target(beta: float, opts: SolverOptions) -> float:
    """
    Stationarity target of one subproblem: 0.1 * beta * eps_pfeas, never
    looser than eps_gap nor tighter than err_tol_fista.
    """
    return max(opts.err_tol_fista, min(0.1 * beta * opts.eps_pfeas, opts.eps_gap))


def fw_trigger(pval: float, opts: SolverOptions) -> float:
    """
    Smallest Frank-Wolfe gap that triggers a step. At the updated multipliers
    pval - dval equals the Frank-Wolfe gap minus <p, r>, so a gap below a
    fraction of eps_gap * (1 + |pval|) leaves the relative gap test to the
    feasibility residual.
    """
    return max(FW_TRIGGER_FACTOR * opts.err_tol_fista, FW_GAP_FRACTION * opts.eps_gap * (1.0 + abs(pval)))


def mapping_norm(Y: np.ndarray, grad: np.ndarray, L: float, tau: float) -> float:
    """Norm of the projected-gradient mapping L (Y - P(Y - grad / L))."""
    return float(L * np.linalg.norm(Y - project_ball(Y - grad / L, tau)))


@dataclass
class DescentReport:
    iterations: int
    cycles: int
    L: float
    mapping_norm: float
    value: float
    converged: bool


def adap_descent(inst: SdpInstance, Y: np.ndarray, p: np.ndarray, beta: float, opts: SolverOptions,
                 target: Optional[float] = None, stats: Optional[SolveStats] = None,
                 deadline: Optional[float] = None) -> Tuple[np.ndarray, DescentReport]:
    """
    Adaptive accelerated projected gradient on the AL objective over the ball.

    The step 1/L comes from backtracking: the first trial uses
    max(L0_fista, 1/lam0_aipp), later iterations start from
    max(L0_fista, mu_fista * L) and multiply by L_inc_fista until the
    quadratic upper model holds. At extrapolated points the model test
    allows a slack of chi_fista * |f|. A trial that raises the objective
    above the last accepted value restarts the momentum and opens a new
    cycle; at most maxiter_aipp cycles run.

    Args:
        inst: Instance (normally the scaled one)
        Y: Starting factor
        p: Lagrange multipliers
        beta: Penalty parameter
        opts: Solver options
        target: Outer stationarity target; defaults to inner_target(beta)
        stats: Counters to update
        deadline: perf_counter() value after which the call returns

    Returns:
        Tuple of (last accepted factor, DescentReport)
    """
    if not beta > 0:
        raise ValueError(f"Penalty parameter must be positive, got {beta}")
    stats = stats if stats is not None else SolveStats()
    stats.fista_calls += 1
    tau = inst.require_trace_bound()
    p = np.asarray(p, dtype=float)
    if target is None:
        target = inner_target(beta, opts)
    threshold = max(opts.err_tol_fista, opts.sigma_fista * target)

    Y = project_ball(as_factor(Y), tau)
    f_y, g_y, _ = al_value_and_gradient(inst, Y, p, beta)
    L = max(opts.L0_fista, 1.0 / opts.lam0_aipp)
    current = mapping_norm(Y, g_y, L, tau)
    report = DescentReport(0, 1, L, current, f_y, current <= threshold)
    if report.converged:
        return Y, report

    Y_prev = Y
    Z, f_z, g_z = Y, f_y, g_y
    extrapolated = False
    t = 1.0
    while report.iterations < opts.maxiter_fista:
        if deadline is not None and time.perf_counter() > deadline:
            break
        L_try = L if report.iterations == 0 else max(opts.L0_fista, opts.mu_fista * L)
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            Y_new = project_ball(Z - g_z / L_try, tau)
            f_new, g_new, _ = al_value_and_gradient(inst, Y_new, p, beta)
            D = Y_new - Z
            model = f_z + float(np.sum(g_z * D)) + 0.5 * L_try * float(np.sum(D * D))
            slack = opts.chi_fista * abs(f_z) if extrapolated else 0.0
            if f_new <= model + slack + 1e-14 * max(1.0, abs(f_z)):
                accepted = True
                break
            L_try *= opts.L_inc_fista
        if not accepted:
            logger.warning("Descent backtracking exceeded %d trials (L = %.3e); stopping this call", MAX_BACKTRACKS, L_try)
            break
        logger.debug("descent iteration %d: L %.3e, f %.12g", report.iterations, L_try, f_new)
        L = L_try
        report.iterations += 1
        stats.acg_iterations += 1

        if f_new > f_y:
            if not extrapolated:
                break
            report.cycles += 1
            if report.cycles > opts.maxiter_aipp:
                report.cycles -= 1
                break
            t = 1.0
            Z, f_z, g_z = Y, f_y, g_y
            extrapolated = False
            continue

        Y_prev, Y = Y, Y_new
        f_y, g_y = f_new, g_new
        report.mapping_norm = mapping_norm(Y, g_y, L, tau)
        if report.mapping_norm <= threshold:
            report.converged = True
            break

        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        momentum = (t - 1.0) / t_next
        t = t_next
        if momentum > 0:
            Z = Y + momentum * (Y - Y_prev)
            f_z, g_z, _ = al_value_and_gradient(inst, Z, p, beta)
            extrapolated = True
        else:
            Z, f_z, g_z = Y, f_y, g_y
            extrapolated = False

    report.L = L
    report.value = f_y
    return Y, report


@dataclass
class FwOutcome:
    Y: np.ndarray
    took: bool
    fw_gap: float
    alpha: float = 0.0
    eig_failed: bool = False
    vec: Optional[np.ndarray] = None


def fw_step(inst: SdpInstance, Y: np.ndarray, p: np.ndarray, beta: float, opts: SolverOptions,
            stats: Optional[SolveStats] = None, v0: Optional[np.ndarray] = None) -> FwOutcome:
    """
    One Frank-Wolfe step on the AL objective over the spectraplex.

    With S = C + A*(p + beta r) the gradient in X, the linear minimizer is
    tau v v^T for the minimum eigenvector v when lambda_min(S) < 0 and zero
    otherwise. The step length is the exact minimizer of the AL objective,
    which is quadratic along the segment. A step is taken only when the
    Frank-Wolfe gap exceeds fw_trigger(C . X).
    """
    stats = stats if stats is not None else SolveStats()
    tau = inst.require_trace_bound()
    Y = as_factor(Y)
    p = np.asarray(p, dtype=float)
    _, _, r = al_value_and_gradient(inst, Y, p, beta)
    S = slack_operator(inst, p + beta * r)

    eig = min_eigpair(SymOperator(inst.n, S.matvec), tol=opts.eps_eig, maxit=opts.maxiter_eig,
                      seed=opts.seed, v0=v0)
    stats.eig_calls += 1
    stats.matvecs += eig.matvecs
    if not eig.converged and eig.residual > opts.err_tol_eig * max(1.0, abs(eig.lam)):
        logger.warning("Eigensolver did not converge in the Frank-Wolfe check (residual %.3e); skipping the step",
                       eig.residual)
        return FwOutcome(Y, False, float("nan"), eig_failed=True)

    lam, v = eig.lam, eig.vec
    SX = float(np.sum(Y * S.matmat(Y)))
    fw_gap = SX - tau * min(lam, 0.0)
    if not fw_gap > fw_trigger(primal_value(inst, Y), opts):
        return FwOutcome(Y, False, fw_gap, vec=v)

    AX = r + inst.b
    AV = tau * apply_A(inst, v) if lam < 0 else np.zeros(inst.m)
    d_A = AV - AX
    curvature = beta * float(np.dot(d_A, d_A))
    alpha = 1.0 if curvature <= 0 else min(1.0, max(0.0, fw_gap / curvature))

    if lam < 0:
        column = math.sqrt(alpha * tau) * v.reshape(-1, 1)
        if alpha >= 1.0:
            Y_new = column
        else:
            Y_new = np.hstack([math.sqrt(1.0 - alpha) * Y, column])
    else:
        Y_new = math.sqrt(1.0 - alpha) * Y
    stats.fw_calls += 1
    logger.info("Frank-Wolfe step: gap %.3e, lambda_min %.6e, alpha %.4f, rank %d -> %d",
                fw_gap, lam, alpha, Y.shape[1], Y_new.shape[1])
    return FwOutcome(Y_new, True, fw_gap, alpha, vec=v)


@dataclass
class HlrOutcome:
    Y: np.ndarray
    steps: str
    fw_gap: float
    fw_skipped: bool = False
    vec: Optional[np.ndarray] = None


def hlr_subproblem(inst: SdpInstance, Y: np.ndarray, p: np.ndarray, beta: float, opts: SolverOptions,
                   stats: Optional[SolveStats] = None, deadline: Optional[float] = None,
                   v0: Optional[np.ndarray] = None) -> HlrOutcome:
    """
    Up to maxiter_hlr rounds of descent followed by a Frank-Wolfe check.

    Returns:
        HlrOutcome with the new factor and the step tags in execution order
    """
    stats = stats if stats is not None else SolveStats()
    target = inner_target(beta, opts)
    steps = ""
    fw_gap = float("nan")
    skipped = False
    vec = v0
    Y = as_factor(Y)
    for _ in range(opts.maxiter_hlr):
        Y, report = adap_descent(inst, Y, p, beta, opts, target=target, stats=stats, deadline=deadline)
        steps += "A"
        logger.info("descent call: %d iterations, %d cycles, L %.3e, mapping norm %.3e, converged %s",
                    report.iterations, report.cycles, report.L, report.mapping_norm, report.converged)
        if deadline is not None and time.perf_counter() > deadline:
            break
        outcome = fw_step(inst, Y, p, beta, opts, stats=stats, v0=vec)
        fw_gap = outcome.fw_gap
        skipped = skipped or outcome.eig_failed
        if outcome.vec is not None:
            vec = outcome.vec
        if not outcome.took:
            break
        Y = outcome.Y
        steps += "F"
    return HlrOutcome(Y, steps, fw_gap, skipped, vec)
