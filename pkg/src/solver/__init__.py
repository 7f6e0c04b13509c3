"""
Low-Rank Augmented Lagrangian Solver

Outer multiplier / penalty loop over factored iterates X = YY^T with an
accelerated descent + Frank-Wolfe inner solver.
"""

from .options import SolverOptions
from .records import IterRecord, SolveResult, SolveStats, SolveStatus
from .inner import adap_descent, fw_step, fw_trigger, hlr_subproblem, inner_target, project_ball, DescentReport, FwOutcome, HlrOutcome
from .dual import compute_theta, check_termination, relative_gap, TerminationCheck
from .outer import solve, solve_original, update_beta, truncate_rank, default_initial

__all__ = [
    'SolverOptions', 'IterRecord', 'SolveResult', 'SolveStats', 'SolveStatus',
    'adap_descent', 'fw_step', 'fw_trigger', 'hlr_subproblem', 'inner_target', 'project_ball',
    'DescentReport', 'FwOutcome', 'HlrOutcome',
    'compute_theta', 'check_termination', 'relative_gap', 'TerminationCheck',
    'solve', 'solve_original', 'update_beta', 'truncate_rank', 'default_initial',
]
