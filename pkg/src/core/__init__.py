"""
Hybrid Sparse + Low-Rank Core

Domain types for SDP data in HSLR form and the kernels that work on the
factored primal X = YY^T without materializing dense n x n matrices.
"""

import logging

from .hybrid import (
    SparseSym,
    LowRankFactor,
    HybridMatrix,
    SdpInstance,
    FactoredPrimal,
    DualPoint,
    as_factor,
)
from .operators import (
    hm_quadform,
    hm_matvec,
    hm_dense,
    apply_A,
    apply_Astar,
    apply_Astar_vec,
    al_objective,
    al_gradient,
    al_value_and_gradient,
    primal_value,
    dual_value,
    feasibility_residual,
    slack_operator,
)

logging.getLogger("hslr_sdp").addHandler(logging.NullHandler())

__all__ = [
    'SparseSym', 'LowRankFactor', 'HybridMatrix', 'SdpInstance', 'FactoredPrimal', 'DualPoint', 'as_factor',
    'hm_quadform', 'hm_matvec', 'hm_dense', 'apply_A', 'apply_Astar', 'apply_Astar_vec',
    'al_objective', 'al_gradient', 'al_value_and_gradient', 'primal_value', 'dual_value',
    'feasibility_residual', 'slack_operator',
]
