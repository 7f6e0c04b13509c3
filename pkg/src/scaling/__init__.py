"""
Problem Scaling

Maps an instance to trace bound 1 with uniform constraint / cost scale
factors and maps solutions, values and penalties back.
"""

from .scaling import (
    ScaleParams,
    UnscaledResult,
    scale_instance,
    scale_primal,
    unscale_primal,
    unscale_dual,
    unscale_value,
    scale_beta,
    unscale_beta,
    unscale_result,
)

__all__ = [
    'ScaleParams', 'UnscaledResult', 'scale_instance', 'scale_primal', 'unscale_primal', 'unscale_dual',
    'unscale_value', 'scale_beta', 'unscale_beta', 'unscale_result',
]
