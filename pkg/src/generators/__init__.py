"""
Instance Generators

Matrix completion and Lovasz theta (stable set) families, plus the simple
text inputs that feed them.
"""

from .instances import (
    MatCompSpec,
    GraphSpec,
    gen_matcomp,
    gen_stableset,
    gen_cycle,
    gen_random_matcomp,
    matcomp_trace_bound,
    read_edge_list,
    read_observations,
)

__all__ = [
    'MatCompSpec', 'GraphSpec', 'gen_matcomp', 'gen_stableset', 'gen_cycle', 'gen_random_matcomp',
    'matcomp_trace_bound', 'read_edge_list', 'read_observations',
]
