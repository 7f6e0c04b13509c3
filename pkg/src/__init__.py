"""
HSLR-SDP: Low-Rank First-Order Semidefinite Programming Solver

Augmented Lagrangian solver over factored iterates X = YY^T with hybrid
low-rank inner steps, plus readers and writers for the Hybrid Sparse
Low-Rank (HSLR) and sparse SDPA problem formats.
"""

__version__ = "1.0.0"
__author__ = "HSLR-SDP Team"
