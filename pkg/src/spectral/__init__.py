"""
Spectral Routines

Minimum eigenpairs of matrix-free symmetric operators.
"""

from .lanczos import SymOperator, EigPair, min_eigpair

__all__ = ['SymOperator', 'EigPair', 'min_eigpair']
