"""
Solver Progress and Result Types
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from core.hybrid import FactoredPrimal


class SolveStatus(Enum):
    OPTIMAL = "Optimal"
    ITERATION_LIMIT = "IterationLimit"
    TIME_LIMIT = "TimeLimit"
    NUMERICAL_ERROR = "NumericalError"

    @property
    def exit_code(self) -> int:
        return 0 if self is SolveStatus.OPTIMAL else 2


@dataclass
class IterRecord:
    """One row of the iteration table."""
    iteration: int
    rank: int
    gap: Optional[float]
    feas: float
    pval: float
    dval: Optional[float]
    beta: float
    steps: str
    fw_skipped: bool = False

    def __post_init__(self):
        if not self.steps:
            raise ValueError("An iteration record needs at least one step tag")
        if set(self.steps) - {"A", "F"}:
            raise ValueError(f"Step tags are drawn from 'A' and 'F', got '{self.steps}'")


@dataclass
class SolveStats:
    """Work counters reported in the final block."""
    fista_calls: int = 0
    acg_iterations: int = 0
    fw_calls: int = 0
    eig_calls: int = 0
    matvecs: int = 0


@dataclass
class SolveResult:
    """Final iterate of a solve on the (scaled) instance it was given."""
    Y: FactoredPrimal
    p: np.ndarray
    theta: float
    status: SolveStatus
    stats: SolveStats
    records: List[IterRecord] = field(default_factory=list)
    elapsed: float = 0.0
    pval: float = 0.0
    dval: Optional[float] = None
    gap: Optional[float] = None
    feas: float = 0.0
    beta: float = 0.0
    diagnostic: str = ""

    @property
    def rank(self) -> int:
        return self.Y.rank

    @property
    def iterations(self) -> int:
        return len(self.records)
