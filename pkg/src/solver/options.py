"""Typed, validated solver parameters."""

import dataclasses
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from formats.errors import OptionError


@dataclass(frozen=True)
class SolverOptions:
    """Every numeric knob of the solver, with compiled defaults. Immutable; use replace()."""
    # Accelerated descent
    maxiter_fista: int = 10000
    mu_fista: float = 0.5
    chi_fista: float = 1e-4
    L0_fista: float = 1.0
    L_inc_fista: float = 2.0
    sigma_fista: float = 0.3
    err_tol_fista: float = 1e-8
    # Proximal cycles
    maxiter_aipp: int = 5
    lam0_aipp: float = 0.1
    # Hybrid low-rank rounds and outer loop
    maxiter_hlr: int = 10
    maxiter_hallar: int = 10000
    # Stopping criteria
    eps_pfeas: float = 1e-5
    eps_gap: float = 1e-5
    # Penalty
    beta0: float = 10.0
    beta_inc: float = 1.1
    beta_min: float = 10.0
    beta_max: float = 1e11
    # Scaling
    scale_A: float = 1.0
    scale_C: float = 1.0
    trace_bound: Optional[float] = None
    # Eigensolver
    eps_eig: float = 1e-8
    err_tol_eig: float = 1e-6
    maxiter_eig: int = 1000
    # Miscellaneous
    rank_tol: float = 1e-7
    verbosity: int = 1
    time_limit: float = 3600.0
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self):
        """
        Raises:
            OptionError: When a value or a combination of values is invalid
        """
        for name in ("maxiter_fista", "maxiter_aipp", "maxiter_hlr", "maxiter_hallar", "maxiter_eig"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise OptionError(f"{name} must be a positive integer, got {value}")
            object.__setattr__(self, name, int(value))
        for name in ("mu_fista", "chi_fista", "L0_fista", "L_inc_fista", "err_tol_fista", "lam0_aipp",
                     "eps_pfeas", "eps_gap", "beta0", "beta_min", "beta_max", "scale_A", "scale_C",
                     "eps_eig", "err_tol_eig", "rank_tol", "time_limit"):
            value = getattr(self, name)
            if not value > 0:
                raise OptionError(f"{name} must be positive, got {value}")
        if not 0 < self.sigma_fista < 1:
            raise OptionError(f"sigma_fista must lie in (0, 1), got {self.sigma_fista}")
        if self.L_inc_fista <= 1:
            raise OptionError(f"L_inc_fista must exceed 1, got {self.L_inc_fista}")
        if self.beta_inc < 1:
            raise OptionError(f"beta_inc must be at least 1, got {self.beta_inc}")
        if not self.beta_min <= self.beta0 <= self.beta_max:
            raise OptionError(
                f"Penalty bounds must satisfy beta_min <= beta0 <= beta_max, got {self.beta_min}, {self.beta0}, {self.beta_max}")
        if self.trace_bound is not None and not self.trace_bound > 0:
            raise OptionError(f"trace_bound must be positive, got {self.trace_bound}")
        if not 0 <= self.verbosity <= 3:
            raise OptionError(f"verbosity must be between 0 and 3, got {self.verbosity}")
        if self.seed < 0:
            raise OptionError(f"seed must be nonnegative, got {self.seed}")

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "SolverOptions":
        """Pick the solver keys out of a larger option mapping."""
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in values.items() if k in names and (v is not None or k == "trace_bound")})

    def replace(self, **changes) -> "SolverOptions":
        return dataclasses.replace(self, **changes)
