"""
Scaling Algebra

The solver works on the scaled problem

    C~ = tau_c C,  A~ = tau_a A,  b~ = (tau_a / tau) b,  Tr(X~) <= 1

with X = tau X~. Multipliers, objective values and the penalty map back by
the relations below; every function here is a pure transformation.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.hybrid import DualPoint, FactoredPrimal, SdpInstance, as_factor


@dataclass(frozen=True)
class ScaleParams:
    """tau_a (scale_A), tau_c (scale_C) and the original trace bound tau."""
    tau_a: float
    tau_c: float
    tau: float

    def __post_init__(self):
        for name in ("tau_a", "tau_c", "tau"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"Scale parameter {name} must be positive and finite, got {value}")

    @classmethod
    def from_options(cls, inst_tau: float, opts) -> "ScaleParams":
        """Take scale_A / scale_C from SolverOptions (or any object carrying them)."""
        return cls(tau_a=float(opts.scale_A), tau_c=float(opts.scale_C), tau=float(inst_tau))


def scale_instance(inst: SdpInstance, sp: ScaleParams) -> SdpInstance:
    """Instance with trace bound 1; low-rank parts are scaled through D only."""
    mats = [inst.C.scaled(sp.tau_c)] + [mat.scaled(sp.tau_a) for mat in inst.mats[1:]]
    b = (sp.tau_a / sp.tau) * np.asarray(inst.b)
    return SdpInstance(inst.m, inst.n, b, 1.0, mats)


def scale_primal(Y, sp: ScaleParams) -> FactoredPrimal:
    """Y~ = Y / sqrt(tau), used for warm starts."""
    return FactoredPrimal(as_factor(Y) / np.sqrt(sp.tau))


def unscale_primal(Yt, sp: ScaleParams) -> FactoredPrimal:
    """Y = sqrt(tau) Y~, so that X = tau X~."""
    return FactoredPrimal(np.sqrt(sp.tau) * as_factor(Yt))


def unscale_dual(pt: np.ndarray, thetat: float, sp: ScaleParams) -> DualPoint:
    """p = (tau_a / tau_c) p~ and theta = theta~ / tau_c."""
    pt = np.asarray(pt, dtype=float)
    return DualPoint((sp.tau_a / sp.tau_c) * pt, thetat / sp.tau_c)


def unscale_value(vt: float, sp: ScaleParams) -> float:
    return (sp.tau / sp.tau_c) * vt


def scale_beta(beta: float, sp: ScaleParams) -> float:
    return (sp.tau * sp.tau_c / sp.tau_a ** 2) * beta


def unscale_beta(beta_t: float, sp: ScaleParams) -> float:
    return beta_t * sp.tau_a ** 2 / (sp.tau * sp.tau_c)


@dataclass
class UnscaledResult:
    """Solution of the original problem recovered from a scaled solve."""
    Y: FactoredPrimal
    dual: DualPoint
    pval: float
    dval: Optional[float]
    beta: float


def unscale_result(result, sp: ScaleParams) -> UnscaledResult:
    """Map a SolveResult of the scaled problem back to the original data."""
    dual = unscale_dual(result.p, result.theta, sp)
    dval = None if result.dval is None else unscale_value(result.dval, sp)
    return UnscaledResult(
        Y=unscale_primal(result.Y, sp),
        dual=dual,
        pval=unscale_value(result.pval, sp),
        dval=dval,
        beta=unscale_beta(result.beta, sp),
    )
