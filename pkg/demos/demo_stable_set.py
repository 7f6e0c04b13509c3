#!/usr/bin/env python3
"""
HSLR SDP Solver - Stable Set Demonstration

Solves the Lovasz theta relaxation on cycles C_n and compares the optimal
value with the closed form n cos(pi/n) / (1 + cos(pi/n)) for odd n and
n / 2 for even n.
"""

import math
import os
import sys
import time

# Add src directory to path for imports
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from generators.instances import gen_cycle, gen_stableset
from solver.options import SolverOptions
from solver.outer import solve_original


def cycle_theta(n: int) -> float:
    if n % 2 == 0:
        return n / 2.0
    c = math.cos(math.pi / n)
    return n * c / (1.0 + c)


def demo_stable_set(sizes=(4, 5, 7, 12, 25)):
    """Solve theta(C_n) for a few cycle lengths and print a summary table."""

    print("=" * 60)
    print("HSLR SDP SOLVER - STABLE SET DEMONSTRATION")
    print("=" * 60)

    opts = SolverOptions(time_limit=120.0)
    rows = []
    for n in sizes:
        inst = gen_stableset(gen_cycle(n))
        start = time.time()
        result, _, unscaled = solve_original(inst, opts)
        elapsed = time.time() - start
        expected = cycle_theta(n)
        rows.append((n, result.status.value, -unscaled.pval, expected, result.rank, elapsed))
        mark = "✓" if abs(-unscaled.pval - expected) <= 1e-3 * max(1.0, expected) else "✗"
        print(f"{mark} C_{n}: theta = {-unscaled.pval:.6f} (closed form {expected:.6f}), "
              f"rank {result.rank}, {result.iterations} iterations")

    print("\n" + "-" * 60)
    print(f"{'n':>4} {'status':>12} {'theta':>12} {'expected':>12} {'rank':>5} {'time':>8}")
    for n, status, value, expected, rank, elapsed in rows:
        print(f"{n:>4} {status:>12} {value:>12.6f} {expected:>12.6f} {rank:>5} {elapsed:>7.2f}s")
    print("=" * 60)


if __name__ == "__main__":
    demo_stable_set()
