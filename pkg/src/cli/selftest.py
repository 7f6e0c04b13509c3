"""
Built-in Example Instances

`--run_tests` solves three small shipped problems with known optimal
values and reports pass / fail per case.
"""

import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

from formats.hslr import parse_hslr
from solver.options import SolverOptions
from solver.outer import solve_original
from solver.records import SolveStatus

SIMPLE_EXAMPLE_HSLR = """\
# m n
3 4
# b vector
2.0 4.0 7.0
# Trace bound
5.0

# Matrix 0: C = I + ee^T
0 SP
1 1 1.0
2 2 1.0
3 3 1.0
4 4 1.0
0 LR
1.0 1.0 1.0 1.0 ; 1.0

# Matrix 1: 0.5 * I
1 SP
1 1 0.5
2 2 0.5
3 3 0.5
4 4 0.5

# Matrix 2: ee^T
2 LR
1.0 1.0 1.0 1.0 ; 1.0

# Matrix 3: A3_sp + A3_lr
3 SP
1 3  0.7
2 2  1.0
2 4 -0.5
4 4 -1.0
3 LR
1.0 2.0 1.0 2.0 ;  1.0   -0.5
2.0 1.0 1.0 1.0 ; -0.5   -2.0
"""

MATCOMP_HSLR = """\
# m n
2 4
# b vector
5.0 3.0
# Trace bound
16.50

# Matrix 0: C = 0.5*I
0 SP
1 1 0.5
2 2 0.5
3 3 0.5
4 4 0.5

# Matrix 1: A1_sp
1 SP
1 3 0.5

# Matrix 2: A2_sp
2 SP
2 4 0.5
"""

STABLESET_C4_HSLR = """\
# m n
4 4
# b vector
0.0 0.0 0.0 0.0
# Trace bound
1.0

# Matrix 0: C = -J (Low Rank)
0 LR
1.0 1.0 1.0 1.0 ; -1.0

# Matrix 1: Edge (1,2)
1 SP
1 2 0.5

# Matrix 2: Edge (2,3)
2 SP
2 3 0.5

# Matrix 3: Edge (3,4)
3 SP
3 4 0.5

# Matrix 4: Edge (1,4)
4 SP
1 4 0.5
"""


@dataclass
class SelfTestCase:
    name: str
    text: str
    expected: float
    tolerance: float


DEFAULT_CASES: List[SelfTestCase] = [
    SelfTestCase("simple 4x4 hybrid example", SIMPLE_EXAMPLE_HSLR, 8.0, 1e-3),
    SelfTestCase("stable set on C4 (Lovasz theta)", STABLESET_C4_HSLR, -2.0, 1e-3),
    SelfTestCase("2x2 matrix completion", MATCOMP_HSLR, 8.0, 1e-2),
]


def run_tests(cases: Optional[Sequence[SelfTestCase]] = None, verbosity: int = 1,
              opts: Optional[SolverOptions] = None, out: Callable[[str], None] = print) -> int:
    """
    Solve every case and compare the unscaled optimal value.

    Returns:
        0 when every case reaches Optimal within its tolerance, 1 otherwise
    """
    cases = DEFAULT_CASES if cases is None else cases
    opts = opts if opts is not None else SolverOptions(time_limit=60.0)
    failures = 0
    for case in cases:
        started = time.perf_counter()
        try:
            inst = parse_hslr(case.text, case.name)
            result, _, unscaled = solve_original(inst, opts)
            error = abs(unscaled.pval - case.expected)
            passed = result.status is SolveStatus.OPTIMAL and error <= case.tolerance
            detail = f"status {result.status.value}, value {unscaled.pval:.6f} (expected {case.expected})"
        except Exception as exc:
            passed = False
            detail = f"{type(exc).__name__}: {exc}"
        failures += 0 if passed else 1
        if verbosity >= 1:
            mark = "PASS" if passed else "FAIL"
            out(f"[{mark}] {case.name}: {detail} in {time.perf_counter() - started:.2f} s")
    if verbosity >= 1:
        out(f"{len(cases) - failures}/{len(cases)} example instances solved correctly")
    return 0 if failures == 0 else 1
