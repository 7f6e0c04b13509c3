"""
Command-Line Interface

Argument parsing and option precedence, the solve pipeline, the console
report, the built-in example run and the generator subcommands.
"""

from .console import render_header, render_problem, render_iteration, render_final, format_report_float
from .selftest import run_tests, SelfTestCase, DEFAULT_CASES
from .main import (
    Invocation,
    UsageError,
    parse_args,
    run_main,
    gen_main,
    derive_output_paths,
    resolve_output_paths,
    configure_logging,
)

__all__ = [
    'render_header', 'render_problem', 'render_iteration', 'render_final', 'format_report_float',
    'run_tests', 'SelfTestCase', 'DEFAULT_CASES',
    'Invocation', 'UsageError', 'parse_args', 'run_main', 'gen_main', 'derive_output_paths',
    'resolve_output_paths', 'configure_logging',
]
