"""
Problem and Solution File Formats

HSLR and sparse SDPA readers, the HSLR writer, the option system with its
command line > config file > defaults precedence, and the primal / dual
CSV files.
"""

from .errors import FormatError, OptionError
from .hslr import parse_hslr, write_hslr, format_hslr_float, looks_like_hslr
from .sdpa import parse_sdpa
from .options import (
    OptionSet,
    OPTION_SPECS,
    coerce_value,
    parse_config,
    merge_options,
    load_default_options,
    option_descriptions,
)
from .solution import (
    format_csv_field,
    write_primal,
    write_dual,
    read_primal,
    read_dual,
    read_warm_start,
    detect_format,
    read_instance,
)

__all__ = [
    'FormatError', 'OptionError',
    'parse_hslr', 'write_hslr', 'format_hslr_float', 'looks_like_hslr', 'parse_sdpa',
    'OptionSet', 'OPTION_SPECS', 'coerce_value', 'parse_config', 'merge_options', 'load_default_options',
    'option_descriptions',
    'format_csv_field', 'write_primal', 'write_dual', 'read_primal', 'read_dual', 'read_warm_start',
    'detect_format', 'read_instance',
]
