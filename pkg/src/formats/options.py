"""
Option System

Every solver and I/O option, its type, compiled default and category, plus
the three option sources (command line, configuration file, defaults) and
the precedence merge between them. Config-file keys are the long flag names
without leading dashes.
"""

import json
import logging
import math
import os
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple

from formats.errors import FormatError, OptionError

logger = logging.getLogger("hslr_sdp.formats")

PROVENANCE_CLI = "cli"
PROVENANCE_CONFIG = "config"
PROVENANCE_DEFAULT = "default"

DEFAULTS_FILE = os.path.join(os.path.dirname(__file__), '..', '..', 'configs', 'solver_defaults.json')


@dataclass(frozen=True)
class OptionSpec:
    """Static description of one option."""
    name: str
    kind: str           # 'int', 'float', 'str', 'bool'
    category: str
    positive: bool = False
    nullable: bool = False
    choices: Tuple[str, ...] = ()


OPTION_SPECS: Dict[str, OptionSpec] = {spec.name: spec for spec in [
    # Input / Output
    OptionSpec("input_path", "str", "io"),
    OptionSpec("primal_output_path", "str", "io"),
    OptionSpec("dual_output_path", "str", "io"),
    OptionSpec("output_path", "str", "io"),
    OptionSpec("config_path", "str", "io"),
    OptionSpec("initial_solution", "str", "io"),
    OptionSpec("run_tests", "bool", "io"),
    OptionSpec("format", "str", "io", choices=("auto", "hslr", "sdpa")),
    # FISTA
    OptionSpec("maxiter_fista", "int", "fista", positive=True),
    OptionSpec("mu_fista", "float", "fista", positive=True),
    OptionSpec("chi_fista", "float", "fista", positive=True),
    OptionSpec("L0_fista", "float", "fista", positive=True),
    OptionSpec("L_inc_fista", "float", "fista", positive=True),
    OptionSpec("sigma_fista", "float", "fista", positive=True),
    OptionSpec("err_tol_fista", "float", "fista", positive=True),
    # AIPP
    OptionSpec("maxiter_aipp", "int", "aipp", positive=True),
    OptionSpec("lam0_aipp", "float", "aipp", positive=True),
    # Hybrid low-rank and outer loop
    OptionSpec("maxiter_hlr", "int", "hlr", positive=True),
    OptionSpec("maxiter_hallar", "int", "hlr", positive=True),
    # Stopping criteria
    OptionSpec("eps_pfeas", "float", "stopping", positive=True),
    OptionSpec("eps_gap", "float", "stopping", positive=True),
    # Penalty
    OptionSpec("beta0", "float", "penalty", positive=True),
    OptionSpec("beta_inc", "float", "penalty", positive=True),
    OptionSpec("beta_min", "float", "penalty", positive=True),
    OptionSpec("beta_max", "float", "penalty", positive=True),
    # Scaling
    OptionSpec("scale_A", "float", "scaling", positive=True),
    OptionSpec("scale_C", "float", "scaling", positive=True),
    OptionSpec("trace_bound", "float", "scaling", positive=True, nullable=True),
    # Eigensolver
    OptionSpec("eps_eig", "float", "eigen", positive=True),
    OptionSpec("err_tol_eig", "float", "eigen", positive=True),
    OptionSpec("maxiter_eig", "int", "eigen", positive=True),
    # Miscellaneous
    OptionSpec("rank_tol", "float", "misc", positive=True),
    OptionSpec("verbosity", "int", "misc"),
    OptionSpec("time_limit", "float", "misc", positive=True),
    OptionSpec("seed", "int", "misc"),
]}


def _builtin_defaults() -> Dict[str, Dict[str, Any]]:
    """Compiled defaults used when configs/solver_defaults.json is unavailable."""
    return {
        "input_path": {"value": "", "description": "Path to the input file (HSLR, or SDPA .dat-s)"},
        "primal_output_path": {"value": "primal_out.txt", "description": "Output file for the primal factor Y"},
        "dual_output_path": {"value": "dual_out.txt", "description": "Output file for (theta, p)"},
        "output_path": {"value": "", "description": "Base path; derives <stem>_primal and <stem>_dual"},
        "config_path": {"value": "", "description": "Configuration file to load options from"},
        "initial_solution": {"value": "", "description": "CSV with a dense warm-start factor Y0"},
        "run_tests": {"value": False, "description": "Run the built-in example instances"},
        "format": {"value": "auto", "description": "Input format: auto, hslr or sdpa"},
        "maxiter_fista": {"value": 10000, "description": "Maximum number of accelerated descent iterations"},
        "mu_fista": {"value": 0.5, "description": "Lipschitz estimate decrease factor between iterations"},
        "chi_fista": {"value": 1e-4, "description": "Relative slack in the descent test at extrapolated points"},
        "L0_fista": {"value": 1.0, "description": "Initial Lipschitz constant"},
        "L_inc_fista": {"value": 2.0, "description": "Lipschitz constant increment factor"},
        "sigma_fista": {"value": 0.3, "description": "Inner stationarity fraction of the outer target"},
        "err_tol_fista": {"value": 1e-8, "description": "Absolute inner stationarity tolerance"},
        "maxiter_aipp": {"value": 5, "description": "Maximum proximal restart cycles per descent call"},
        "lam0_aipp": {"value": 0.1, "description": "Initial proximal step length"},
        "maxiter_hlr": {"value": 10, "description": "Maximum descent + Frank-Wolfe rounds per outer iteration"},
        "maxiter_hallar": {"value": 10000, "description": "Maximum number of outer iterations"},
        "eps_pfeas": {"value": 1e-5, "description": "Primal feasibility tolerance"},
        "eps_gap": {"value": 1e-5, "description": "Relative duality gap tolerance"},
        "beta0": {"value": 10.0, "description": "Initial penalty parameter"},
        "beta_inc": {"value": 1.1, "description": "Penalty increment factor"},
        "beta_min": {"value": 10.0, "description": "Minimum penalty parameter"},
        "beta_max": {"value": 1e11, "description": "Maximum penalty parameter"},
        "scale_A": {"value": 1.0, "description": "Scaling factor for the constraint matrices"},
        "scale_C": {"value": 1.0, "description": "Scaling factor for the cost matrix"},
        "trace_bound": {"value": None, "description": "Trace bound; required for SDPA input"},
        "eps_eig": {"value": 1e-8, "description": "Relative Ritz residual tolerance of the eigensolver"},
        "err_tol_eig": {"value": 1e-6, "description": "Residual accepted from an unconverged eigensolve"},
        "maxiter_eig": {"value": 1000, "description": "Matrix-vector product budget per eigensolve"},
        "rank_tol": {"value": 1e-7, "description": "Relative singular value cutoff for rank truncation"},
        "verbosity": {"value": 1, "description": "0: silent, 1: summary, 2: detailed, 3: debug"},
        "time_limit": {"value": 3600.0, "description": "Time limit in seconds"},
        "seed": {"value": 0, "description": "Seed for every random choice of the solver"},
    }


def coerce_value(key: str, raw: Any) -> Any:
    """
    Convert a raw (usually string) value to the option's type and check its range.

    Raises:
        OptionError: Unknown key, type mismatch or out-of-range value
    """
    spec = OPTION_SPECS.get(key)
    if spec is None:
        raise OptionError(f"Unknown option '{key}'")
    if raw is None or (spec.nullable and isinstance(raw, str) and raw.strip().lower() in ("", "none")):
        if spec.nullable:
            return None
        if spec.kind == "str":
            return ""
        raise OptionError(f"Option '{key}' requires a value")

    if spec.kind == "str":
        value = str(raw).strip()
        if spec.choices and value not in spec.choices:
            raise OptionError(f"Option '{key}' must be one of {', '.join(spec.choices)}, got '{value}'")
        return value

    if spec.kind == "bool":
        if isinstance(raw, bool):
            return raw
        text = str(raw).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise OptionError(f"Option '{key}' expects true/false, got '{raw}'")

    try:
        number = float(raw)
    except (TypeError, ValueError):
        raise OptionError(f"Option '{key}' expects a number, got '{raw}'") from None
    if not math.isfinite(number):
        raise OptionError(f"Option '{key}' must be finite, got '{raw}'")
    if spec.kind == "int":
        if number != int(number):
            raise OptionError(f"Option '{key}' expects an integer, got '{raw}'")
        number = int(number)
    if spec.positive and number <= 0:
        raise OptionError(f"Option '{key}' must be positive, got '{raw}'")
    if key == "verbosity" and not 0 <= number <= 3:
        raise OptionError(f"Option 'verbosity' must be between 0 and 3, got '{raw}'")
    if key == "seed" and number < 0:
        raise OptionError(f"Option 'seed' must be nonnegative, got '{raw}'")
    return number


class OptionSet:
    """
    A partial assignment of options, each value tagged with where it came from.
    """

    def __init__(self, values: Optional[Dict[str, Any]] = None, provenance: str = PROVENANCE_CLI):
        self._values: Dict[str, Any] = {}
        self._provenance: Dict[str, str] = {}
        for key, value in (values or {}).items():
            self.set(key, value, provenance)

    def set(self, key: str, value: Any, provenance: str):
        if key not in OPTION_SPECS:
            raise OptionError(f"Unknown option '{key}'")
        self._values[key] = value
        self._provenance[key] = provenance

    def get(self, key: str, default: Any = None) -> Any:
        return self._values.get(key, default)

    def provenance(self, key: str) -> Optional[str]:
        return self._provenance.get(key)

    def __contains__(self, key: str) -> bool:
        return key in self._values

    def __getitem__(self, key: str) -> Any:
        return self._values[key]

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def items(self) -> List[Tuple[str, Any, str]]:
        """(key, value, provenance) in option-table order."""
        return [(k, self._values[k], self._provenance[k]) for k in OPTION_SPECS if k in self._values]

    def to_solver_options(self):
        """Build validated SolverOptions from the solver-relevant keys."""
        from solver.options import SolverOptions
        return SolverOptions.from_mapping(self._values)


def parse_config(text: str, source: str = "") -> OptionSet:
    """
    Parse a configuration file of 'key = value' or 'key value' lines.

    Raises:
        FormatError: A line without a value
        OptionError: Unknown key or badly typed value (message names the line)
    """
    options = OptionSet(provenance=PROVENANCE_CONFIG)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            parts = line.split(None, 1)
            key, value = parts[0], parts[1] if len(parts) > 1 else ""
        key, value = key.strip(), value.strip()
        if not key:
            raise FormatError("missing option name", lineno, line, source)
        if key not in OPTION_SPECS:
            where = f"{source}: " if source else ""
            raise OptionError(f"{where}line {lineno}: unknown option '{key}'")
        if not value:
            raise FormatError(f"option '{key}' has no value", lineno, key, source)
        try:
            options.set(key, coerce_value(key, value), PROVENANCE_CONFIG)
        except OptionError as exc:
            where = f"{source}: " if source else ""
            raise OptionError(f"{where}line {lineno}: {exc}") from None
    return options


def load_default_options(config_file: Optional[str] = None) -> OptionSet:
    """Compiled defaults from configs/solver_defaults.json, or the built-in table."""
    if config_file is None:
        config_file = DEFAULTS_FILE
    try:
        with open(config_file, 'r') as f:
            table = json.load(f).get('options', {})
    except FileNotFoundError:
        logger.debug("Defaults file %s not found; using built-in defaults", config_file)
        table = _builtin_defaults()

    builtin = _builtin_defaults()
    defaults = OptionSet(provenance=PROVENANCE_DEFAULT)
    for key in OPTION_SPECS:
        entry = table.get(key, builtin[key])
        value = entry.get('value') if isinstance(entry, dict) else entry
        defaults.set(key, None if value is None else coerce_value(key, value), PROVENANCE_DEFAULT)
    return defaults


def option_descriptions() -> Dict[str, str]:
    """Help strings per option, for argparse and the documentation."""
    return {key: entry['description'] for key, entry in _builtin_defaults().items()}


def merge_options(cli: OptionSet, cfg: OptionSet, defaults: OptionSet) -> OptionSet:
    """Per key: command line, else config file, else compiled default."""
    merged = OptionSet(provenance=PROVENANCE_DEFAULT)
    for key in OPTION_SPECS:
        for source in (cli, cfg, defaults):
            if key in source:
                merged.set(key, source[key], source.provenance(key))
                break
    return merged
