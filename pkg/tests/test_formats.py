#!/usr/bin/env python3
"""
Tests for the HSLR / SDPA readers, option sources and solution files.
"""

import logging
import os
import sys

import numpy as np
import pytest

# Add src directory to path for imports
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from core.operators import hm_dense
from formats.errors import FormatError, OptionError
from formats.hslr import format_hslr_float, parse_hslr, write_hslr
from formats.options import (
    OPTION_SPECS,
    PROVENANCE_CLI,
    PROVENANCE_CONFIG,
    PROVENANCE_DEFAULT,
    OptionSet,
    coerce_value,
    load_default_options,
    merge_options,
    parse_config,
)
from formats.sdpa import parse_sdpa
from formats.solution import (
    detect_format,
    format_csv_field,
    read_dual,
    read_instance,
    read_primal,
    read_warm_start,
    write_dual,
    write_primal,
)
from cli.selftest import MATCOMP_HSLR, SIMPLE_EXAMPLE_HSLR
from tests.random_instances import dense_matrices, random_instance

MATCOMP_SDPA = '''"toy matrix completion, one 4x4 block
2
1
4
{5.0, 3.0}
0 1 1 1 0.5
0 1 2 2 0.5
0 1 3 3 0.5
0 1 4 4 0.5
1 1 1 3 0.5
2 1 2 4 0.5
'''

TWO_BLOCK_SDPA = '''* one dense block and one diagonal block
1
2
2 -2
1.0
0 1 1 2 1.0
1 2 1 1 1.0
1 2 2 2 2.0
'''


def _hslr(body: str, header: str = "1 2\n1.0\n1.0\n") -> str:
    return header + body


# HSLR

def test_parse_simple_example_header():
    inst = parse_hslr(SIMPLE_EXAMPLE_HSLR)
    assert (inst.m, inst.n, inst.tau) == (3, 4, 5.0)
    np.testing.assert_array_equal(inst.b, [2.0, 4.0, 7.0])
    assert inst.mats[3].sparse.nnz == 4
    assert inst.mats[3].lowrank.rank == 2


@pytest.mark.parametrize("text, lineno, fragment", [
    ("1 2\n1.0 2.0\n1.0\n", 2, "b vector has 2 entries"),
    ("1 2\n1.0\n-1.0\n", 3, "trace bound must be positive"),
    ("1 2\n1.0\n1.0\n0 SP\n2 1 1.0\n", 5, "upper-triangle"),
    ("1 2\n1.0\n1.0\n0 SP\n1 3 1.0\n", 5, "column index outside"),
    ("1 2\n1.0\n1.0\n0 LR\n1.0 ; 1.0\n", 5, "P column has 1 entries"),
    ("1 2\n1.0\n1.0\n0 LR\n1.0 1.0 ; 1.0\n0 SP\n", 6, "must precede"),
    ("1 2\n1.0\n1.0\n2 SP\n", 4, "matrix index outside"),
    ("1 2\n1.0\n1.0\n1 1 1.0\n", 4, "before any"),
    ("1 2\nx\n1.0\n", 2, "must be a number"),
    ("1 2\n1.0\n1.0\n0 SP\n1 1 inf\n", 5, "must be finite"),
])
def test_hslr_errors_name_the_line(text, lineno, fragment):
    with pytest.raises(FormatError) as info:
        parse_hslr(text, "bad.hslr")
    assert info.value.lineno == lineno
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"bad.hslr: line {lineno}:")


def test_hslr_missing_lines():
    with pytest.raises(FormatError, match="missing 'm n' header"):
        parse_hslr("# only a comment\n")
    with pytest.raises(FormatError, match="missing trace bound"):
        parse_hslr("1 2\n1.0\n")


def test_hslr_duplicate_triplet_and_asymmetric_d():
    with pytest.raises(FormatError, match="duplicate triplet"):
        parse_hslr(_hslr("0 SP\n1 1 1.0\n1 1 2.0\n"))
    with pytest.raises(FormatError, match="not symmetric"):
        parse_hslr(_hslr("0 LR\n1.0 0.0 ; 1.0 2.0\n0.0 1.0 ; 0.0 1.0\n"))
    with pytest.raises(FormatError, match="2 lines but D columns of length 1"):
        parse_hslr(_hslr("0 LR\n1.0 0.0 ; 1.0\n0.0 1.0 ; 1.0\n"))


def test_hslr_missing_matrix_warns(caplog):
    caplog.set_level(logging.WARNING, logger="hslr_sdp.formats")
    inst = parse_hslr(_hslr("0 SP\n1 1 1.0\n"), "partial.hslr")
    assert inst.mats[1].is_zero
    assert "Matrix 1 does not appear" in caplog.text


def test_hslr_zero_constraints():
    inst = parse_hslr("0 2\n2.5\n0 SP\n1 2 -1.0\n")
    assert inst.m == 0 and inst.tau == 2.5
    assert inst.b.size == 0


def test_hslr_round_trip():
    """write_hslr then parse_hslr reproduces every matrix."""
    for seed in range(100):
        inst = random_instance(seed)
        back = parse_hslr(write_hslr(inst, comments=seed % 2 == 0))
        assert (back.m, back.n, back.tau) == (inst.m, inst.n, inst.tau)
        np.testing.assert_array_equal(back.b, inst.b)
        for original, parsed in zip(dense_matrices(inst), dense_matrices(back)):
            np.testing.assert_allclose(parsed, original, rtol=1e-15, atol=1e-15)


def test_format_hslr_float():
    assert format_hslr_float(1) == "1.0"
    assert format_hslr_float(0.1) == "0.1"
    assert float(format_hslr_float(1 / 3)) == 1 / 3


# SDPA

def test_sdpa_matches_hslr_matcomp():
    sdpa = parse_sdpa(MATCOMP_SDPA, "toy.dat-s")
    assert sdpa.tau is None
    hslr = parse_hslr(MATCOMP_HSLR)
    assert (sdpa.m, sdpa.n) == (hslr.m, hslr.n)
    np.testing.assert_array_equal(sdpa.b, hslr.b)
    for a, b in zip(dense_matrices(sdpa.with_trace_bound(16.5)), dense_matrices(hslr)):
        np.testing.assert_array_equal(a, b)


def test_sdpa_blocks_are_embedded():
    inst = parse_sdpa(TWO_BLOCK_SDPA).with_trace_bound(1.0)
    assert inst.n == 4
    C, A1 = dense_matrices(inst)
    assert C[0, 1] == C[1, 0] == 1.0
    np.testing.assert_array_equal(np.diag(A1), [0.0, 0.0, 1.0, 2.0])


@pytest.mark.parametrize("entry, fragment", [
    ("1 2 1 2 1.0", "off-diagonal entry in diagonal block"),
    ("1 1 2 1 1.0", "upper-triangle"),
    ("1 1 3 3 1.0", "outside block 1"),
    ("2 1 1 1 1.0", "matrix number outside"),
    ("1 3 1 1 1.0", "block number outside"),
    ("1 2 1 1 5.0", "duplicate entry"),
    ("1 1 1", "matno blkno i j val"),
])
def test_sdpa_entry_errors(entry, fragment):
    with pytest.raises(FormatError, match=fragment) as info:
        parse_sdpa(TWO_BLOCK_SDPA + entry + "\n")
    assert info.value.lineno == 9


def test_sdpa_rhs_may_span_lines():
    inst = parse_sdpa("2\n1\n2\n1.0\n2.0\n1 1 1 1 1.0\n2 1 2 2 1.0\n")
    np.testing.assert_array_equal(inst.b, [1.0, 2.0])


# Input detection

def test_detect_format():
    assert detect_format("model.dat-s") == "sdpa"
    assert detect_format("model.DAT") == "sdpa"
    assert detect_format("model.dat-s", override="hslr") == "hslr"
    assert detect_format("model.txt", SIMPLE_EXAMPLE_HSLR) == "hslr"
    assert detect_format("model.txt", MATCOMP_SDPA) == "sdpa"
    assert detect_format("model.txt", "2\n1\n4\n") == "sdpa"
    assert detect_format("model.txt") == "hslr"


def test_detect_format_sdpa_with_count_line_pair():
    # SDPA lets m and nBLOCK share the first line, which reads like 'm n'
    one_line_header = "2 1\n4\n5.0 3.0\n" + "\n".join(MATCOMP_SDPA.splitlines()[5:]) + "\n"
    assert detect_format("model.txt", one_line_header) == "sdpa"
    assert detect_format("model.txt", "1 1\n2\n3.0\n0 1 1 1 1.0\n") == "sdpa"
    two_block = "1 2\n" + "\n".join(TWO_BLOCK_SDPA.splitlines()[3:]) + "\n"
    assert detect_format("model.txt", two_block) == "sdpa"
    assert detect_format("model.txt", MATCOMP_HSLR) == "hslr"
    assert detect_format("model.txt", "0 3\n1.0\n0 SP\n1 1 1.0\n") == "hslr"
    assert detect_format("model.txt", "2 4\n1.0 2.0\n") == "hslr"

    for merged, standard in ((one_line_header, MATCOMP_SDPA), (two_block, TWO_BLOCK_SDPA)):
        got, want = parse_sdpa(merged), parse_sdpa(standard)
        assert (got.m, got.n) == (want.m, want.n)
        np.testing.assert_array_equal(got.b, want.b)
        for a, b in zip(dense_matrices(got.with_trace_bound(1.0)), dense_matrices(want.with_trace_bound(1.0))):
            np.testing.assert_array_equal(a, b)


def test_read_instance_trace_bound_rules(tmp_path, caplog):
    sdpa_path = tmp_path / "toy.dat-s"
    sdpa_path.write_text(MATCOMP_SDPA)
    with pytest.raises(ValueError, match="--trace_bound"):
        read_instance(str(sdpa_path))
    inst, kind = read_instance(str(sdpa_path), trace_bound=16.5)
    assert kind == "sdpa" and inst.tau == 16.5

    caplog.set_level(logging.INFO, logger="hslr_sdp.formats")
    hslr_path = tmp_path / "simple_example.hslr"
    hslr_path.write_text(SIMPLE_EXAMPLE_HSLR)
    inst, kind = read_instance(str(hslr_path), trace_bound=6.0)
    assert kind == "hslr" and inst.tau == 6.0
    assert "replaces" in caplog.text


# Options

def test_coerce_value():
    assert coerce_value("maxiter_fista", "1e4") == 10000
    assert isinstance(coerce_value("maxiter_fista", "1e4"), int)
    assert coerce_value("eps_gap", "1e-6") == 1e-6
    assert coerce_value("run_tests", "true") is True
    assert coerce_value("trace_bound", "none") is None
    assert coerce_value("format", "sdpa") == "sdpa"
    for key, raw in [("maxiter_fista", "1.5"), ("eps_gap", "-1"), ("eps_gap", "abc"),
                     ("verbosity", "4"), ("format", "csv"), ("beta0", "nan"), ("nope", "1")]:
        with pytest.raises(OptionError):
            coerce_value(key, raw)


def test_parse_config_both_syntaxes():
    cfg = parse_config("# comment\neps_gap = 1e-6\nmaxiter_hallar 200\n\ninput_path = model.hslr\n", "opts.cfg")
    assert cfg["eps_gap"] == 1e-6
    assert cfg["maxiter_hallar"] == 200
    assert cfg["input_path"] == "model.hslr"
    assert cfg.provenance("eps_gap") == PROVENANCE_CONFIG


def test_parse_config_errors():
    with pytest.raises(OptionError, match="line 2: unknown option 'epsilon'"):
        parse_config("eps_gap = 1e-6\nepsilon = 3\n", "opts.cfg")
    with pytest.raises(FormatError, match="has no value") as info:
        parse_config("eps_gap =\n")
    assert info.value.lineno == 1
    with pytest.raises(OptionError, match="line 1: .*positive"):
        parse_config("beta0 = -3\n")


def test_shipped_defaults_match_builtin(tmp_path):
    shipped = load_default_options()
    builtin = load_default_options(str(tmp_path / "missing.json"))
    assert len(shipped) == len(OPTION_SPECS)
    for key in OPTION_SPECS:
        assert shipped[key] == builtin[key], key
        assert shipped.provenance(key) == PROVENANCE_DEFAULT
    assert shipped["primal_output_path"] == "primal_out.txt"
    assert shipped["trace_bound"] is None
    assert shipped["maxiter_hallar"] == 10000


def test_option_precedence_property():
    """Each key resolves to the command line, else the config file, else the default."""
    rng = np.random.default_rng(7)
    defaults = load_default_options()
    float_keys = [k for k, spec in OPTION_SPECS.items() if spec.kind == "float" and spec.positive]
    for _ in range(100):
        cli = OptionSet(provenance=PROVENANCE_CLI)
        cfg = OptionSet(provenance=PROVENANCE_CONFIG)
        for key in float_keys:
            if rng.random() < 0.4:
                cli.set(key, float(rng.uniform(1, 2)), PROVENANCE_CLI)
            if rng.random() < 0.4:
                cfg.set(key, float(rng.uniform(3, 4)), PROVENANCE_CONFIG)
        merged = merge_options(cli, cfg, defaults)
        assert len(merged) == len(OPTION_SPECS)
        for key in float_keys:
            if key in cli:
                assert merged[key] == cli[key] and merged.provenance(key) == PROVENANCE_CLI
            elif key in cfg:
                assert merged[key] == cfg[key] and merged.provenance(key) == PROVENANCE_CONFIG
            else:
                assert merged[key] == defaults[key] and merged.provenance(key) == PROVENANCE_DEFAULT


def test_to_solver_options():
    merged = merge_options(OptionSet({"eps_gap": 1e-3}, PROVENANCE_CLI), OptionSet(provenance=PROVENANCE_CONFIG),
                           load_default_options())
    opts = merged.to_solver_options()
    assert opts.eps_gap == 1e-3
    assert opts.trace_bound is None
    assert opts.maxiter_fista == 10000


# Solution files

def test_format_csv_field():
    assert format_csv_field(1.0) == "1"
    assert format_csv_field(0.0) == "0"
    assert format_csv_field(-0.0) == "0"
    assert format_csv_field(0.5873) == "0.5873"
    assert format_csv_field(-1.2345) == "-1.2345"
    assert format_csv_field(1e-20) == "1e-20"


def test_write_primal_layout(tmp_path):
    Y = np.array([[0.8561, -0.0152], [-0.0152, 0.9998], [-0.5163, 0.0021], [0.1005, -0.1009]])
    path = tmp_path / "out_Y.csv"
    write_primal(Y, str(path))
    assert path.read_text() == "0.8561,-0.0152\n-0.0152,0.9998\n-0.5163,0.0021\n0.1005,-0.1009\n"
    np.testing.assert_array_equal(read_primal(str(path)), Y)

    write_primal(np.zeros((1, 1)), str(path))
    assert path.read_text() == "0\n"


def test_write_dual_layout(tmp_path):
    path = tmp_path / "out_p.csv"
    write_dual(0.5873, [-0.5873, 3.4121, -1.2345], str(path))
    assert path.read_text() == "0.5873,-0.5873,3.4121,-1.2345\n"
    theta, p = read_dual(str(path))
    assert theta == 0.5873
    np.testing.assert_array_equal(p, [-0.5873, 3.4121, -1.2345])

    write_dual(0.0, np.zeros(2), str(path))
    assert path.read_text() == "0,0,0\n"


def test_read_primal_skips_comments_and_rejects_ragged_rows(tmp_path):
    path = tmp_path / "Y.csv"
    path.write_text("# File specified by --primal_output_path out_Y.csv\n1,2\n3,4\n")
    np.testing.assert_array_equal(read_primal(str(path)), [[1.0, 2.0], [3.0, 4.0]])
    path.write_text("1,2\n3\n")
    with pytest.raises(FormatError, match="row has 1 fields") as info:
        read_primal(str(path))
    assert info.value.lineno == 2


def test_read_dual_rejects_negative_theta(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("-1,2\n")
    with pytest.raises(FormatError, match="theta"):
        read_dual(str(path))


def test_warm_start_rescaled_into_spectraplex(tmp_path, caplog):
    caplog.set_level(logging.WARNING, logger="hslr_sdp.formats")
    inst = parse_hslr(SIMPLE_EXAMPLE_HSLR)
    path = tmp_path / "Y0.csv"
    write_primal(np.full((4, 1), 2.0), str(path))
    Y0 = read_warm_start(str(path), inst)
    assert Y0.trace == pytest.approx(inst.tau)
    assert "rescaling" in caplog.text

    write_primal(np.ones((3, 1)), str(path))
    with pytest.raises(FormatError, match="3 rows"):
        read_warm_start(str(path), inst)
