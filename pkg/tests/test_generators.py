#!/usr/bin/env python3
"""
Tests for the matrix completion and stable set instance families.
"""

import math
import os
import sys

import numpy as np
import pytest

# Add src directory to path for imports
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from core.operators import apply_A, hm_dense, primal_value
from formats.errors import FormatError
from formats.hslr import parse_hslr, write_hslr
from generators.instances import (
    GraphSpec,
    MatCompSpec,
    gen_cycle,
    gen_matcomp,
    gen_random_matcomp,
    gen_stableset,
    matcomp_trace_bound,
    read_edge_list,
    read_observations,
)
from cli.selftest import MATCOMP_HSLR, STABLESET_C4_HSLR
from tests.random_instances import dense_matrices


def test_cycle_edges():
    assert gen_cycle(4).edges == [(1, 2), (2, 3), (3, 4), (1, 4)]
    with pytest.raises(ValueError, match="at least 3"):
        gen_cycle(2)


def test_graph_spec_validation():
    assert GraphSpec(3, [(3, 1)]).edges == [(1, 3)]
    with pytest.raises(ValueError, match="Self-loop"):
        GraphSpec(3, [(2, 2)])
    with pytest.raises(ValueError, match="Duplicate edge"):
        GraphSpec(3, [(1, 2), (2, 1)])
    with pytest.raises(ValueError, match="outside"):
        GraphSpec(3, [(1, 4)])


def test_stable_set_matches_shipped_c4():
    generated = gen_stableset(gen_cycle(4))
    shipped = parse_hslr(STABLESET_C4_HSLR)
    assert (generated.m, generated.n, generated.tau) == (4, 4, 1.0)
    np.testing.assert_array_equal(generated.b, np.zeros(4))
    for a, b in zip(dense_matrices(generated), dense_matrices(shipped)):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(hm_dense(generated.C), -np.ones((4, 4)))


def test_stable_set_constraints_pick_edge_entries():
    """A_e . X = X_ij for an edge {i, j}."""
    inst = gen_stableset(GraphSpec(3, [(1, 3)]))
    Y = np.array([[1.0, 0.0], [2.0, 1.0], [3.0, -1.0]])
    X = Y @ Y.T
    np.testing.assert_allclose(apply_A(inst, Y), [X[0, 2]])
    assert primal_value(inst, Y) == pytest.approx(-np.sum(X))


def test_matcomp_toy():
    spec = MatCompSpec(2, 2, [(1, 1), (2, 2)], [5.0, 3.0])
    inst = gen_matcomp(spec)
    assert (inst.m, inst.n) == (2, 4)
    assert inst.tau == pytest.approx(2 * math.sqrt(2) * math.sqrt(34))
    assert matcomp_trace_bound(spec) == inst.tau
    shipped = parse_hslr(MATCOMP_HSLR)
    for a, b in zip(dense_matrices(inst), dense_matrices(shipped)):
        np.testing.assert_array_equal(a, b)


def test_matcomp_validation():
    with pytest.raises(ValueError, match="n1 <= n2"):
        MatCompSpec(3, 2)
    with pytest.raises(ValueError, match="outside"):
        MatCompSpec(2, 2, [(3, 1)], [1.0])
    with pytest.raises(ValueError, match="Duplicate"):
        MatCompSpec(2, 2, [(1, 1), (1, 1)], [1.0, 2.0])
    with pytest.raises(ValueError, match="2 observed positions but 1 values"):
        MatCompSpec(2, 2, [(1, 1), (1, 2)], [1.0])
    with pytest.raises(ValueError, match="zero"):
        gen_matcomp(MatCompSpec(1, 1, [(1, 1)], [0.0]))


def test_random_matcomp_is_seeded():
    spec, M = gen_random_matcomp(4, 6, 2, 0.5, seed=5)
    again, M2 = gen_random_matcomp(4, 6, 2, 0.5, seed=5)
    np.testing.assert_array_equal(M, M2)
    assert spec.omega == again.omega
    assert len(spec.omega) == 12
    assert np.linalg.matrix_rank(M) == 2
    for (i, j), value in zip(spec.omega, spec.values):
        assert value == M[i - 1, j - 1]
    with pytest.raises(ValueError, match="Rank"):
        gen_random_matcomp(4, 6, 5, 0.5)
    with pytest.raises(ValueError, match="fraction"):
        gen_random_matcomp(4, 6, 2, 0.0)


def test_generated_instances_survive_hslr():
    spec, _ = gen_random_matcomp(3, 4, 1, 0.5, seed=1)
    for inst in (gen_matcomp(spec), gen_stableset(gen_cycle(6))):
        back = parse_hslr(write_hslr(inst))
        assert back.tau == inst.tau
        for a, b in zip(dense_matrices(inst), dense_matrices(back)):
            np.testing.assert_array_equal(a, b)


def test_read_edge_list():
    graph = read_edge_list("# C4\n1 2\n2 3\n3 4\n4 1\n")
    assert graph.n == 4
    assert graph.edges == [(1, 2), (2, 3), (3, 4), (1, 4)]
    assert read_edge_list("1 2\n", n=5).n == 5
    with pytest.raises(FormatError, match="'i j'") as info:
        read_edge_list("1 2\n1 2 3\n", source="g.txt")
    assert info.value.lineno == 2
    with pytest.raises(FormatError, match="Duplicate edge"):
        read_edge_list("1 2\n2 1\n")
    with pytest.raises(FormatError, match="numbered from 1"):
        read_edge_list("0 1\n")


def test_read_observations():
    spec = read_observations("2 2\n1 1 5.0\n2 2 3.0\n")
    assert (spec.n1, spec.n2) == (2, 2)
    assert spec.omega == [(1, 1), (2, 2)]
    assert spec.values == [5.0, 3.0]
    with pytest.raises(FormatError, match="missing"):
        read_observations("# nothing\n")
    with pytest.raises(FormatError, match="'i j value'") as info:
        read_observations("2 2\n1 1\n")
    assert info.value.lineno == 2
