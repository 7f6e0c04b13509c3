#!/usr/bin/env python3
"""
Tests for the inner descent, the Frank-Wolfe step, the dual construction
and the augmented Lagrangian outer loop.
"""

import dataclasses
import os
import sys

import numpy as np
import pytest

# Add src directory to path for imports
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from core.hybrid import HybridMatrix, LowRankFactor, SdpInstance, SparseSym
from core.operators import al_objective, dual_value, feasibility_residual, primal_value, slack_operator
from formats.errors import OptionError
from formats.hslr import parse_hslr
from formats.solution import read_dual, read_primal, write_dual, write_primal
from generators.instances import gen_cycle, gen_stableset
from scaling.scaling import scale_instance, scale_primal
from solver.dual import check_termination, compute_theta, relative_gap
from solver.inner import adap_descent, fw_step, fw_trigger, hlr_subproblem, inner_target, mapping_norm, project_ball
from solver.options import SolverOptions
from solver.outer import default_initial, solve, solve_original, truncate_rank, update_beta
from solver.records import IterRecord, SolveStats, SolveStatus
from cli.selftest import MATCOMP_HSLR
from cli.console import render_iteration
from tests.random_instances import dense_sdp_value, random_factor, random_instance

FAST = SolverOptions(time_limit=60.0)


def _one_by_one(c: float) -> SdpInstance:
    return SdpInstance(0, 1, [], 1.0, [HybridMatrix(1, sparse=SparseSym(1, [0], [0], [c]))])


def _dense_slack(inst: SdpInstance, p: np.ndarray, theta: float) -> np.ndarray:
    E = np.eye(inst.n)
    return slack_operator(inst, p).matmat(E) + theta * E


# Options and records

def test_solver_options_validation():
    assert SolverOptions().maxiter_hallar == 10000
    for bad in [dict(sigma_fista=1.5), dict(L_inc_fista=1.0), dict(beta0=1.0),
                dict(beta_max=5.0), dict(maxiter_fista=0), dict(eps_gap=0.0),
                dict(trace_bound=-1.0), dict(verbosity=5), dict(beta_inc=0.5)]:
        with pytest.raises(OptionError):
            SolverOptions(**bad)
    opts = SolverOptions.from_mapping({"eps_gap": 1e-3, "input_path": "x.hslr", "beta0": None, "trace_bound": None})
    assert opts.eps_gap == 1e-3 and opts.beta0 == 10.0 and opts.trace_bound is None


def test_solver_options_are_immutable():
    opts = SolverOptions(maxiter_fista=1e4)
    assert opts.maxiter_fista == 10000 and isinstance(opts.maxiter_fista, int)
    with pytest.raises(dataclasses.FrozenInstanceError):
        opts.eps_gap = 1.0
    wider = opts.replace(maxiter_eig=5e3)
    assert wider.maxiter_eig == 5000 and isinstance(wider.maxiter_eig, int)
    assert opts.maxiter_eig != wider.maxiter_eig
    with pytest.raises(OptionError):
        opts.replace(beta_inc=0.5)


def test_iter_record_steps():
    IterRecord(0, 1, None, 0.1, 0.0, None, 10.0, "AFA")
    with pytest.raises(ValueError):
        IterRecord(0, 1, None, 0.1, 0.0, None, 10.0, "")
    with pytest.raises(ValueError):
        IterRecord(0, 1, None, 0.1, 0.0, None, 10.0, "AX")
    assert SolveStatus.OPTIMAL.exit_code == 0
    assert SolveStatus.TIME_LIMIT.exit_code == 2


# Building blocks

def test_project_ball_and_mapping_norm():
    Y = np.full((2, 2), 1.0)
    P = project_ball(Y, 1.0)
    assert np.sum(P * P) == pytest.approx(1.0)
    np.testing.assert_array_equal(project_ball(0.1 * Y, 1.0), 0.1 * Y)
    assert mapping_norm(P, np.zeros_like(P), 1.0, 1.0) == 0.0


def test_update_beta_schedule():
    opts = SolverOptions(beta_inc=2.0, beta_min=1.0, beta0=4.0, beta_max=16.0)
    assert update_beta(4.0, None, 1.0, opts) == 4.0
    assert update_beta(4.0, 1.0, 0.6, opts) == 8.0
    assert update_beta(4.0, 1.0, 0.3, opts) == 4.0
    assert update_beta(4.0, 1.0, 0.01, opts) == 2.0
    assert update_beta(16.0, 1.0, 0.9, opts) == 16.0
    assert update_beta(1.0, 1.0, 0.01, opts) == 1.0
    # feasible enough: hold the penalty instead of pushing it to beta_max
    assert update_beta(4.0, 1e-7, 0.9e-7, opts) == 4.0
    assert update_beta(16.0, 2e-6, 1.9e-6, opts) == 16.0


def test_inner_target_and_fw_trigger_stay_relative():
    opts = SolverOptions()
    assert inner_target(opts.beta0, opts) == pytest.approx(0.1 * opts.beta0 * opts.eps_pfeas)
    assert inner_target(opts.beta_max, opts) == opts.eps_gap
    assert inner_target(1e-300, opts) == opts.err_tol_fista
    assert fw_trigger(0.0, opts) == pytest.approx(0.1 * opts.eps_gap)
    assert fw_trigger(1e4, opts) == pytest.approx(0.1 * opts.eps_gap * (1.0 + 1e4))
    assert fw_trigger(-1e4, opts) == fw_trigger(1e4, opts)


def test_truncate_rank():
    rng = np.random.default_rng(0)
    u = rng.standard_normal((5, 1))
    Y = np.hstack([u, 2 * u, -u])
    T = truncate_rank(Y).Y
    assert T.shape == (5, 1)
    np.testing.assert_allclose(T @ T.T, Y @ Y.T, atol=1e-12)
    Z = truncate_rank(np.zeros((4, 3))).Y
    assert Z.shape == (4, 1) and not np.any(Z)
    full = rng.standard_normal((5, 3))
    assert truncate_rank(full).Y.shape == (5, 3)


def test_default_initial_is_seeded_and_inside():
    inst = random_instance(1)
    Y = default_initial(inst, seed=3).Y
    assert Y.shape == (inst.n, 1)
    assert np.sum(Y * Y) == pytest.approx(inst.tau / 4)
    np.testing.assert_array_equal(Y, default_initial(inst, seed=3).Y)


def test_fw_step_one_by_one():
    """Negative cost: jump to the boundary. Positive cost: shrink to zero."""
    out = fw_step(_one_by_one(-1.0), np.array([[0.5]]), np.zeros(0), 10.0, FAST)
    assert out.took and out.alpha == 1.0
    assert out.fw_gap == pytest.approx(0.75)
    np.testing.assert_allclose(np.abs(out.Y), [[1.0]])

    out = fw_step(_one_by_one(1.0), np.array([[0.5]]), np.zeros(0), 10.0, FAST)
    assert out.took and out.fw_gap == pytest.approx(0.25)
    np.testing.assert_allclose(out.Y, [[0.0]])


def test_fw_step_not_taken_at_optimum():
    inst = _one_by_one(-1.0)
    out = fw_step(inst, np.array([[1.0]]), np.zeros(0), 10.0, FAST)
    assert not out.took
    assert out.fw_gap == pytest.approx(0.0, abs=1e-12)


def test_al_objective_never_increases():
    """Descent and Frank-Wolfe steps are monotone on the augmented Lagrangian."""
    opts = SolverOptions(maxiter_fista=200, maxiter_hlr=3, time_limit=60.0)
    for seed in range(100):
        inst = random_instance(seed)
        rng = np.random.default_rng(seed)
        Y0 = random_factor(rng, inst.n, 1, inst.tau / 2)
        p = rng.standard_normal(inst.m)
        beta = float(rng.uniform(1.0, 50.0))
        before = al_objective(inst, Y0, p, beta)
        scale = 1e-9 * max(1.0, abs(before))

        Y1, report = adap_descent(inst, Y0, p, beta, opts)
        after_descent = al_objective(inst, Y1, p, beta)
        assert after_descent <= before + scale
        assert report.value == pytest.approx(after_descent)
        assert np.sum(Y1 * Y1) <= inst.tau * (1 + 1e-12)

        fw = fw_step(inst, Y1, p, beta, opts)
        assert al_objective(inst, fw.Y, p, beta) <= after_descent + scale
        assert np.sum(fw.Y * fw.Y) <= inst.tau * (1 + 1e-12)

        outcome = hlr_subproblem(inst, Y0, p, beta, opts)
        assert al_objective(inst, outcome.Y, p, beta) <= before + scale
        assert outcome.steps.startswith("A")
        assert set(outcome.steps) <= {"A", "F"}


def test_descent_counts_work():
    inst = random_instance(4)
    stats = SolveStats()
    _, report = adap_descent(inst, default_initial(inst).Y, np.zeros(inst.m), 10.0, FAST, stats=stats)
    assert stats.fista_calls == 1
    assert stats.acg_iterations == report.iterations
    assert 1 <= report.cycles <= FAST.maxiter_aipp


def test_compute_theta_for_negative_all_ones():
    inst = SdpInstance(0, 4, [], 1.0, [HybridMatrix(4, lowrank=LowRankFactor(np.ones((4, 1)), [[-1.0]]))])
    assert compute_theta(inst, np.zeros(0), FAST) == pytest.approx(4.0, abs=1e-8)


def test_check_termination_without_theta():
    inst = random_instance(2)
    check = check_termination(inst, default_initial(inst).Y, np.zeros(inst.m), None, FAST)
    assert check.gap is None and check.dval is None and not check.done
    assert relative_gap(1.0, 1.0) == 0.0
    assert relative_gap(2.0, 0.0) == pytest.approx(2.0 / 3.0)


# Full solves

def test_stable_set_on_four_cycle(tmp_path):
    """Lovasz theta of C4 is 2; the dual slack is PSD and the files verify post hoc."""
    inst = gen_stableset(gen_cycle(4))
    rows = []
    result, _, unscaled = solve_original(inst, FAST, callback=rows.append)
    assert result.status is SolveStatus.OPTIMAL
    assert unscaled.pval == pytest.approx(-2.0, abs=1e-3)
    assert result.feas <= FAST.eps_pfeas
    assert result.gap <= FAST.eps_gap
    assert rows == result.records
    assert [r.iteration for r in rows] == list(range(len(rows)))
    assert all(r.rank >= 1 for r in rows)

    theta, p = unscaled.dual.theta, unscaled.dual.p
    assert theta >= 0
    assert np.linalg.eigvalsh(_dense_slack(inst, p, theta))[0] >= -1e-8

    primal_path, dual_path = tmp_path / "Y.csv", tmp_path / "d.csv"
    write_primal(unscaled.Y, str(primal_path))
    write_dual(theta, p, str(dual_path))
    Y = read_primal(str(primal_path))
    theta_back, p_back = read_dual(str(dual_path))
    assert Y.shape == (4, result.rank)
    assert p_back.size == 4
    pval = primal_value(inst, Y)
    dval = dual_value(inst, p_back, theta_back)
    assert feasibility_residual(inst, Y) <= 1e-5
    assert relative_gap(pval, dval) <= 1e-5


def test_matrix_completion_toy():
    inst = parse_hslr(MATCOMP_HSLR)
    result, sp, unscaled = solve_original(inst, FAST)
    assert result.status is SolveStatus.OPTIMAL
    assert unscaled.pval == pytest.approx(8.0, abs=1e-2)
    assert np.linalg.eigvalsh(_dense_slack(inst, unscaled.dual.p, unscaled.dual.theta))[0] >= -1e-8

    # termination is decided on the scaled problem
    scaled = scale_instance(inst, sp)
    Yt = scale_primal(unscaled.Y, sp).Y
    assert feasibility_residual(scaled, Yt) <= FAST.eps_pfeas * (1 + 1e-9)


def test_no_constraints():
    """min C . X over the spectraplex is tau * lambda_min(C)."""
    C = HybridMatrix(3, sparse=SparseSym(3, [0, 1, 2], [0, 1, 2], [1.0, -2.0, 3.0]))
    inst = SdpInstance(0, 3, [], 2.0, [C])
    result, _, unscaled = solve_original(inst, FAST)
    assert result.status is SolveStatus.OPTIMAL
    assert unscaled.pval == pytest.approx(-4.0, abs=1e-3)
    assert result.feas == 0.0


def test_warm_start_and_callback_order():
    inst = gen_stableset(gen_cycle(5))
    seen = []
    result = solve(inst, FAST, warm=np.ones((5, 2)), callback=lambda rec: seen.append(rec.iteration))
    assert seen == list(range(result.iterations))
    assert result.Y.n == 5


def test_limits_end_the_run():
    inst = parse_hslr(MATCOMP_HSLR)
    result, _, _ = solve_original(inst, SolverOptions(maxiter_hallar=1, time_limit=60.0))
    assert result.iterations == 1
    if result.status is not SolveStatus.OPTIMAL:
        assert result.status is SolveStatus.ITERATION_LIMIT
        assert "maxiter_hallar" in result.diagnostic

    result = solve(inst.with_trace_bound(16.5), SolverOptions(time_limit=1e-9))
    assert result.status is SolveStatus.TIME_LIMIT
    assert result.status.exit_code == 2
    assert "time_limit" in result.diagnostic


def test_solve_requires_matching_warm_start():
    inst = random_instance(0)
    with pytest.raises(ValueError, match="rows"):
        solve(inst, FAST, warm=np.ones((inst.n + 1, 1)))


def _failing_theta(monkeypatch, fail_from: int, fail_until: int):
    """Make calls fail_from..fail_until (1-based, inclusive) of compute_theta report a failed eigensolve."""
    import solver.outer

    calls = []

    def flaky(*args, **kwargs):
        calls.append(len(calls) + 1)
        if fail_from <= calls[-1] <= fail_until:
            return None
        return compute_theta(*args, **kwargs)

    monkeypatch.setattr(solver.outer, "compute_theta", flaky)
    return calls


@pytest.mark.parametrize("fail_from, fail_until", [(2, 2), (2, 10 ** 6)])
def test_returned_dual_pair_is_certified(monkeypatch, fail_from, fail_until):
    """A failed final eigensolve never pairs the last p with an older theta."""
    inst = random_instance(7)
    calls = _failing_theta(monkeypatch, fail_from, fail_until)
    result = solve(inst, FAST.replace(maxiter_hallar=2))
    assert calls
    assert result.theta >= 0
    assert np.linalg.eigvalsh(_dense_slack(inst, result.p, result.theta))[0] >= -1e-7
    assert result.dval == pytest.approx(dual_value(inst, result.p, result.theta))


def test_counters_match_step_tags():
    for inst in [gen_stableset(gen_cycle(4)), parse_hslr(MATCOMP_HSLR), random_instance(3)]:
        result, _, _ = solve_original(inst, FAST)
        tags = "".join(r.steps for r in result.records)
        assert result.stats.fw_calls == tags.count("F")
        assert result.stats.fista_calls >= tags.count("A")
        assert result.stats.eig_calls >= result.stats.fw_calls


def test_iteration_table_is_reproducible():
    for inst in [gen_stableset(gen_cycle(4)), parse_hslr(MATCOMP_HSLR)]:
        tables = []
        for _ in range(2):
            result, _, _ = solve_original(inst, FAST)
            assert result.status is SolveStatus.OPTIMAL
            tables.append("\n".join(render_iteration(r) for r in result.records))
        assert tables[0] == tables[1]


ORACLE_SEEDS = list(range(50)) + list(range(100, 125))


@pytest.mark.parametrize("seed", ORACLE_SEEDS)
def test_agrees_with_dense_sdp_oracle(seed):
    """Random feasible instances against an interior-point solve of the dense SDP."""
    inst = random_instance(seed)
    expected = dense_sdp_value(inst)
    result, _, unscaled = solve_original(inst, FAST)
    assert result.status is SolveStatus.OPTIMAL
    assert unscaled.pval == pytest.approx(expected, abs=1e-3)
    assert np.linalg.eigvalsh(_dense_slack(inst, unscaled.dual.p, unscaled.dual.theta))[0] >= -1e-7
