import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose

from methods.solvers import (SingularSystemError, evenodd_residual, full_residual, solve_direct,
                             solve_gauss_seidel, solve_gauss_seidel_evenodd, solve_jacobi, sweep_order)
from metrics.flops import FlopCounter
from models.basis import build_basis
from models.frame import make_frame_config, split_even_odd
from models.sinusoid import SinusoidParams, synthesize


def random_freqs(rng, n_partials, frame_len, min_gap):
    low, high = 8 * np.pi / frame_len, np.pi - 8 * np.pi / frame_len
    while True:
        freqs = np.sort(rng.uniform(low, high, n_partials))
        if n_partials == 1 or np.min(np.diff(freqs)) >= min_gap:
            return freqs


def relative_error(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_gauss_seidel_converges_to_direct_solution():
    rng = np.random.default_rng(2024)
    cfg = make_frame_config(64)
    for _ in range(100):
        n_partials = rng.integers(1, 5)
        basis = build_basis(random_freqs(rng, n_partials, 64, 0.02 * np.pi), cfg)
        x = rng.standard_normal(64)
        direct = solve_direct(basis, x).as_vector()
        trace = solve_gauss_seidel(basis, x, 20000, update_tol=1e-14)
        assert trace.iterations < 20000
        assert relative_error(trace.weights.as_vector(), direct) <= 1e-8


def test_split_direct_solve_matches_full(cfg, rng):
    basis = build_basis([0.4, 1.1, 2.0], cfg)
    x = rng.standard_normal(256)
    assert_allclose(solve_direct(basis, x, split=True).as_vector(), solve_direct(basis, x).as_vector(),
                    rtol=1e-10, atol=1e-12)


def test_direct_solve_reports_singular_gram(cfg, rng):
    basis = build_basis([0.5], cfg)
    columns = basis.columns.copy()
    columns[:, 1] = 0.0
    singular = dataclasses.replace(basis, columns=columns)
    with pytest.raises(SingularSystemError):
        solve_direct(singular, rng.standard_normal(256))


def test_direct_solve_checks_frame_shape(cfg):
    with pytest.raises(ValueError, match='shape'):
        solve_direct(build_basis([0.5], cfg), np.zeros(128))


def test_one_sweep_is_exact_for_stationary_sinusoid_on_the_basis_frequency(cfg):
    x = synthesize([SinusoidParams(1.3, 0.7, 0.4)], cfg, windowed=True)
    basis = build_basis([0.7], cfg)
    trace = solve_gauss_seidel(basis, x, 1)
    assert_allclose(trace.weights.as_vector(), solve_direct(basis, x).as_vector(), atol=1e-12)
    assert trace.residual_energy[-1] <= 1e-24


def test_residual_energy_never_increases_within_a_sweep():
    rng = np.random.default_rng(5)
    cfg = make_frame_config(64)
    for _ in range(1000):
        n_partials = rng.integers(1, 5)
        basis = build_basis(random_freqs(rng, n_partials, 64, 0.02 * np.pi), cfg)
        x = rng.standard_normal(64)
        for solver in (solve_gauss_seidel, solve_gauss_seidel_evenodd):
            steps = solver(basis, x, 2, record_steps=True).step_energy
            assert steps.size == 2 * basis.n_columns + 1
            assert np.all(np.diff(steps) <= 1e-12 * steps[:-1])


def test_evenodd_matches_plain_path_at_half_the_cost():
    rng = np.random.default_rng(6)
    cfg = make_frame_config(64)
    for _ in range(100):
        n_partials = rng.integers(1, 5)
        basis = build_basis(random_freqs(rng, n_partials, 64, 0.02 * np.pi), cfg)
        x = rng.standard_normal(64)
        plain_counter, fast_counter = FlopCounter(), FlopCounter()
        plain = solve_gauss_seidel(basis, x, 3, counter=plain_counter)
        fast = solve_gauss_seidel_evenodd(basis, x, 3, counter=fast_counter)
        assert relative_error(fast.weights.as_vector(), plain.weights.as_vector()) <= 1e-10
        assert_allclose(fast.residual_energy, plain.residual_energy, rtol=1e-10)
        assert fast_counter.total <= 0.55 * plain_counter.total


def test_evenodd_residual_reassembles(cfg, rng):
    basis = build_basis([0.5, 1.5], cfg)
    x = rng.standard_normal(256)
    trace = solve_gauss_seidel(basis, x, 4)
    residual = x - basis.columns @ trace.weights.as_vector()
    halves = evenodd_residual(basis, np.vstack(split_even_odd(x)), trace.weights.as_vector(), FlopCounter())
    assert_allclose(full_residual(halves), residual, atol=1e-12)


def test_evenodd_rejects_odd_frame_length(cfg):
    basis = build_basis([0.5], cfg)
    odd = dataclasses.replace(basis, columns=np.vstack([basis.columns, basis.columns[:1]]))
    with pytest.raises(ValueError, match='even frame length'):
        solve_gauss_seidel_evenodd(odd, np.zeros(257), 1)


def test_early_exit_stops_before_the_iteration_budget(cfg, rng):
    basis = build_basis([1.0], cfg)
    x = rng.standard_normal(256)
    trace = solve_gauss_seidel(basis, x, 500, tol=1e-14)
    assert trace.iterations < 500
    assert trace.residual_energy.size == trace.iterations + 1


def test_fixed_iterations_without_tolerance(cfg, rng):
    basis = build_basis([1.0, 2.0], cfg)
    trace = solve_gauss_seidel_evenodd(basis, rng.standard_normal(256), 7)
    assert trace.iterations == 7
    assert trace.residual_energy.size == 8


def test_sweep_orders_reach_the_same_solution(cfg, rng):
    basis = build_basis([0.6, 1.4], cfg)
    x = rng.standard_normal(256)
    grouped = solve_gauss_seidel(basis, x, 200).weights.as_vector()
    interleaved = solve_gauss_seidel(basis, x, 200, order='interleaved').weights.as_vector()
    assert_allclose(grouped, interleaved, rtol=1e-8, atol=1e-10)
    assert sorted(sweep_order(2, 'interleaved')) == list(range(8))
    with pytest.raises(ValueError):
        sweep_order(2, 'random')


def test_gauss_seidel_rejects_zero_iterations(cfg):
    with pytest.raises(ValueError):
        solve_gauss_seidel(build_basis([0.5], cfg), np.zeros(256), 0)


def test_jacobi_converges_for_a_single_partial(cfg, rng):
    basis = build_basis([1.0], cfg)
    x = rng.standard_normal(256)
    trace = solve_jacobi(basis, x, 100)
    assert not trace.diverged
    assert trace.iterations == 100
    assert relative_error(trace.weights.as_vector(), solve_direct(basis, x).as_vector()) <= 1e-8


def test_jacobi_flags_divergence_for_crowded_partials(cfg, rng):
    basis = build_basis([0.1 * np.pi, 0.1 * np.pi + 1e-3, 0.1 * np.pi + 2e-3], cfg)
    trace = solve_jacobi(basis, rng.standard_normal(256), 50)
    assert trace.diverged
    assert trace.residual_energy[-1] > trace.residual_energy[0]


def test_jacobi_without_iterations_returns_the_correlations(cfg, rng):
    basis = build_basis([0.4, 1.7], cfg)
    x = rng.standard_normal(256)
    trace = solve_jacobi(basis, x, 0)
    assert trace.iterations == 0
    assert_allclose(trace.weights.as_vector(), basis.columns.T @ x, rtol=1e-12)


def test_evenodd_symmetric_frame_leaves_odd_weights_at_zero(cfg, rng):
    head = rng.standard_normal(128)
    x = np.concatenate([head, head[::-1]])
    basis = build_basis([0.6, 1.1, 2.3], cfg)
    w = solve_gauss_seidel_evenodd(basis, x, 3).weights.as_vector()
    assert np.all(np.abs(w[~basis.even_mask]) <= 1e-12)
    assert np.any(np.abs(w[basis.even_mask]) > 1e-3)


@pytest.mark.parametrize('solver', [solve_gauss_seidel, solve_gauss_seidel_evenodd])
def test_trace_carries_the_final_residual(cfg, rng, solver):
    basis = build_basis([0.5, 1.5], cfg)
    x = rng.standard_normal(256)
    trace = solver(basis, x, 3)
    assert_allclose(trace.residual, x - basis.columns @ trace.weights.as_vector(), atol=1e-12)
    assert trace.residual @ trace.residual == pytest.approx(trace.residual_energy[-1], rel=1e-12)
