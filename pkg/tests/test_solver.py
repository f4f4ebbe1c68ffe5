"""Jacobi iteration: hand-checked sweeps, stopping, invariants, threading."""

import numpy as np
import pytest

from heatdisk.domain import CircleSpec, SourceSpec, build_mask, build_source, inside_circle
from heatdisk.errors import DimensionError, DivergenceError
from heatdisk.grid import GridSpec, spacing
from heatdisk.solver import SolverConfig, jacobi_sweep, residual, run_sweeps, solve

CIRCLE = CircleSpec(cx=0.5, cy=0.5, radius=0.5)


def disk_problem(nx):
    grid = GridSpec(nx=nx, ny=nx)
    mask = build_mask(grid, CIRCLE)
    q = build_source(grid, inside_circle(grid, CIRCLE), SourceSpec(k=200.0, q_dot=1.0e6))
    return grid, mask, q


def single_node_problem():
    # 3x3 grid, h=1/2, only the center masked, q=1 there.
    mask = np.zeros((3, 3), dtype=bool)
    mask[1, 1] = True
    q = np.where(mask, 1.0, 0.0)
    return mask, q, 0.5


def test_single_sweep_hand_checked():
    mask, q, h = single_node_problem()
    t1, max_upd = jacobi_sweep(np.zeros((3, 3)), q, mask, h)
    assert t1[1, 1] == 0.0625  # (h^2 * q)/4
    assert max_upd == 0.0625
    assert np.all(t1[~mask] == 0.0)
    # Neighbors are pinned at zero, so the second sweep changes nothing.
    t2, max_upd2 = jacobi_sweep(t1, q, mask, h)
    assert max_upd2 == 0.0
    assert np.array_equal(t1, t2)


def test_solve_single_node_converges_in_two_sweeps():
    mask, q, h = single_node_problem()
    grid = GridSpec(nx=3, ny=3)
    t, report = solve(grid, mask, q, SolverConfig())
    assert report.converged
    assert report.iterations_run == 2
    assert report.final_max_update == 0.0
    assert t[1, 1] == 0.0625


def test_solve_empty_mask_converges_immediately():
    grid = GridSpec(nx=5, ny=5)
    mask = np.zeros((5, 5), dtype=bool)
    q = np.zeros((5, 5))
    t, report = solve(grid, mask, q, SolverConfig())
    assert report.converged
    assert report.iterations_run == 1
    assert np.all(t == 0.0)


def test_jacobi_sweep_empty_mask_zero_update():
    _, max_upd = jacobi_sweep(
        np.zeros((5, 5)), np.zeros((5, 5)), np.zeros((5, 5), dtype=bool), 0.25
    )
    assert max_upd == 0.0


def test_iterates_monotone_from_below():
    # With q >= 0 and t0 = 0 every sweep can only raise masked values.
    grid, mask, q = disk_problem(17)
    h = spacing(grid)
    t = np.zeros(grid.shape)
    for _ in range(100):
        t_next, _ = jacobi_sweep(t, q, mask, h)
        assert np.all(t_next >= t)
        t = t_next
    assert t.max() > 0.0


def test_exact_fixed_point_has_zero_update_and_tiny_residual():
    # The monotone iteration lands on an exact floating-point fixed point:
    # the update hits 0.0, one more sweep reproduces the field bit-for-bit,
    # and the five-point residual sits at rounding level.
    grid, mask, q = disk_problem(17)
    h = spacing(grid)
    t, report = solve(grid, mask, q, SolverConfig(tolerance=1e-300, max_iter=10_000))
    assert report.converged
    assert report.final_max_update == 0.0
    t_next, max_upd = jacobi_sweep(t, q, mask, h)
    assert max_upd == 0.0
    assert np.array_equal(t, t_next)
    _, r_inf = residual(t, q, mask, h)
    assert r_inf <= 1e-9


def test_restart_from_solution_converges_in_one_sweep():
    grid, mask, q = disk_problem(9)
    t, _ = solve(grid, mask, q, SolverConfig(tolerance=1e-300, max_iter=10_000))
    t2, report = solve(grid, mask, q, SolverConfig(), t0=t)
    assert report.converged
    assert report.iterations_run == 1
    assert np.array_equal(t, t2)


def test_initial_field_is_masked():
    grid, mask, q = disk_problem(9)
    t0 = np.ones(grid.shape)
    t, _ = solve(grid, mask, q, SolverConfig(max_iter=1, tolerance=1e-300), t0=t0)
    assert np.all(t[~mask] == 0.0)


def test_fields_identical_across_thread_counts():
    grid, mask, q = disk_problem(33)
    h = spacing(grid)
    t0 = np.zeros(grid.shape)
    fields = [run_sweeps(t0, q, mask, h, 50, threads=n) for n in (1, 2, 8)]
    assert np.array_equal(fields[0], fields[1])
    assert np.array_equal(fields[0], fields[2])

    t1, rep1 = solve(grid, mask, q, SolverConfig(tolerance=1e-10, threads=1))
    t4, rep4 = solve(grid, mask, q, SolverConfig(tolerance=1e-10, threads=4))
    assert np.array_equal(t1, t4)
    assert rep1.iterations_run == rep4.iterations_run


def test_solution_reflection_symmetric():
    grid, mask, q = disk_problem(33)
    t, report = solve(grid, mask, q, SolverConfig(tolerance=1e-12, max_iter=20_000))
    assert report.converged
    assert np.max(np.abs(t - t[::-1, :])) <= 1e-9
    assert np.max(np.abs(t - t[:, ::-1])) <= 1e-9
    assert np.max(np.abs(t - t.T)) <= 1e-9


def test_progress_sampling_and_callback():
    grid, mask, q = disk_problem(17)
    seen = []
    config = SolverConfig(tolerance=1e-14, max_iter=10_000, report_interval=10)
    _, report = solve(grid, mask, q, config, on_progress=lambda n, mu: seen.append((n, mu)))
    assert seen == report.progress
    assert len(report.progress) > 5
    iters = [n for n, _ in report.progress]
    updates = [mu for _, mu in report.progress]
    assert all(n % 10 == 0 for n in iters)
    assert iters == sorted(iters)
    # The update field obeys the same contraction, so its max never grows.
    assert all(a >= b for a, b in zip(updates, updates[1:]))
    assert all(mu >= 0.0 for mu in updates)


def test_hitting_max_iter_reports_not_converged():
    grid, mask, q = disk_problem(17)
    t, report = solve(grid, mask, q, SolverConfig(tolerance=1e-15, max_iter=5))
    assert not report.converged
    assert report.iterations_run == 5
    assert report.final_max_update > 1e-15


def test_infinite_source_raises_divergence_error():
    grid, mask, q = disk_problem(9)
    q = q.copy()
    q[4, 4] = np.inf
    with pytest.raises(DivergenceError) as exc_info:
        solve(grid, mask, q, SolverConfig())
    assert exc_info.value.iteration == 1
    h = spacing(grid)
    with pytest.raises(DivergenceError):
        run_sweeps(np.zeros(grid.shape), q, mask, h, 10)


def test_masked_true_boundary_rejected():
    grid, mask, q = disk_problem(9)
    bad = mask.copy()
    bad[0, 4] = True
    with pytest.raises(ValueError):
        jacobi_sweep(np.zeros(grid.shape), q, bad, spacing(grid))
    with pytest.raises(ValueError):
        solve(grid, bad, q, SolverConfig())


def test_shape_mismatch_rejected():
    grid, mask, q = disk_problem(9)
    with pytest.raises(DimensionError):
        solve(grid, mask, np.zeros((9, 8)), SolverConfig())
    with pytest.raises(DimensionError):
        solve(grid, np.zeros((8, 9), dtype=bool), q, SolverConfig())
    with pytest.raises(DimensionError):
        jacobi_sweep(np.zeros((9, 8)), q, mask, spacing(grid))


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tolerance=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iter=0)
    with pytest.raises(ValueError):
        SolverConfig(report_interval=0)
    with pytest.raises(ValueError):
        SolverConfig(threads=0)


def test_run_sweeps_requires_positive_iterations():
    grid, mask, q = disk_problem(9)
    with pytest.raises(ValueError):
        run_sweeps(np.zeros(grid.shape), q, mask, spacing(grid), 0)
