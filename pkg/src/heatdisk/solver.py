"""Jacobi iteration on the masked five-point stencil.

The update at masked nodes is

    T'[i,j] = (T[i+1,j] + T[i-1,j] + T[i,j+1] + T[i,j-1] + h^2*q[i,j]) / 4

with masked-out nodes held at zero, which doubles as the homogeneous
Dirichlet condition: stencil reads at the mask edge pick up the stored
zeros. Sweeps are full Jacobi with double buffering, never in-place, so
results are independent of evaluation order. With threads > 1 the grid
is split into contiguous row blocks; every block reads the same old
buffer and writes a disjoint slice of the new one, and the stopping
metric is a max of per-block maxima, so fields and iteration counts are
bit-for-bit identical for every thread count.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isfinite

import numpy as np

from . import kernels
from .domain import DomainMask, ScalarField, apply_mask
from .errors import DimensionError, DivergenceError
from .grid import GridSpec, spacing


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-15      # stop when the max pointwise update falls below
    max_iter: int = 400_000       # hard iteration cap
    report_interval: int = 10_000 # sweeps between progress samples
    threads: int = 1              # row-block parallelism degree

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.report_interval < 1:
            raise ValueError(f"report_interval must be >= 1, got {self.report_interval}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass
class SolveReport:
    iterations_run: int
    converged: bool
    final_max_update: float
    wall_time: float
    progress: list[tuple[int, float]] = field(default_factory=list)


def _check_shapes(mask: DomainMask, *fields: ScalarField) -> None:
    for f in fields:
        if f.shape != mask.shape:
            raise DimensionError(f"field shape {f.shape} does not match mask {mask.shape}")


def _check_boundary(mask: DomainMask) -> None:
    # Masked-true boundary nodes would make the stencil read out of range.
    if mask[0, :].any() or mask[-1, :].any() or mask[:, 0].any() or mask[:, -1].any():
        raise ValueError("mask must be False on the outer grid boundary")


class _Sweeper:
    """Per-solve sweep dispatcher; owns the worker pool when threaded."""

    def __init__(self, nx: int, threads: int, backend: str | None):
        self.backend = kernels.active_backend(backend)
        self.blocked = self.backend == "numba" and threads > 1 and nx >= 2 * threads
        self.pool = None
        if self.blocked:
            self.bounds = kernels.block_bounds(nx, threads)
            self.pool = ThreadPoolExecutor(max_workers=len(self.bounds) - 1)

    def sweep(self, t_old, q, mask, h2, t_new):
        if not self.blocked:
            return kernels.sweep_full(t_old, q, mask, h2, t_new, self.backend)
        futures = [
            self.pool.submit(kernels.sweep_block, t_old, q, mask, h2, t_new, i0, i1)
            for i0, i1 in self.bounds[1:]
        ]
        i0, i1 = self.bounds[0]
        max_upd, total = kernels.sweep_block(t_old, q, mask, h2, t_new, i0, i1)
        for fut in futures:
            mu, tot = fut.result()
            if mu > max_upd:
                max_upd = mu
            total += tot
        return max_upd, total

    def close(self):
        if self.pool is not None:
            self.pool.shutdown(wait=True)


def jacobi_sweep(
    t_old: ScalarField,
    q: ScalarField,
    mask: DomainMask,
    h: float,
    threads: int = 1,
    backend: str | None = None,
) -> tuple[ScalarField, float]:
    """One full Jacobi sweep; returns (new field, max pointwise update).

    Expects t_old to be zero at masked-false nodes. The new field is zero
    there; the update maximum is taken over masked nodes only (0 when the
    mask is empty).
    """
    _check_shapes(mask, t_old, q)
    _check_boundary(mask)
    t_new = np.empty_like(t_old)
    sweeper = _Sweeper(t_old.shape[0], threads, backend)
    try:
        max_upd, _ = sweeper.sweep(t_old, q, mask, h * h, t_new)
    finally:
        sweeper.close()
    return t_new, max_upd


def solve(
    grid: GridSpec,
    mask: DomainMask,
    q: ScalarField,
    config: SolverConfig,
    t0: ScalarField | None = None,
    on_progress=None,
    backend: str | None = None,
) -> tuple[ScalarField, SolveReport]:
    """Iterate Jacobi sweeps until the update drops to tolerance or max_iter.

    Stops as soon as the max pointwise update over masked nodes is <=
    config.tolerance; hitting max_iter first is reported via
    converged=False, not an error. Every report_interval sweeps a
    (iteration, max_update) sample is recorded and, if given, passed to
    on_progress(iteration, max_update).

    Raises DivergenceError naming the first offending sweep if a
    non-finite value appears.
    """
    if mask.shape != grid.shape:
        raise DimensionError(f"mask shape {mask.shape} does not match grid {grid.shape}")
    _check_shapes(mask, q)
    _check_boundary(mask)
    if t0 is None:
        t_old = np.zeros(grid.shape, dtype=np.float64)
    else:
        _check_shapes(mask, t0)
        t_old = apply_mask(np.asarray(t0, dtype=np.float64), mask)
    t_new = np.empty(grid.shape, dtype=np.float64)

    h2 = spacing(grid) ** 2
    progress: list[tuple[int, float]] = []
    max_upd = np.inf
    iterations = 0
    sweeper = _Sweeper(grid.nx, config.threads, backend)
    start = time.perf_counter()
    try:
        for n in range(1, config.max_iter + 1):
            max_upd, total = sweeper.sweep(t_old, q, mask, h2, t_new)
            t_old, t_new = t_new, t_old
            iterations = n
            if not (isfinite(max_upd) and isfinite(total)):
                raise DivergenceError(n)
            if n % config.report_interval == 0:
                progress.append((n, max_upd))
                if on_progress is not None:
                    on_progress(n, max_upd)
            if max_upd <= config.tolerance:
                break
    finally:
        sweeper.close()
    wall = time.perf_counter() - start

    report = SolveReport(
        iterations_run=iterations,
        converged=max_upd <= config.tolerance,
        final_max_update=max_upd,
        wall_time=wall,
        progress=progress,
    )
    return t_old, report


def run_sweeps(
    t0: ScalarField,
    q: ScalarField,
    mask: DomainMask,
    h: float,
    iterations: int,
    threads: int = 1,
    backend: str | None = None,
) -> ScalarField:
    """Exactly `iterations` Jacobi sweeps, no tolerance exit.

    Fixed work regardless of convergence, so timings of different
    configurations are comparable; the benchmark harness builds on this.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    _check_shapes(mask, t0, q)
    _check_boundary(mask)
    t_old = apply_mask(np.asarray(t0, dtype=np.float64), mask)
    t_new = np.empty_like(t_old)
    h2 = h * h
    sweeper = _Sweeper(t_old.shape[0], threads, backend)
    try:
        for n in range(1, iterations + 1):
            max_upd, total = sweeper.sweep(t_old, q, mask, h2, t_new)
            t_old, t_new = t_new, t_old
            if not (isfinite(max_upd) and isfinite(total)):
                raise DivergenceError(n)
    finally:
        sweeper.close()
    return t_old


def residual(
    t: ScalarField,
    q: ScalarField,
    mask: DomainMask,
    h: float,
    backend: str | None = None,
) -> tuple[ScalarField, float]:
    """Five-point residual r = (-4T + T_E + T_W + T_N + T_S)/h^2 + q on the mask.

    Zero at masked-false nodes. r is identically zero exactly at the
    discrete solution; one Jacobi sweep changes a node by (h^2/4)*r, so a
    zero-residual node is a fixed point and vice versa.
    """
    _check_shapes(mask, t, q)
    _check_boundary(mask)
    out = np.empty_like(t)
    r_inf = kernels.residual_full(t, q, mask, h * h, out, backend)
    return out, r_inf
