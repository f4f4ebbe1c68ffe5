"""Error measurement and independent verification.

Masked error fields, the three grid norms, a dense direct-solve oracle
for small instances, and observed-order estimation across refinements.
"""

import math
from dataclasses import dataclass

import numpy as np

from .analytic import analytic_temperature, manufactured_problem
from .domain import (
    CircleSpec,
    DomainMask,
    ScalarField,
    SourceSpec,
    build_mask,
    build_source,
    inside_circle,
)
from .errors import (
    CapacityError,
    DimensionError,
    SingularSystemError,
    StudyAbortError,
    UndefinedOrderError,
)
from .grid import GridSpec, spacing
from .solver import SolverConfig, solve

DEFAULT_UNKNOWN_CAP = 4096

# Reference disk problem: unit square, centered circle of radius 0.5,
# uniform source q_dot/k = 5000 over the whole disk.
REFERENCE_K = 200.0  # W/(m K)
REFERENCE_Q_DOT = 1.0e6  # W/m^3
REFERENCE_CIRCLE = CircleSpec(cx=0.5, cy=0.5, radius=0.5)


@dataclass(frozen=True)
class ErrorNorms:
    linf: float  # K
    l2: float  # K
    l1: float  # K
    nx: int
    ny: int


@dataclass(frozen=True)
class StudyRow:
    nx: int
    h: float
    linf: float
    l2: float
    l1: float
    order_l2: float | None  # None on the coarsest row


def error_field(
    t_num: ScalarField, t_ana: ScalarField, mask: DomainMask
) -> ScalarField:
    """Pointwise difference projected onto the domain: 0 off the mask."""
    if t_num.shape != t_ana.shape or t_num.shape != mask.shape:
        raise DimensionError(
            f"shape mismatch: {t_num.shape} vs {t_ana.shape} vs mask {mask.shape}"
        )
    return np.where(mask, t_num - t_ana, 0.0)


def error_norms(e: ScalarField) -> ErrorNorms:
    """Max, RMS, and mean absolute error of an error field.

    The L2 and L1 divisors are the TOTAL node count nx*ny, including
    nodes outside the domain where the error is stored as zero. That is
    the normalization the reference table uses, so it is kept even
    though domain-restricted norms would be more common.
    """
    n_total = e.size
    abs_e = np.abs(e)
    linf = float(abs_e.max()) if n_total else 0.0
    l2 = float(np.sqrt(np.sum(e * e) / n_total)) if n_total else 0.0
    l1 = float(np.sum(abs_e) / n_total) if n_total else 0.0
    return ErrorNorms(linf=linf, l2=l2, l1=l1, nx=e.shape[0], ny=e.shape[1])


def dense_direct_solve(
    grid: GridSpec,
    mask: DomainMask,
    q: ScalarField,
    cap: int = DEFAULT_UNKNOWN_CAP,
) -> ScalarField:
    """Assemble and solve the five-point system directly (small grids only).

    Independent check on the iterative path: builds the dense matrix for
    4*T[i,j] - T[E] - T[W] - T[N] - T[S] = h^2*q[i,j] over masked-true
    unknowns (masked-false neighbors pin to 0) and solves it by Gaussian
    elimination with partial pivoting. O(n^3), hence the unknown cap.
    """
    if mask.shape != grid.shape or q.shape != grid.shape:
        raise DimensionError(
            f"shape mismatch: grid {grid.shape}, mask {mask.shape}, q {q.shape}"
        )
    if mask[0, :].any() or mask[-1, :].any() or mask[:, 0].any() or mask[:, -1].any():
        raise ValueError("mask must be false on the outer grid boundary")
    ii, jj = np.nonzero(mask)
    n = ii.size
    if n > cap:
        raise CapacityError(
            f"{n} unknowns exceeds the direct-solve cap of {cap}"
        )
    out = np.zeros(grid.shape, dtype=np.float64)
    if n == 0:
        return out
    number = -np.ones(grid.shape, dtype=np.int64)
    number[ii, jj] = np.arange(n)
    h2 = spacing(grid) ** 2
    a = np.zeros((n, n), dtype=np.float64)
    b = np.empty(n, dtype=np.float64)
    for row in range(n):
        i = ii[row]
        j = jj[row]
        a[row, row] = 4.0
        for ni, nj in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            col = number[ni, nj]
            if col >= 0:
                a[row, col] = -1.0
        b[row] = h2 * q[i, j]
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        # Cannot happen for a connected five-point Dirichlet system; if it
        # does, the assembly above is wrong.
        raise SingularSystemError(f"direct solve failed: {exc}") from exc
    out[ii, jj] = x
    return out


def observed_order(
    e_coarse: float, e_fine: float, h_coarse: float, h_fine: float
) -> float:
    """Convergence order estimated from two (error, spacing) pairs."""
    if h_fine <= 0.0 or h_coarse <= h_fine:
        raise UndefinedOrderError(
            f"need h_coarse > h_fine > 0, got {h_coarse} and {h_fine}"
        )
    if e_coarse <= 0.0 or e_fine <= 0.0:
        raise UndefinedOrderError(
            "error norm is zero or negative; the iteration error floor was "
            "reached, so the order is undefined (loosen the tolerance pairing)"
        )
    return math.log(e_coarse / e_fine) / math.log(h_coarse / h_fine)


def reference_problem(
    nx: int,
) -> tuple[GridSpec, DomainMask, ScalarField, ScalarField]:
    """The reference disk problem at resolution nx.

    Returns (grid, mask, source field, exact solution). The source region
    is the full disk, so the exact solution is the closed-form radial
    profile.
    """
    grid = GridSpec(nx=nx, ny=nx, length_x=1.0, length_y=1.0)
    source = SourceSpec(k=REFERENCE_K, q_dot=REFERENCE_Q_DOT)
    mask = build_mask(grid, REFERENCE_CIRCLE)
    q = build_source(grid, inside_circle(grid, REFERENCE_CIRCLE), source)
    t_exact = analytic_temperature(grid, REFERENCE_CIRCLE, source)
    return grid, mask, q, t_exact


def study_config(nx: int, threads: int = 1) -> SolverConfig:
    """Per-size solver settings that keep iteration error subdominant.

    Tolerance min(1e-12, h^4) sits below the O(h^2) discretization error
    being measured; the iteration cap 10*nx^2 tracks Jacobi's O(nx^2)
    sweep count for fixed error reduction.
    """
    h = 1.0 / (nx - 1)
    return SolverConfig(
        tolerance=min(1.0e-12, h**4),
        max_iter=10 * nx * nx,
        threads=threads,
    )


def convergence_study(
    problem: str,
    sizes,
    config: SolverConfig | None = None,
    threads: int = 1,
    backend: str | None = None,
) -> list[StudyRow]:
    """Refinement study: solve at each size, tabulate norms and L2 orders.

    problem is "circle" (disk with staircase boundary) or "manufactured"
    (product of sines, geometry-exact). With config=None each size gets
    study_config(nx); passing a config applies it to every size as-is.
    Any non-converged solve aborts the study.
    """
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(n < 3 for n in sizes):
        raise ValueError(f"each size must be >= 3, got {sizes}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be strictly increasing, got {sizes}")
    if problem not in ("circle", "manufactured"):
        raise ValueError(f"unknown problem {problem!r}")

    rows: list[StudyRow] = []
    for nx in sizes:
        if problem == "circle":
            grid, mask, q, t_exact = reference_problem(nx)
        else:
            grid = GridSpec(nx=nx, ny=nx, length_x=1.0, length_y=1.0)
            t_exact, q, mask = manufactured_problem(grid)
        cfg = config if config is not None else study_config(nx, threads=threads)
        t, report = solve(grid, mask, q, cfg, backend=backend)
        if not report.converged:
            raise StudyAbortError(
                nx,
                f"size {nx} did not converge within {cfg.max_iter} iterations "
                f"(final update {report.final_max_update:.3e} > tolerance "
                f"{cfg.tolerance:.3e})",
            )
        norms = error_norms(error_field(t, t_exact, mask))
        h = spacing(grid)
        order = None
        if rows:
            order = observed_order(rows[-1].l2, norms.l2, rows[-1].h, h)
        rows.append(
            StudyRow(
                nx=nx,
                h=h,
                linf=norms.linf,
                l2=norms.l2,
                l1=norms.l1,
                order_l2=order,
            )
        )
    return rows
