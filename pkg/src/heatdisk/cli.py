"""Command-line driver: solve, converge, oracle, and bench workflows.

Exit codes: 0 ok, 2 config or I/O problem, 3 divergence, 4 aborted
study, 5 oracle mismatch, 6 determinism violation. Progress and
warnings go to standard error; standard output stays machine-parseable.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io as hio
from .analytic import analytic_temperature
from .bench import bench_solve
from .domain import build_mask, build_source, inside_circle
from .errors import (
    CapacityError,
    ConfigError,
    DimensionError,
    DivergenceError,
    FieldParseError,
    StudyAbortError,
)
from .grid import spacing
from .solver import SolverConfig, residual, solve
from .validation import (
    convergence_study,
    dense_direct_solve,
    error_field,
    error_norms,
    reference_problem,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_STUDY_ABORT = 4
EXIT_ORACLE_MISMATCH = 5
EXIT_DETERMINISM = 6

ORACLE_AGREEMENT = 1.0e-10  # K, Jacobi vs direct solve

# (args attribute, RunSpec field) pairs applied over the config file.
_SOLVE_OVERRIDES = [
    ("k", "k"),
    ("length", "length"),
    ("cx", "cx"),
    ("cy", "cy"),
    ("r_domain", "r_domain"),
    ("r0", "r0"),
    ("q_dot", "q_dot"),
    ("tol", "tolerance"),
    ("max_iter", "max_iter"),
    ("print_interval", "print_interval"),
    ("threads", "threads"),
]


def _csv_ints(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def cmd_solve(args) -> int:
    spec = hio.parse_config(args.config) if args.config else hio.RunSpec()
    if args.nx is not None:
        spec = replace(spec, nx=args.nx, ny=args.nx)
    for attr, field in _SOLVE_OVERRIDES:
        value = getattr(args, attr)
        if value is not None:
            spec = replace(spec, **{field: value})
    spec.validate()

    emit = {part.strip() for part in args.emit.split(",") if part.strip()}
    unknown = emit - {"csv", "pgm", "json"}
    if unknown:
        raise ConfigError(f"unknown emit format(s): {', '.join(sorted(unknown))}")
    if not emit:
        raise ConfigError("emit list is empty")

    grid = spec.grid()
    circle = spec.domain_circle()
    mask = build_mask(grid, circle)
    q = build_source(grid, inside_circle(grid, spec.source_circle()), spec.source())

    def progress(iteration: int, max_update: float) -> None:
        print(f"iter={iteration} max_update={max_update:.6e}", file=sys.stderr)

    t, report = solve(grid, mask, q, spec.solver_config(), on_progress=progress)
    norms = error_norms(error_field(t, analytic_temperature(grid, circle, spec.source()), mask))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if "csv" in emit:
        hio.write_field_csv(t, grid, out_dir / "field.csv")
    if "pgm" in emit:
        hio.write_field_pgm(t, out_dir / "field.pgm")
    if "json" in emit:
        hio.write_report_json(report, norms, out_dir / "report.json")

    print(
        f"iterations={report.iterations_run} converged={report.converged} "
        f"linf={norms.linf:.6g} l2={norms.l2:.6g} l1={norms.l1:.6g}"
    )
    return EXIT_OK


def cmd_converge(args) -> int:
    rows = convergence_study(args.problem, args.sizes)
    for row in rows:
        order = "-" if row.order_l2 is None else f"{row.order_l2:.4f}"
        print(f"nx={row.nx} h={row.h:.6g} l2={row.l2:.6e} order_l2={order}")
    if args.out:
        hio.write_study_csv(rows, args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    grid, mask, q, _ = reference_problem(args.nx)
    oracle = dense_direct_solve(grid, mask, q)
    config = SolverConfig(tolerance=args.tol, max_iter=100 * args.nx * args.nx)
    t, _ = solve(grid, mask, q, config)
    h = spacing(grid)
    discrepancy = float(np.max(np.abs(t - oracle)))
    _, r_jacobi = residual(t, q, mask, h)
    _, r_oracle = residual(oracle, q, mask, h)
    print(
        f"max_discrepancy={discrepancy:.6e} jacobi_r_inf={r_jacobi:.6e} "
        f"oracle_r_inf={r_oracle:.6e}"
    )
    if discrepancy <= ORACLE_AGREEMENT:
        return EXIT_OK
    print(
        f"error: Jacobi and direct solve disagree by {discrepancy:.6e} "
        f"(limit {ORACLE_AGREEMENT:.1e})",
        file=sys.stderr,
    )
    return EXIT_ORACLE_MISMATCH


def cmd_bench(args) -> int:
    if args.iters < 1:
        raise ConfigError(f"--iters must be >= 1, got {args.iters}")
    if args.repeats < 1:
        raise ConfigError(f"--repeats must be >= 1, got {args.repeats}")
    rows = bench_solve(
        args.sizes,
        args.threads,
        fixed_iterations=args.iters,
        repeats=args.repeats,
        backend=args.backend,
    )
    print(f"{'nx':>6} {'threads':>7} {'iters':>8} {'wall_s':>12} "
          f"{'updates/s':>14} {'checksum':>20}")
    for row in rows:
        print(
            f"{row.nx:>6} {row.threads:>7} {row.iterations:>8} "
            f"{row.wall_time:>12.6f} {row.updates_per_second:>14.4g} "
            f"{row.checksum:>20.12e}"
        )
        if row.over_cap:
            print(
                f"warning: {row.threads} threads exceeds the machine's core "
                f"count (nx={row.nx})",
                file=sys.stderr,
            )
    if args.out:
        hio.write_bench_csv(rows, args.out)

    checksums: dict[tuple[int, int], set[float]] = {}
    for row in rows:
        checksums.setdefault((row.nx, row.iterations), set()).add(row.checksum)
    for (nx, iters), sums in checksums.items():
        if len(sums) > 1:
            print(
                f"error: determinism violation at nx={nx} iters={iters}: "
                f"checksums {sorted(sums)!r} differ across thread counts",
                file=sys.stderr,
            )
            return EXIT_DETERMINISM
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatdisk",
        description="Finite-difference heated-disk solver and verification harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve the disk problem and write outputs")
    s.add_argument("--config", help="key=value configuration file")
    s.add_argument("--nx", type=int, help="nodes per side (sets Nx and Ny)")
    s.add_argument("--k", type=float, help="thermal conductivity, W/(m K)")
    s.add_argument("--length", type=float, help="square side L, m")
    s.add_argument("--cx", type=float, help="circle center x, m")
    s.add_argument("--cy", type=float, help="circle center y, m")
    s.add_argument("--r-domain", type=float, help="conductor radius, m")
    s.add_argument("--r0", type=float, help="heated-region radius, m")
    s.add_argument("--q-dot", type=float, help="volumetric heating, W/m^3")
    s.add_argument("--tol", type=float, help="max-update stopping tolerance, K")
    s.add_argument("--max-iter", type=int, help="iteration cap")
    s.add_argument("--print-interval", type=int, help="progress cadence")
    s.add_argument("--threads", type=int, help="sweep parallelism")
    s.add_argument("--out-dir", default=".", help="output directory")
    s.add_argument(
        "--emit",
        default="json",
        help="comma list of outputs: csv, pgm, json (default json)",
    )
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("converge", help="grid refinement study")
    c.add_argument(
        "--problem",
        choices=("circle", "manufactured"),
        required=True,
        help="disk problem or geometry-exact manufactured problem",
    )
    c.add_argument("--sizes", type=_csv_ints, required=True, help="e.g. 17,33,65")
    c.add_argument("--out", help="write the study table CSV here")
    c.set_defaults(func=cmd_converge)

    o = sub.add_parser("oracle", help="cross-check Jacobi against a direct solve")
    o.add_argument("--nx", type=int, default=17, help="grid size (small)")
    o.add_argument("--tol", type=float, default=1.0e-14, help="Jacobi tolerance")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="time the sweep kernel")
    b.add_argument("--sizes", type=_csv_ints, default=[100, 200])
    b.add_argument("--threads", type=_csv_ints, default=[1, 2])
    b.add_argument("--iters", type=int, default=1000, help="sweeps per run")
    b.add_argument("--repeats", type=int, default=3, help="timed repeats")
    b.add_argument("--out", help="write the benchmark CSV here")
    b.add_argument(
        "--backend",
        choices=("auto", "numba", "numpy"),
        help="kernel backend (default: environment selection)",
    )
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except StudyAbortError as exc:
        print(f"error: study aborted: {exc}", file=sys.stderr)
        return EXIT_STUDY_ABORT
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, FieldParseError, DimensionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
