"""Finite-difference solver and verification harness for a heated disk.

Solves the steady heat equation on a circular conductor embedded in a
Cartesian grid (mask-imposed zero boundary), validates against the
closed-form radial profile and a dense direct-solve oracle, measures
error norms and observed convergence order, and benchmarks the sweep
kernel across thread counts and backends.
"""

from .analytic import analytic_temperature, manufactured_problem
from .bench import BenchRow, bench_solve
from .domain import (
    CircleSpec,
    DomainMask,
    ScalarField,
    SourceSpec,
    apply_mask,
    build_mask,
    build_source,
    inside_circle,
)
from .errors import (
    CapacityError,
    ConfigError,
    DimensionError,
    DivergenceError,
    FieldParseError,
    SingularSystemError,
    StudyAbortError,
    UndefinedOrderError,
)
from .grid import GridSpec, axis_coords, node_coord, spacing
from .io import (
    RunSpec,
    format_config,
    parse_config,
    read_field_csv,
    write_bench_csv,
    write_field_csv,
    write_field_pgm,
    write_report_json,
    write_study_csv,
)
from .kernels import BACKEND_ENV_VAR, active_backend, resolve_backend
from .solver import (
    SolveReport,
    SolverConfig,
    jacobi_sweep,
    residual,
    run_sweeps,
    solve,
)
from .validation import (
    DEFAULT_UNKNOWN_CAP,
    ErrorNorms,
    StudyRow,
    convergence_study,
    dense_direct_solve,
    error_field,
    error_norms,
    observed_order,
    reference_problem,
    study_config,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_ENV_VAR",
    "BenchRow",
    "CapacityError",
    "CircleSpec",
    "ConfigError",
    "DEFAULT_UNKNOWN_CAP",
    "DimensionError",
    "DivergenceError",
    "DomainMask",
    "ErrorNorms",
    "FieldParseError",
    "GridSpec",
    "RunSpec",
    "ScalarField",
    "SingularSystemError",
    "SolveReport",
    "SolverConfig",
    "SourceSpec",
    "StudyAbortError",
    "StudyRow",
    "UndefinedOrderError",
    "active_backend",
    "analytic_temperature",
    "apply_mask",
    "axis_coords",
    "bench_solve",
    "build_mask",
    "build_source",
    "convergence_study",
    "dense_direct_solve",
    "error_field",
    "error_norms",
    "format_config",
    "inside_circle",
    "jacobi_sweep",
    "manufactured_problem",
    "node_coord",
    "observed_order",
    "parse_config",
    "read_field_csv",
    "reference_problem",
    "residual",
    "resolve_backend",
    "run_sweeps",
    "solve",
    "spacing",
    "study_config",
    "write_bench_csv",
    "write_field_csv",
    "write_field_pgm",
    "write_report_json",
    "write_study_csv",
]
