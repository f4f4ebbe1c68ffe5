"""File formats: run configs, field CSV, quick-look PGM, reports, tables.

All text output is ASCII with single-newline line endings; floats are
printed with 17 significant digits so every round trip is bitwise exact.
"""

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .bench import BenchRow
from .domain import CircleSpec, ScalarField, SourceSpec
from .errors import ConfigError, DimensionError, FieldParseError
from .grid import GridSpec, axis_coords
from .solver import SolveReport, SolverConfig
from .validation import ErrorNorms, StudyRow

FIELD_CSV_HEADER = "i,j,x,y,value"
STUDY_CSV_HEADER = "nx,h,linf,l2,l1,order_l2"
BENCH_CSV_HEADER = "nx,threads,iterations,wall_time_s,updates_per_s,checksum"


@dataclass(frozen=True)
class RunSpec:
    """Full problem specification; defaults are the reference run."""

    k: float = 200.0  # W/(m K)
    length: float = 1.0  # m, square side
    nx: int = 400
    ny: int = 400
    cx: float = 0.5  # m
    cy: float = 0.5  # m
    r_domain: float = 0.5  # m, conductor radius
    r0: float = 0.5  # m, heated-region radius
    q_dot: float = 1.0e6  # W/m^3
    tolerance: float = 1.0e-15  # K
    max_iter: int = 400_000
    print_interval: int = 10_000
    threads: int = 1

    def validate(self) -> None:
        if self.nx != self.ny:
            raise ConfigError(
                f"Nx and Ny must be equal on the square domain, got Nx={self.nx} "
                f"Ny={self.ny}"
            )

    def grid(self) -> GridSpec:
        return GridSpec(
            nx=self.nx, ny=self.ny, length_x=self.length, length_y=self.length
        )

    def domain_circle(self) -> CircleSpec:
        return CircleSpec(cx=self.cx, cy=self.cy, radius=self.r_domain)

    def source_circle(self) -> CircleSpec:
        return CircleSpec(cx=self.cx, cy=self.cy, radius=self.r0)

    def source(self) -> SourceSpec:
        return SourceSpec(k=self.k, q_dot=self.q_dot)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            tolerance=self.tolerance,
            max_iter=self.max_iter,
            report_interval=self.print_interval,
            threads=self.threads,
        )


def _positive(value: float) -> bool:
    return value > 0.0


def _non_negative(value: float) -> bool:
    return value >= 0.0


def _any(value: float) -> bool:
    return True


def _at_least_3(value: int) -> bool:
    return value >= 3


def _at_least_1(value: int) -> bool:
    return value >= 1


# config key -> (RunSpec field, converter, validity predicate, requirement text)
_CONFIG_KEYS = {
    "k": ("k", float, _positive, "> 0"),
    "L": ("length", float, _positive, "> 0"),
    "Nx": ("nx", int, _at_least_3, ">= 3"),
    "Ny": ("ny", int, _at_least_3, ">= 3"),
    "cx": ("cx", float, _any, ""),
    "cy": ("cy", float, _any, ""),
    "R_domain": ("r_domain", float, _positive, "> 0"),
    "r0": ("r0", float, _positive, "> 0"),
    "q_dot": ("q_dot", float, _non_negative, ">= 0"),
    "tolerance": ("tolerance", float, _positive, "> 0"),
    "max_iter": ("max_iter", int, _at_least_1, ">= 1"),
    "print_interval": ("print_interval", int, _at_least_1, ">= 1"),
    "threads": ("threads", int, _at_least_1, ">= 1"),
}


def parse_config(source: "str | os.PathLike") -> RunSpec:
    """Parse key=value configuration from a file path or literal text.

    A string containing '=' or a newline (or an empty string) is treated
    as config text, anything else as a path. '#' starts a comment, blank
    lines are ignored, unknown keys are errors, and unset keys keep the
    reference-run defaults.
    """
    if isinstance(source, os.PathLike):
        text = Path(source).read_text(encoding="ascii")
    elif "\n" in source or "=" in source or source.strip() == "":
        text = source
    else:
        text = Path(source).read_text(encoding="ascii")

    spec = RunSpec()
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        field, convert, valid, requirement = _CONFIG_KEYS[key]
        try:
            parsed = convert(value)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: cannot parse {key}={value!r} as "
                f"{convert.__name__}"
            ) from None
        if not valid(parsed):
            raise ConfigError(
                f"line {lineno}: {key} must be {requirement}, got {value}"
            )
        spec = replace(spec, **{field: parsed})
    spec.validate()
    return spec


def format_config(spec: RunSpec) -> str:
    """Canonical key=value text for a RunSpec; parse_config inverts it."""
    lines = []
    for key, (field, _, _, _) in _CONFIG_KEYS.items():
        lines.append(f"{key}={getattr(spec, field)!r}")
    return "\n".join(lines) + "\n"


def write_field_csv(field: ScalarField, grid: GridSpec, path) -> None:
    """Write one row per node: i,j,x,y,value; j outer, i inner.

    17 significant digits make the value column round-trip exact for
    doubles.
    """
    if field.shape != grid.shape:
        raise DimensionError(
            f"field shape {field.shape} does not match grid {grid.shape}"
        )
    xs, ys = axis_coords(grid)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(FIELD_CSV_HEADER + "\n")
        for j in range(grid.ny):
            y = ys[j]
            for i in range(grid.nx):
                fh.write(f"{i},{j},{xs[i]:.17g},{y:.17g},{field[i, j]:.17g}\n")


def read_field_csv(path) -> tuple[ScalarField, tuple[float, float]]:
    """Read a field CSV back; returns (field, (length_x, length_y)).

    Dimensions come from the maximum indices plus one; the file must
    contain exactly one row per node.
    """
    with open(path, "r", encoding="ascii", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FieldParseError("missing header")
    if lines[0] != FIELD_CSV_HEADER:
        raise FieldParseError(
            f"expected header {FIELD_CSV_HEADER!r}, got {lines[0]!r}", line=1
        )
    entries: dict[tuple[int, int], tuple[float, float, float]] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw:
            continue
        parts = raw.split(",")
        if len(parts) != 5:
            raise FieldParseError(f"expected 5 fields, got {len(parts)}", line=lineno)
        try:
            i = int(parts[0])
            j = int(parts[1])
            x = float(parts[2])
            y = float(parts[3])
            value = float(parts[4])
        except ValueError:
            raise FieldParseError(f"malformed row {raw!r}", line=lineno) from None
        if i < 0 or j < 0:
            raise FieldParseError(f"negative node index ({i}, {j})", line=lineno)
        if (i, j) in entries:
            raise FieldParseError(f"duplicate node ({i}, {j})", line=lineno)
        entries[(i, j)] = (x, y, value)
    if not entries:
        raise FieldParseError("no data rows")
    nx = max(i for i, _ in entries) + 1
    ny = max(j for _, j in entries) + 1
    if len(entries) != nx * ny:
        raise FieldParseError(
            f"expected {nx * ny} rows for a {nx}x{ny} grid, found {len(entries)}"
        )
    field = np.empty((nx, ny), dtype=np.float64)
    for (i, j), (_, _, value) in entries.items():
        field[i, j] = value
    length_x = entries[(nx - 1, 0)][0]
    length_y = entries[(0, ny - 1)][1]
    return field, (length_x, length_y)


def write_field_pgm(field: ScalarField, path) -> None:
    """Binary PGM quick-look: min->0, max->255, constant field all 0.

    Rows run from the top of the image down, so j is written from ny-1
    to 0 and the vertical axis matches physical y pointing up.
    """
    if not np.all(np.isfinite(field)):
        raise ValueError("field must be finite for image output")
    nx, ny = field.shape
    lo = float(field.min())
    hi = float(field.max())
    if hi == lo:
        pixels = np.zeros((nx, ny), dtype=np.uint8)
    else:
        pixels = np.rint(255.0 * (field - lo) / (hi - lo)).astype(np.uint8)
    image = pixels.T[::-1, :]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(image).tobytes())


def write_report_json(report: SolveReport, norms: ErrorNorms, path) -> None:
    """Solve outcome and error norms as JSON with a stable key order."""
    payload = {
        "iterations_run": report.iterations_run,
        "converged": bool(report.converged),
        "final_max_update": report.final_max_update,
        "wall_time_s": report.wall_time,
        "linf": norms.linf,
        "l2": norms.l2,
        "l1": norms.l1,
        "nx": norms.nx,
        "ny": norms.ny,
    }
    with open(path, "w", encoding="ascii", newline="") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_study_csv(rows: "list[StudyRow]", path) -> None:
    """Convergence-study table; order_l2 empty on the coarsest row."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(STUDY_CSV_HEADER + "\n")
        for row in rows:
            order = "" if row.order_l2 is None else f"{row.order_l2:.17g}"
            fh.write(
                f"{row.nx},{row.h:.17g},{row.linf:.17g},{row.l2:.17g},"
                f"{row.l1:.17g},{order}\n"
            )


def write_bench_csv(rows: "list[BenchRow]", path) -> None:
    """Benchmark table with the fixed six-column layout."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(BENCH_CSV_HEADER + "\n")
        for row in rows:
            fh.write(
                f"{row.nx},{row.threads},{row.iterations},{row.wall_time:.17g},"
                f"{row.updates_per_second:.17g},{row.checksum:.17g}\n"
            )
