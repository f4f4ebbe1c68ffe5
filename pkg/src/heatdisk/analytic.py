"""Closed-form reference solutions.

Two references: the radial profile of a uniformly heated disk held at
zero on its rim, and a manufactured product-of-sines problem on the full
square for clean order-of-accuracy measurements (no staircase boundary).
"""

import numpy as np

from .domain import CircleSpec, DomainMask, ScalarField, SourceSpec, inside_circle
from .errors import DimensionError
from .grid import GridSpec, axis_coords


def analytic_temperature(
    grid: GridSpec, circle: CircleSpec, source: SourceSpec
) -> ScalarField:
    """Exact steady temperature (Q/4)*(R^2 - r^2) inside the disk, 0 outside.

    Support uses the same inclusive r <= R rule as build_mask, so the
    numerical and analytic fields agree node-by-node on where they are
    defined; peak value is Q*R^2/4 at the center.
    """
    q_norm = source.normalized
    xs, ys = axis_coords(grid)
    r2 = (xs - circle.cx)[:, None] ** 2 + (ys - circle.cy)[None, :] ** 2
    inside = inside_circle(grid, circle)
    return np.where(inside, 0.25 * q_norm * (circle.radius**2 - r2), 0.0)


def manufactured_problem(
    grid: GridSpec,
) -> tuple[ScalarField, ScalarField, DomainMask]:
    """Product-of-sines exact solution with its matching source and mask.

    t(x, y) = sin(pi*x/L) * sin(pi*y/L),  q = (2*pi^2/L^2) * t,
    so that laplacian(t) = -q. t vanishes on the square's boundary, which
    makes the masked homogeneous-Dirichlet setup exact: the mask is every
    interior node, and no geometry error enters the discretization.
    """
    if grid.nx != grid.ny or grid.length_x != grid.length_y:
        raise DimensionError(
            f"manufactured problem needs a square grid, got {grid.nx}x{grid.ny} "
            f"on {grid.length_x} x {grid.length_y}"
        )
    length = grid.length_x
    xs, ys = axis_coords(grid)
    sx = np.sin(np.pi * xs / length)
    sy = np.sin(np.pi * ys / length)
    # sin(pi) rounds to ~1e-16, not 0; pin the exact boundary values.
    sx[0] = sx[-1] = 0.0
    sy[0] = sy[-1] = 0.0
    t_exact = sx[:, None] * sy[None, :]
    q_field = (2.0 * np.pi**2 / length**2) * t_exact
    mask = np.zeros(grid.shape, dtype=bool)
    mask[1:-1, 1:-1] = True
    return t_exact, q_field, mask
