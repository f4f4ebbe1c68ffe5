"""Uniform Cartesian mesh shared by every other module.

Nodes are placed at x_i = i*h, y_j = j*h with both domain endpoints
included, so h = L/(N-1). Spacing must be identical in x and y because
the five-point update uses a single h.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Node counts and physical extents of the mesh."""

    nx: int
    ny: int
    length_x: float = 1.0
    length_y: float = 1.0

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"grid needs nx, ny >= 3, got {self.nx}x{self.ny}")
        if not (self.length_x > 0.0 and self.length_y > 0.0):
            raise ValueError("grid extents must be positive")
        # Single h for both directions; reject anisotropic spacing outright.
        if self.length_x / (self.nx - 1) != self.length_y / (self.ny - 1):
            raise ValueError(
                "unequal spacing: length_x/(nx-1) != length_y/(ny-1) "
                f"({self.length_x}/{self.nx - 1} vs {self.length_y}/{self.ny - 1})"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)


def spacing(spec: GridSpec) -> float:
    """Mesh spacing h = length_x/(nx-1), identical in both directions."""
    return spec.length_x / (spec.nx - 1)


def node_coord(spec: GridSpec, i: int, j: int) -> tuple[float, float]:
    """Physical position of node (i, j), computed as (i*h, j*h).

    Multiplicative form, never accumulated, so coordinates carry no drift.
    """
    if not (0 <= i < spec.nx and 0 <= j < spec.ny):
        raise IndexError(f"node ({i}, {j}) outside {spec.nx}x{spec.ny} grid")
    h = spacing(spec)
    return (i * h, j * h)


def axis_coords(spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate arrays (xs, ys) along each axis, elementwise i*h."""
    h = spacing(spec)
    xs = np.arange(spec.nx, dtype=np.float64) * h
    ys = np.arange(spec.ny, dtype=np.float64) * h
    return xs, ys
