"""Circular-conductor geometry as binary masks on the Cartesian grid.

Fields are plain float64 arrays of shape (nx, ny) indexed [i, j] with i
along x; masks are bool arrays of the same shape. Geometry is imposed
algebraically: nodes outside the conductor are held at zero, which also
enforces the homogeneous Dirichlet condition at the circle.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .grid import GridSpec

# Node-indexed real field (temperature, source, error, residual).
ScalarField = np.ndarray
# Per-node characteristic function; outer grid boundary is always False.
DomainMask = np.ndarray


@dataclass(frozen=True)
class CircleSpec:
    """Circle of radius R centered at (cx, cy), in meters."""

    cx: float
    cy: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class SourceSpec:
    """Conductivity k and volumetric heating rate q_dot.

    The normalized source q_dot/k is always derived, never stored, so the
    triple can never go inconsistent.
    """

    k: float
    q_dot: float

    def __post_init__(self):
        if not self.k > 0.0:
            raise ValueError(f"thermal conductivity must be positive, got {self.k}")
        if self.q_dot < 0.0:
            raise ValueError(f"heat generation rate must be >= 0, got {self.q_dot}")

    @property
    def normalized(self) -> float:
        """Source term of the Poisson problem, q_dot/k, in K/m^2."""
        return self.q_dot / self.k


def inside_circle(grid: GridSpec, circle: CircleSpec) -> np.ndarray:
    """Inclusive membership test r^2 <= R^2 at every node.

    Evaluated in index units: node (i, j) maps to (i, j) and the circle to
    center (cx*s, cy*s), radius R*s with s = (nx-1)/length_x. For centered
    circles these scaled quantities are half-integers, so the comparison is
    exact and bit-for-bit symmetric under grid reflections; comparing
    (i*h - cx)^2 directly would misclassify knife-edge nodes by one ulp.
    """
    s = (grid.nx - 1) / grid.length_x
    ci = circle.cx * s
    cj = circle.cy * s
    rs = circle.radius * s
    di = np.arange(grid.nx, dtype=np.float64) - ci
    dj = np.arange(grid.ny, dtype=np.float64) - cj
    return di[:, None] ** 2 + dj[None, :] ** 2 <= rs * rs


def build_mask(grid: GridSpec, circle: CircleSpec) -> DomainMask:
    """Characteristic function of the circle, outer boundary excluded.

    Nodes on the outer grid boundary are always False: the five-point
    update has no neighbors there, and the exact solution vanishes at the
    tangent points anyway, so pinning them at zero costs nothing.
    """
    mask = inside_circle(grid, circle)
    mask[0, :] = False
    mask[-1, :] = False
    mask[:, 0] = False
    mask[:, -1] = False
    return mask


def build_source(grid: GridSpec, source_mask: DomainMask, source: SourceSpec) -> ScalarField:
    """Masked source field: q_dot/k on source_mask, zero elsewhere."""
    if source_mask.shape != grid.shape:
        raise DimensionError(
            f"mask shape {source_mask.shape} does not match grid {grid.shape}"
        )
    return np.where(source_mask, source.normalized, 0.0)


def apply_mask(field: ScalarField, mask: DomainMask) -> ScalarField:
    """Zero the field outside the mask; masked values pass through bit-for-bit."""
    if field.shape != mask.shape:
        raise DimensionError(f"field shape {field.shape} vs mask {mask.shape}")
    return np.where(mask, field, 0.0)
