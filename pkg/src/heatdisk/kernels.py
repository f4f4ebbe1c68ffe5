"""Hot stencil kernels: numba-jitted loops with a pure-numpy fallback.

Backend selection, once at import, via the HEATDISK_BACKEND environment
variable: "numba" (require it), "numpy" (force the fallback), or "auto"
(default: numba if importable).

Both backends evaluate the update in the same left-to-right operand
order, so fields are bitwise identical between backends, across thread
counts, and across runs. Keep the numba kernels free of fastmath: any
reassociation would break that guarantee.
"""

import os

import numpy as np

from .errors import ConfigError

BACKEND_ENV_VAR = "HEATDISK_BACKEND"


def resolve_backend(value: str | None) -> str:
    """Normalize a backend request to 'auto', 'numba', or 'numpy'."""
    if value is None or value.strip() == "":
        return "auto"
    choice = value.strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ConfigError(
            f"{BACKEND_ENV_VAR} must be 'auto', 'numba', or 'numpy', got {value!r}"
        )
    return choice


_requested = resolve_backend(os.environ.get(BACKEND_ENV_VAR))

if _requested == "numpy":
    HAS_NUMBA = False
else:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        HAS_NUMBA = False

#: Backend actually in use for dispatch (module-wide default).
BACKEND = "numba" if HAS_NUMBA else "numpy"


def block_bounds(n: int, parts: int) -> list[tuple[int, int]]:
    """Split range(n) into contiguous near-equal blocks, one per worker."""
    parts = max(1, min(parts, n))
    base, extra = divmod(n, parts)
    bounds = []
    start = 0
    for b in range(parts):
        stop = start + base + (1 if b < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _sweep_numba(t_old, q, mask, h2, t_new, i0, i1):
        # Update order is fixed: east + west + north + south + h^2*q, then
        # the 1/4 factor. The running total exists to expose non-finite
        # values that a max() comparison would silently drop.
        ny = t_old.shape[1]
        max_upd = 0.0
        total = 0.0
        for i in range(i0, i1):
            for j in range(ny):
                if mask[i, j]:
                    v = 0.25 * (t_old[i + 1, j] + t_old[i - 1, j]
                                + t_old[i, j + 1] + t_old[i, j - 1]
                                + h2 * q[i, j])
                    t_new[i, j] = v
                    d = abs(v - t_old[i, j])
                    if d > max_upd:
                        max_upd = d
                    total += v
                else:
                    t_new[i, j] = 0.0
        return max_upd, total

    @njit(cache=True, nogil=True)
    def _residual_numba(t, q, mask, h2, out, i0, i1):
        ny = t.shape[1]
        r_inf = 0.0
        for i in range(i0, i1):
            for j in range(ny):
                if mask[i, j]:
                    r = (-4.0 * t[i, j] + t[i + 1, j] + t[i - 1, j]
                         + t[i, j + 1] + t[i, j - 1]) / h2 + q[i, j]
                    out[i, j] = r
                    a = abs(r)
                    if a > r_inf:
                        r_inf = a
                else:
                    out[i, j] = 0.0
        return r_inf

else:
    _sweep_numba = None
    _residual_numba = None


def sweep_numpy(t_old, q, mask, h2, t_new):
    """Vectorized whole-grid sweep, operand order identical to the jit loop."""
    t_new[...] = 0.0
    inner = mask[1:-1, 1:-1]
    v = 0.25 * (t_old[2:, 1:-1] + t_old[:-2, 1:-1]
                + t_old[1:-1, 2:] + t_old[1:-1, :-2]
                + h2 * q[1:-1, 1:-1])
    np.copyto(t_new[1:-1, 1:-1], v, where=inner)
    diffs = np.where(inner, np.abs(v - t_old[1:-1, 1:-1]), 0.0)
    total = float(np.where(inner, v, 0.0).sum())
    return float(diffs.max()), total


def residual_numpy(t, q, mask, h2, out):
    out[...] = 0.0
    inner = mask[1:-1, 1:-1]
    r = (-4.0 * t[1:-1, 1:-1] + t[2:, 1:-1] + t[:-2, 1:-1]
         + t[1:-1, 2:] + t[1:-1, :-2]) / h2 + q[1:-1, 1:-1]
    np.copyto(out[1:-1, 1:-1], r, where=inner)
    return float(np.where(inner, np.abs(r), 0.0).max())


def active_backend(backend: str | None = None) -> str:
    """Concrete backend for a request; 'auto'/None means the module default."""
    choice = resolve_backend(backend)
    if choice == "auto":
        return BACKEND
    if choice == "numba" and not HAS_NUMBA:
        raise ConfigError("numba backend requested but numba is not available")
    return choice


def sweep_block(t_old, q, mask, h2, t_new, i0, i1):
    """One Jacobi sweep over rows [i0, i1); numba path only.

    Reads only t_old, writes only rows [i0, i1) of t_new, so disjoint
    blocks may run concurrently. Returns (block max update, block sum).
    """
    return _sweep_numba(t_old, q, mask, h2, t_new, i0, i1)


def sweep_full(t_old, q, mask, h2, t_new, backend=None):
    """One whole-grid Jacobi sweep on the chosen backend."""
    if active_backend(backend) == "numba":
        return _sweep_numba(t_old, q, mask, h2, t_new, 0, t_old.shape[0])
    return sweep_numpy(t_old, q, mask, h2, t_new)


def residual_full(t, q, mask, h2, out, backend=None):
    """Five-point residual field on the chosen backend; returns r_inf."""
    if active_backend(backend) == "numba":
        return _residual_numba(t, q, mask, h2, out, 0, t.shape[0])
    return residual_numpy(t, q, mask, h2, out)
