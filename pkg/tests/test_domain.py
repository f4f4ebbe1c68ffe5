"""Circle membership, domain masks, and source fields."""

import numpy as np
import pytest

from heatdisk.domain import (
    CircleSpec,
    SourceSpec,
    apply_mask,
    build_mask,
    build_source,
    inside_circle,
)
from heatdisk.errors import DimensionError
from heatdisk.grid import GridSpec

CIRCLE = CircleSpec(cx=0.5, cy=0.5, radius=0.5)


def test_center_inside_corner_outside():
    g = GridSpec(nx=21, ny=21)
    mask = build_mask(g, CIRCLE)
    assert mask[10, 10]
    assert not mask[0, 0]
    assert not mask[20, 20]


def test_tangent_nodes_belong_to_circle_but_not_mask():
    # (0, 0.5) sits exactly on the circle (r == R, inclusive) but is an
    # outer-boundary node, which the mask always drops.
    g = GridSpec(nx=21, ny=21)
    inside = inside_circle(g, CIRCLE)
    mask = build_mask(g, CIRCLE)
    for i, j in ((0, 10), (20, 10), (10, 0), (10, 20)):
        assert inside[i, j]
        assert not mask[i, j]


@pytest.mark.parametrize("nx", [5, 21, 51])
def test_mask_boundary_always_false(nx):
    g = GridSpec(nx=nx, ny=nx)
    mask = build_mask(g, CIRCLE)
    assert not mask[0, :].any()
    assert not mask[-1, :].any()
    assert not mask[:, 0].any()
    assert not mask[:, -1].any()


def test_exact_rim_nodes_are_included():
    # At nx=51 the circle has radius 25 in index units and
    # 25^2 = 7^2 + 24^2 = 15^2 + 20^2, so interior nodes sit exactly on
    # the rim; inclusive membership must keep all of them, in every
    # quadrant, and drop the node one step further out.
    g = GridSpec(nx=51, ny=51)
    mask = build_mask(g, CIRCLE)
    c = 25
    for di, dj in ((7, 24), (24, 7), (15, 20), (20, 15)):
        for si in (1, -1):
            for sj in (1, -1):
                assert mask[c + si * di, c + sj * dj]
    assert not mask[c + 8, c + 24]  # 8^2 + 24^2 = 640 > 625


@pytest.mark.parametrize("nx", [20, 21, 51])
def test_mask_reflection_symmetry_is_bitwise(nx):
    g = GridSpec(nx=nx, ny=nx)
    mask = build_mask(g, CIRCLE)
    assert np.array_equal(mask, mask[::-1, :])
    assert np.array_equal(mask, mask[:, ::-1])
    assert np.array_equal(mask, mask.T)


def test_smaller_circle_is_contained():
    g = GridSpec(nx=33, ny=33)
    small = inside_circle(g, CircleSpec(0.5, 0.5, 0.25))
    large = inside_circle(g, CIRCLE)
    assert np.all(large[small])
    assert small.sum() < large.sum()


def test_apply_mask_zeroes_outside_and_preserves_inside():
    g = GridSpec(nx=9, ny=9)
    mask = build_mask(g, CIRCLE)
    rng = np.random.default_rng(7)
    field = rng.normal(size=g.shape)
    out = apply_mask(field, mask)
    assert np.all(out[~mask] == 0.0)
    assert np.array_equal(out[mask], field[mask])


def test_apply_mask_is_idempotent():
    g = GridSpec(nx=9, ny=9)
    mask = build_mask(g, CIRCLE)
    rng = np.random.default_rng(11)
    field = rng.normal(size=g.shape)
    once = apply_mask(field, mask)
    twice = apply_mask(once, mask)
    assert np.array_equal(once, twice)


def test_apply_mask_all_false_gives_zeros():
    out = apply_mask(np.ones((5, 5)), np.zeros((5, 5), dtype=bool))
    assert np.all(out == 0.0)


def test_apply_mask_shape_mismatch():
    with pytest.raises(DimensionError):
        apply_mask(np.ones((5, 5)), np.ones((5, 6), dtype=bool))


def test_build_source_values():
    g = GridSpec(nx=9, ny=9)
    inside = inside_circle(g, CIRCLE)
    src = SourceSpec(k=200.0, q_dot=1.0e6)
    assert src.normalized == 5000.0
    q = build_source(g, inside, src)
    assert np.all(q[inside] == 5000.0)
    assert np.all(q[~inside] == 0.0)


def test_build_source_shape_mismatch():
    g = GridSpec(nx=9, ny=9)
    with pytest.raises(DimensionError):
        build_source(g, np.ones((9, 8), dtype=bool), SourceSpec(k=1.0, q_dot=1.0))


def test_circle_spec_validation():
    with pytest.raises(ValueError):
        CircleSpec(cx=0.5, cy=0.5, radius=0.0)
    with pytest.raises(ValueError):
        CircleSpec(cx=0.5, cy=0.5, radius=-1.0)


def test_source_spec_validation():
    with pytest.raises(ValueError):
        SourceSpec(k=0.0, q_dot=1.0)
    with pytest.raises(ValueError):
        SourceSpec(k=1.0, q_dot=-1.0)
    assert SourceSpec(k=4.0, q_dot=0.0).normalized == 0.0
    assert SourceSpec(k=4.0, q_dot=2.0).normalized == 0.5
