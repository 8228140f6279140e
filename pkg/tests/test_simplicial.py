import math

import numpy as np
import pytest

from isospan.errors import PreconditionError
from isospan.measure import hm
from isospan.simplicial import (
    DEGENERATE,
    SimplicialSet,
    clip_halfspace,
    clip_to_slice,
    intersect_hyperplane,
    refine,
    simplex_volumes,
    union,
    unit_ball_volume,
)
from isospan.geometry import DSlice


def test_unit_ball_volumes():
    assert unit_ball_volume(0) == 1.0
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_simplex_volumes_gram():
    tri = np.array([[[0, 0, 0], [2, 0, 0], [0, 3, 0]]], dtype=float)
    assert simplex_volumes(tri)[0] == pytest.approx(3.0)
    tet = np.array([[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]], dtype=float)
    assert simplex_volumes(tet)[0] == pytest.approx(1 / 6)


def test_validation():
    with pytest.raises(PreconditionError):
        SimplicialSet.build([[0.0, 0.0]], [(0, 1)])
    with pytest.raises(PreconditionError):
        SimplicialSet.build([[0.0, 0.0], [1.0, 1.0]], [(0, 0)], dim=1)
    with pytest.raises(PreconditionError):
        SimplicialSet.build([[np.nan, 0.0]], [(0,)])
    ok = SimplicialSet.build([[0.0, 0.0], [1.0, 1.0]], [(0, 0)], dim=1, tags=[{DEGENERATE}])
    assert len(ok) == 1


def test_union_welds_and_dedupes():
    a = SimplicialSet.polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    b = SimplicialSet.polyline(np.array([[1.0, 0.0], [0.0, 0.0]]))
    u = union([a, b])
    assert len(u.simplices) == 1 and len(u.vertices) == 2


def test_clip_and_intersect():
    X = SimplicialSet.polyline(np.array([[-1.0, 0.0], [1.0, 0.0]]))
    half = clip_halfspace(X, 0, 0.25, keep_below=True)
    assert hm(half, 1) == pytest.approx(1.25 / 2)
    pts, inside = intersect_hyperplane(X, 0, 0.25)
    np.testing.assert_allclose(pts.used_vertices(), [[0.25, 0.0]])
    assert inside == []
    W = DSlice.box([-0.5, -1.0], [0.5, 1.0])
    assert hm(clip_to_slice(X, W), 1) == pytest.approx(0.5)


def test_refine_preserves_measure():
    tri = SimplicialSet.build([[0, 0], [1, 0], [0, 1]], [(0, 1, 2)], dim=2)
    r = refine(tri, density=3)
    assert len(r.simplices) == 16
    assert hm(r, 2) == pytest.approx(hm(tri, 2), rel=1e-12)
    seg = SimplicialSet.polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert len(refine(seg, density=1, max_edge=0.1).simplices) == 10
