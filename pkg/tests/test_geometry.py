import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isospan.errors import NoLimitFound, NotFreeDirection, PreconditionError
from isospan.geometry import (
    ClosedBall,
    DSlice,
    boundary_of_slice,
    convex_hull_contains,
    deepest_point,
    del_ZW,
    diagonal_limit_point,
    direction_width,
    distance_to_set,
    hausdorff_distance,
    hull_distance,
    k_width,
    meets_interior,
    neighborhood_contains,
    point_simplex_distance,
)
from isospan.simplicial import SimplicialSet


def test_direction_width():
    W = DSlice.box([0, 0], [3, 1])
    assert direction_width(W, 0) == 3
    W2 = DSlice(2, {0: (0, 3), 1: (-math.inf, math.inf)})
    assert direction_width(W2, 1) == math.inf
    with pytest.raises(NotFreeDirection):
        direction_width(W.fix(1, 0.5), 1)


def test_k_width_matches_subset_enumeration():
    from itertools import combinations
    W = DSlice.box([0, 0, 0], [3, 1, 5])
    widths = [3, 1, 5]
    for k in range(1, 4):
        oracle = min(max(c) for c in combinations(widths, k))
        assert k_width(W, k) == oracle
    assert k_width(W, 2) == 3
    assert k_width(W, 0) == 0
    assert k_width(DSlice(2, {0: (0, 1), 1: (-math.inf, math.inf)}), 2) == math.inf
    with pytest.raises(PreconditionError):
        k_width(W, 4)


def test_k_width_monotone():
    W = DSlice.box([0, -2, 1, 0], [0.5, 3, 2, 7])
    vals = [k_width(W, k) for k in range(5)]
    assert vals == sorted(vals)


def test_convex_hull_contains():
    assert convex_hull_contains([[0, 0], [1, 0], [0, 1]], [0.2, 0.2])
    assert not convex_hull_contains([[0, 0], [1, 0]], [0.5, 0.1], tol=0.05)
    assert convex_hull_contains([[0, 0]], [0, 0])
    with pytest.raises(PreconditionError):
        convex_hull_contains(np.zeros((0, 2)), [0, 0])


def test_hull_distance_against_segment_formula():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b, q = rng.normal(size=(3, 3))
        assert hull_distance([a, b], q) == pytest.approx(point_simplex_distance(q, np.array([a, b])),
                                                         abs=1e-9)


def test_neighborhood_contains():
    X = SimplicialSet.polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert neighborhood_contains(X, [0.5, 0.3], 0.3)
    assert not neighborhood_contains(X, [2.0, 0.0], 0.5)
    assert distance_to_set(X, np.array([[2.0, 0.0]]))[0] == pytest.approx(1.0)
    for v in X.vertices:
        assert neighborhood_contains(X, v, 0.0)


def test_distance_to_triangles_matches_pointwise():
    rng = np.random.default_rng(7)
    T = SimplicialSet.build(rng.normal(size=(6, 3)), [(0, 1, 2), (3, 4, 5), (0, 3, 5)], dim=2)
    Q = rng.normal(size=(40, 3)) * 2
    ref = [min(point_simplex_distance(q, T.simplex_points(i)) for i in range(len(T.simplices)))
           for q in Q]
    np.testing.assert_allclose(distance_to_set(T, Q), ref, atol=1e-12)


def test_hausdorff_examples():
    assert hausdorff_distance([[0.0]], [[1.0]]) == 1.0
    X = np.random.default_rng(0).normal(size=(10, 2))
    assert hausdorff_distance(X, X) == 0.0
    assert hausdorff_distance([[0.0], [1.0]], [[0.0]]) == 1.0
    with pytest.raises(PreconditionError):
        hausdorff_distance(np.zeros((0, 2)), X)


pts = st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=12)


@settings(max_examples=200, deadline=None)
@given(pts, pts, pts)
def test_hausdorff_symmetry_and_triangle(X, Y, Z):
    dxy = hausdorff_distance(X, Y)
    assert dxy == pytest.approx(hausdorff_distance(Y, X))
    assert dxy <= hausdorff_distance(X, Z) + hausdorff_distance(Z, Y) + 1e-9


def test_diagonal_limit_point():
    grid = [[[[1.0 / i + 1.0 / j]] for j in range(1, 200)] for i in range(1, 200)]
    res = diagonal_limit_point(grid, 0.05)
    assert res.points[0, 0] == pytest.approx(0.0, abs=0.02)
    assert res.distances[-1] <= 0.05
    X = [[0.0, 1.0], [2.0, 0.0]]
    const = [[X for _ in range(5)] for _ in range(5)]
    np.testing.assert_array_equal(diagonal_limit_point(const, 1e-9).points, X)
    alt = [[[[float(j % 2)]] for j in range(20)] for _ in range(5)]
    with pytest.raises(NoLimitFound):
        diagonal_limit_point(alt, 0.1)


def test_boundary_of_slice():
    B = ClosedBall((0.5, 0.5), 2.0)
    bd = boundary_of_slice(DSlice.box([0, 0], [1, 1]), B)
    assert (0.0, 0.5) in bd
    assert (0.5, 0.5) not in bd
    disk = ClosedBall((0.0, 0.0), 1.0)
    line = DSlice(2, {0: (-math.inf, math.inf)}, {1: 0.5})
    x = math.sqrt(1 - 0.25)
    assert boundary_of_slice(line, disk).contains([x, 0.5])
    assert not boundary_of_slice(line, disk).contains([0.0, 0.5])


def test_meets_interior_and_deepest_point():
    B = ClosedBall((0.0, 0.0), 1.0)
    assert meets_interior(DSlice.box([-2, -2], [2, 2]).fix(0, 0.5), B)
    assert not meets_interior(DSlice.box([-2, -2], [2, 2]).fix(0, 1.0), B)
    q = deepest_point(DSlice.box([-1, -1], [1, 1]).fix(0, 0.5), B)
    np.testing.assert_allclose(q, [0.5, 0.0], atol=1e-12)


class TestDelZW:
    B = ClosedBall((0.0, 0.0), 2.0)
    W = DSlice.box([-1.0, -1.0], [1.0, 1.0])

    def test_transversal_crossing(self):
        Z = SimplicialSet.polyline(np.array([[0.0, 0.0], [1.5, 0.5]]))
        out = del_ZW(Z, self.W, self.B, 0.1)
        # segment meets x0 = 1 at t = 2/3
        np.testing.assert_allclose(out.used_vertices(), [[1.0, 1.0 / 3.0]], atol=1e-12)

    def test_interior_is_empty(self):
        Z = SimplicialSet.polyline(np.array([[-0.5, 0.0], [0.5, 0.2]]))
        assert del_ZW(Z, self.W, self.B, 0.1).is_empty()

    def test_touching_from_outside_is_empty(self):
        Z = SimplicialSet.polyline(np.array([[1.0, 0.0], [1.5, 0.5]]))
        assert del_ZW(Z, self.W, self.B, 0.1).is_empty()

    def test_eps_independent(self):
        Z = SimplicialSet.polyline(np.array([[0.0, -1.5], [0.2, 0.0], [1.6, 0.3]]))
        a = del_ZW(Z, self.W, self.B, 0.2).used_vertices()
        b = del_ZW(Z, self.W, self.B, 0.1).used_vertices()
        np.testing.assert_allclose(a, b)
        assert len(a) == 2


def test_dslice_json_round_trip():
    W = DSlice(3, {0: (-math.inf, 1.0), 2: (0.0, 2.0)}, {1: 0.25})
    assert DSlice.from_json(W.to_json()) == W
