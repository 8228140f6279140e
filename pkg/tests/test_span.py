import json
import math

import numpy as np
import pytest

from conftest import circle
from isospan import constants
from isospan.errors import PreconditionError, PreconditionP10
from isospan.geometry import ClosedBall, DSlice, distance_to_set
from isospan.io import dumps
from isospan.measure import hm
from isospan.simplicial import EXCEPTIONAL, SimplicialSet, union
from isospan.span import (
    PNodeInput,
    SpanOptions,
    span,
    span_base,
    span_point,
    span_step,
    verify_properties,
)

DISK = ClosedBall((0.0, 0.0), 1.0)
BOX = DSlice.box([-1.0, -1.0], [1.0, 1.0])


def square_boundary(side=0.5):
    h = side / 2
    return SimplicialSet.polyline(np.array([[-h, -h], [h, -h], [h, h], [-h, h]]), closed=True)


class TestPoint:
    def test_interior_point(self):
        res = span_point(PNodeInput(SimplicialSet.empty(2, 0), DISK, BOX.fix(0, 0.5), 1.0,
                                    0.1, 1, 0, 1))
        (p,) = res.A_tilde.used_vertices()
        np.testing.assert_allclose(p, [0.5, 0.0])
        assert DISK.contains(p) and not DISK.on_boundary(p)
        assert hm(res.A_tilde, 1) == 0.0
        assert res.S_tilde.used_vertices().shape == (1, 2)

    def test_nonempty_slice_rejected(self):
        A = SimplicialSet.from_points([[0.5, 0.2]])
        with pytest.raises(PreconditionP10):
            span_point(PNodeInput(A, DISK, BOX.fix(0, 0.5), 1.0, 0.1, 1, 0, 1))


class TestBase:
    def test_square_boundary(self):
        A = square_boundary(0.5)
        L = 4 * hm(A, 1)
        res = span_base(PNodeInput(A, ClosedBall((0.0, 0.0), 2.0), BOX, L, 0.1, 2, 2, 2))
        p = np.array(res.checks["cone_point"]["point"])
        np.testing.assert_allclose(p, [-0.25, -0.25])
        # fan from a corner covers the square once
        assert hm(res.A_tilde, 2) == pytest.approx(0.25 / math.pi, rel=1e-12)
        assert hm(res.A_tilde, 2) <= 8 * math.sqrt(2) * L * hm(A, 1)

    def test_empty_slice(self):
        res = span_base(PNodeInput(SimplicialSet.empty(2, 1), DISK, BOX, 2.0, 0.1, 2, 2, 2))
        assert hm(res.A_tilde, 2) == 0.0
        assert len(res.A_tilde.used_vertices()) == 1

    def test_all_exceptional(self):
        A = square_boundary(0.5).with_tag(EXCEPTIONAL)
        res = span_base(PNodeInput(A, DISK, BOX, 4.0, 0.1, 2, 2, 2))
        np.testing.assert_allclose(res.checks["cone_point"]["point"], [0.0, 0.0])
        assert res.A_tilde.untagged(EXCEPTIONAL).is_empty()
        (entry,) = verify_properties(res)
        assert entry["d"]["vacuous"] and entry["pass"]

    def test_width_precondition(self):
        with pytest.raises(PreconditionError):
            span_base(PNodeInput(square_boundary(), DISK, BOX, 1.0, 0.1, 2, 2, 2))


class TestStep:
    def test_wide_bound_defers_to_cone(self):
        A = circle(128, n=2)
        res = span_step(PNodeInput(A, DISK, BOX, 4 * math.pi, 0.1, 2, 0, 2))
        assert res.kind == "defer"
        kinds = [n.kind for n in res.walk()]
        assert kinds.count("base") == 1
        assert hm(res.A_tilde, 2) == pytest.approx(1.0, abs=2e-3)

    def test_forced_small_bound_slices(self):
        A = circle(128, n=2)
        opts = SpanOptions(enforce_preconditions=False)
        res = span_step(PNodeInput(A, DISK, BOX, 0.5, 0.1, 2, 0, 2), opts)
        step = next(n for n in res.walk() if n.kind == "step")
        walls = [c for c in step.children if c.kind == "point"]
        assert len(walls) == step.slabs.M
        chain = constants.K(2, 1, 2) * constants.script_L(2, 0.5, 2) * 2 * 3 * hm(A, 1)
        assert hm(res.A_tilde, 2) <= chain
        assert step.checks["assembly"]["pass"]
        assert not step.checks["script_L_bound"]["premise_holds"]

    def test_empty_set_gives_null_measure(self):
        res = span_step(PNodeInput(SimplicialSet.empty(2, 1), DISK, BOX, 0.3, 0.1, 2, 0, 2))
        assert hm(res.A_tilde, 2) == 0.0
        assert any(n.kind == "step" for n in res.walk())


def test_small_circle_runs_full_recursion():
    A = circle(64, 0.05, n=2).translated([0.5, 0.3])
    run = span(A, ClosedBall((0.0, 0.0), 2.0), 2)
    kinds = {n.kind for n in run.root.walk()}
    assert {"step", "base", "point"} <= kinds
    assert run.passed
    for n in run.root.walk():
        if n.kind == "step":
            assert n.checks["wall_chain"]["pass"] and n.checks["script_L_bound"]["pass"]


def test_catenoid_boundary():
    c1 = circle(64, 0.6).translated([0, 0, 0.5])
    c2 = circle(64, 0.6).translated([0, 0, -0.5])
    B = ClosedBall((0.0, 0.0, 0.0), math.sqrt(0.61))
    run = span(union([c1, c2]), B, 2)
    assert run.passed
    V = run.A_tilde.used_vertices()
    on = np.abs(np.linalg.norm(V, axis=1) - B.radius) <= 1e-9
    assert distance_to_set(union([c1, c2]), V[on]).max() <= 1e-9
    # the span reaches both boundary circles
    assert V[:, 2].min() == pytest.approx(-0.5) and V[:, 2].max() == pytest.approx(0.5)


def test_empty_input_with_user_bound():
    run = span(SimplicialSet.empty(3, 1), ClosedBall((0.0, 0.0, 0.0), 1.0), 2, L=0.3)
    assert hm(run.A_tilde, 2) == 0.0 and run.passed


def test_auto_bound_needs_mass():
    with pytest.raises(PreconditionError):
        span(SimplicialSet.empty(3, 1), ClosedBall((0.0, 0.0, 0.0), 1.0), 2)


def test_input_outside_ball_rejected():
    with pytest.raises(PreconditionError):
        span(circle(16, 2.0), ClosedBall((0.0, 0.0, 0.0), 1.0), 2)


def test_corruption_is_flagged():
    run = span(circle(64, 0.05, n=2), ClosedBall((0.0, 0.0), 2.0), 2)
    root = run.root
    far = SimplicialSet.build([[2.0, 0.0], [1.9, 0.1], [1.9, -0.1]], [(0, 1, 2)], dim=2)
    root.A_tilde = union([root.A_tilde, far], dim=2)
    entry = verify_properties(root)[0]
    assert entry["path"] == "root"
    assert not entry["pass"]
    assert not entry["a"]["pass"] or not entry["d"]["pass"]


def test_report_is_deterministic():
    A = circle(64, 0.05, n=2).translated([0.5, 0.3])
    a = dumps(span(A, ClosedBall((0.0, 0.0), 2.0), 2).to_json())
    b = dumps(span(A, ClosedBall((0.0, 0.0), 2.0), 2).to_json())
    assert a == b
    assert json.loads(a)["schema"] == 1
