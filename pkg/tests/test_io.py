import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import disk_mesh
from isospan.errors import PreconditionError
from isospan.io import (
    dumps,
    from_obj,
    from_off,
    load_set,
    set_from_json,
    set_to_json,
    to_obj,
    to_off,
)
from isospan.measure import hm
from isospan.simplicial import EXCEPTIONAL, SimplicialSet

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def complexes(draw, n=3):
    k = draw(st.integers(3, 9))
    pts = np.array(draw(st.lists(st.tuples(*[coord] * n), min_size=k, max_size=k)))
    d = draw(st.integers(0, 2))
    simp = []
    for _ in range(draw(st.integers(1, 6))):
        s = draw(st.lists(st.integers(0, k - 1), min_size=d + 1, max_size=d + 1, unique=True))
        simp.append(tuple(s))
    return SimplicialSet.build(pts, simp, dim=d)


def _measures_match(X, Y):
    assert hm(Y, X.dim) == pytest.approx(hm(X, X.dim), rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(complexes())
def test_json_round_trip(X):
    Y = set_from_json(json.loads(dumps(set_to_json(X))))
    assert Y.vertices.tolist() == X.vertices.tolist()
    assert Y.simplices == X.simplices and Y.dim == X.dim
    _measures_match(X, Y)


@settings(max_examples=100, deadline=None)
@given(complexes())
def test_obj_round_trip(X):
    Y = from_obj(to_obj(X))
    np.testing.assert_array_equal(Y.vertices, X.vertices)
    _measures_match(X, Y.with_dim(X.dim))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: complexes(n)))
def test_off_round_trip(X):
    Y = from_off(to_off(X))
    np.testing.assert_array_equal(Y.vertices, X.vertices)
    _measures_match(X, Y.with_dim(X.dim))


def test_obj_pads_planar_sets():
    X = SimplicialSet.polyline(np.array([[0.0, 0.0], [1.0, 1.0]]))
    text = to_obj(X)
    assert "v 1.0 1.0 0.0" in text and "l 1 2" in text
    Y = from_obj(text, n=2)
    assert hm(Y, 1) == pytest.approx(hm(X, 1), rel=1e-12)


def test_obj_rejects_high_dimension():
    with pytest.raises(PreconditionError):
        to_obj(SimplicialSet.from_points(np.zeros((1, 4))))


def test_tags_survive_json():
    X = SimplicialSet.from_points([[0.0, 0.0], [1.0, 0.0]], tags=[EXCEPTIONAL])
    Y = set_from_json(set_to_json(X))
    assert all(EXCEPTIONAL in t for t in Y.tags)


def test_polyline_shorthand(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"polyline": [[0, 0], [1, 0], [1, 1]], "closed": True}))
    X = load_set(path)
    assert len(X.simplices) == 3 and X.dim == 1


@pytest.mark.parametrize("obj", [[1, 2], {"vertices": [[0, 0]]}, {"polyline": [1, 2]},
                                 {"vertices": [1, 2], "simplices": [[0]]}])
def test_malformed_geometry(obj):
    with pytest.raises(PreconditionError):
        set_from_json(obj)


def test_dumps_is_strict_and_sorted():
    text = dumps({"b": float("inf"), "a": np.float64(0.1), "c": np.arange(2)})
    assert json.loads(text) == {"a": 0.1, "b": "inf", "c": [0, 1]}
    assert text.index('"a"') < text.index('"b"')


def test_disk_mesh_off_round_trip():
    X = disk_mesh(rings=4, sectors=12)
    Y = from_off(to_off(X))
    _measures_match(X, Y)
