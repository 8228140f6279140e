"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest -v tests/test_acceptance.py``; the lines appear in the
terminal even without ``-s``.  Expected values are closed forms or come from
independent computations in this file.
"""

import json
import math
import time

import numpy as np
import pytest

from isospan import constants
from isospan.cli import main
from isospan.flow import disk_example, scenario_to_json, two_slab_example
from isospan.io import from_obj
from isospan.measure import hm, measure_covering
from isospan.simplicial import EXCEPTIONAL, SimplicialSet
from isospan.suites import eilenberg_suite, cone_suite

from conftest import disk_mesh


@pytest.fixture
def say(capsys):
    def emit(n, ok, detail, seconds=None):
        t = "" if seconds is None else f"  [{seconds:.1f}s]"
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}{t}")
    return emit


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _circle_json(k=256):
    th = 2 * np.pi * np.arange(k) / k
    pts = np.stack([np.cos(th), np.sin(th), np.zeros(k)], axis=1)
    return {"polyline": pts.tolist(), "closed": True}


class Runs:
    """CLI invocations for criteria 3 and 5-7, each run twice for criterion 8."""

    def __init__(self, root):
        self.root = root
        (root / "circle.json").write_text(json.dumps(_circle_json()))
        sc, Z = disk_example()
        (root / "disk.json").write_text(json.dumps(scenario_to_json(sc, Z)))
        (root / "compose.json").write_text(json.dumps(two_slab_example().to_json()))
        self.cache = {}

    def argv(self, name, out):
        r = str(self.root)
        return {
            "slicing": ["verify", "--suite", "slicing", "--seed", "0", "--out", out],
            "span": ["span", "--input", f"{r}/circle.json", "--ball", "0,0,0,2", "--m", "2",
                     "--L", "auto", "--out", out],
            "flow": ["flow", "--scenario", f"{r}/disk.json", "--times", "1,2,5,10,50",
                     "--out", out],
            "compose": ["flow", "--scenario", f"{r}/compose.json", "--out", out],
        }[name]

    def get(self, name, rep=0):
        key = (name, rep)
        if key not in self.cache:
            out = self.root / f"{name}_{rep}"
            (code, secs) = _timed(lambda: main(self.argv(name, str(out))))
            self.cache[key] = (code, secs, out)
        return self.cache[key]

    def report(self, name, rep=0):
        code, secs, out = self.get(name, rep)
        return code, secs, json.loads((out / "report.json").read_text()), out


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    return Runs(tmp_path_factory.mktemp("acceptance"))


def test_criterion_1_cone_bound(say):
    res, secs = _timed(lambda: cone_suite(count=200, seed=0, tol=1e-9))
    ok = res["pass"] and res["count"] == 200 and secs < 10
    say(1, ok, f"{200 - res['failures']}/200 cones within 8 r H^1(X) + 1e-9, "
               f"worst ratio {res['worst_ratio']:.3g}", secs)
    assert ok


def test_criterion_2_averaging(say):
    res, secs = _timed(lambda: eilenberg_suite(count=100, seed=0, tol=0.02))
    sq = res["square"]
    square_ok = math.isclose(sq["lhs"], 0.25, rel_tol=1e-9) and \
        math.isclose(sq["rhs"], 1 / math.pi, rel_tol=1e-9) and sq["pass"]
    ok = res["pass"] and square_ok and len(res["rows"]) == 200 and secs < 60
    say(2, ok, f"{200 - res['failures']}/200 lhs <= 1.02 rhs, square {sq['lhs']:.6f} "
               f"vs 1/pi = {sq['rhs']:.6f}", secs)
    assert ok


def test_criterion_3_slicing(say, runs):
    code, secs, rep, _ = runs.report("slicing")
    s = rep["suites"]["slicing"]
    ok = code == 0 and s["averaging_failed"] == 0 and s["failures"] == 0 \
        and len(s["rows"]) == 300 and s["n_offsets"] == 1024 and secs < 30
    say(3, ok, f"{len(s['rows']) - s['failures']}/300 families under 2 H^1/L, "
               f"AveragingFailed {s['averaging_failed']}", secs)
    assert ok


def test_criterion_4_constants(say, capsys):
    assert main(["constants", "--m", "2", "--n", "2", "--json"]) == 0
    text = capsys.readouterr().out
    rep = json.loads(text[text.index("{"):])
    table = {(r["m"], r["k"], r["N"]): r["K"] for r in rep["table"]}
    r2 = math.sqrt(2)
    want = {(2, 2, 2): 8 * r2, (2, 1, 2): 240 * r2, (2, 0, 2): 7200 * r2}
    errs = [abs(table[k] - v) / v for k, v in want.items()]
    base = [abs(constants.K(m, N, N) - 2 ** (2 * m - 1) * math.sqrt(N))
            for m in (2, 3) for N in range(m, 5)]
    ok = max(errs) <= 1e-12 and max(base) <= 1e-12
    say(4, ok, f"K2_2, K2_1, K2_0 rel err {max(errs):.1e}; base entries max err {max(base):.1e}")
    assert ok


def test_criterion_5_span_circle(say, runs):
    code, secs, rep, out = runs.report("span")
    th = rep["isoperimetric"]
    A_mass = 256 * 2 * math.sin(math.pi / 256) / 2
    L = rep["L"]
    K0 = constants.K(2, 0, 3)
    root_ok = th["root_bound"]["lhs"] <= K0 * L * A_mass + 1e-9
    b_ok = all(e["b"]["pass"] for e in rep["properties"])
    i_ok = root_ok and b_ok and math.isclose(L, 4 * A_mass, rel_tol=1e-12)
    ii_ok = th["lhs"] <= constants.final_constant(2, 3) * A_mass ** 2 and th["pass"]
    # (iii), (iv) against the exported mesh: Conv(A) is the flat unit disk
    At = from_obj((out / "A_tilde.obj").read_text())
    St = from_obj((out / "S_tilde.obj").read_text())
    V = At.used_vertices()
    exc = {tuple(v) for v in St.used_vertices()} if not St.is_empty() else set()
    ordinary = np.array([v for v in V if tuple(v) not in exc]).reshape(-1, 3)
    r = np.linalg.norm(ordinary[:, :2], axis=1)
    hull_err = max(np.abs(ordinary[:, 2]).max(), max(0.0, (r - 1).max()))
    seg = np.cos(math.pi / 256)
    iii_ok = hull_err <= 1e-6 and (np.abs(r - seg).max() <= K0 * L) and \
        all(e["d"]["pass"] for e in rep["properties"])
    on = np.abs(np.linalg.norm(V, axis=1) - 2.0) <= 1e-9
    iv_ok = not on.any()
    ok = code == 0 and i_ok and ii_ok and iii_ok and iv_ok and secs < 300
    say(5, ok, f"H^2(A~)={th['root_bound']['lhs']:.6f} (i) {i_ok} (ii) {ii_ok} margin "
               f"{th['margin']:.4g} (iii) {iii_ok} hull err {hull_err:.1e} (iv) {iv_ok}", secs)
    assert ok


def test_criterion_6_flow_disk(say, runs):
    code, secs, rep, _ = runs.report("flow")
    i1, i2, i3 = rep["item1"], rep["item2"], rep["item3"]
    ok = code == 0 and rep["times"] == [1, 2, 5, 10, 50] and i1["distance"] <= 1e-3 \
        and i1["monotone"] and i2["max_movement"] == 0.0 and i3["distance"] <= 1e-3 and secs < 60
    say(6, ok, f"item1 {i1['distance']:.3g} monotone {i1['monotone']}, item2 movement "
               f"{i2['max_movement']:g}, item3 {i3['distance']:.3g}", secs)
    assert ok


def test_criterion_7_composition(say, runs):
    code, secs, rep, _ = runs.report("compose")
    d = rep["slab_boundary"]["distance"]
    ok = code == 0 and d <= 1e-3 and rep["slab_boundary"]["pass"] and secs < 120
    say(7, ok, f"slab_boundary distance {d:.3g}, sphere_trace {rep['sphere_trace']['distance']:.3g}", secs)
    assert ok


@pytest.mark.parametrize("name", ["slicing", "span", "flow", "compose"])
def test_criterion_8_determinism(say, runs, name):
    _, _, first = runs.get(name, 0)
    _, secs, second = runs.get(name, 1)
    a = (first / "report.json").read_bytes()
    b = (second / "report.json").read_bytes()
    ok = a == b
    say(8, ok, f"{name}: report.json byte-identical across runs ({len(a)} bytes)", secs)
    assert ok


def test_criterion_9_measures(say):
    seg = SimplicialSet.polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    h = hm(seg, 1)
    cov = measure_covering(seg, 1, 1e-3).value
    S = 256
    disk = hm(disk_mesh(rings=32, sectors=S), 2)
    inscribed = 0.5 * S * math.sin(2 * math.pi / S) / math.pi
    ok = abs(h - 0.5) <= 1e-12 and abs(cov - 0.5) <= 0.05 * 0.5 and \
        abs(disk - 1.0) < 0.01 and math.isclose(disk, inscribed, rel_tol=1e-12)
    say(9, ok, f"segment {h!r}, covering {cov:.5f}, disk mesh {disk:.6f}")
    assert ok
