"""Simulation of the coning flow on a slice.

Given a d-slice ``Q`` of a ball ``B``, a point ``p`` of ``Q`` and a closed set
``A``, the field ``V = theta * Vhat`` pushes every point ``y + e`` (``y`` on a
small disk ``D`` through ``p`` orthogonal to ``Q``, ``e`` parallel to ``Q``)
straight towards ``y``.  ``theta`` vanishes on ``D``, on ``A`` and outside a
thin neighborhood of ``Q ∩ B``, so long-time flows collapse ``Z ∩ Q`` onto
the cone over ``A ∩ Q`` from ``p``.

The cutoff is ``min(1, dist / theta_scale) ** theta_power`` with the distance
taken to ``D ∪ A ∪ F``.  ``theta_scale = 1, theta_power = 2`` is the plain
squared-distance cutoff; the defaults trade it for a linear ramp on a short
length scale, which keeps the zero set and the Lipschitz property but makes
the collapse onto ``p`` fast enough to observe at finite times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .coning import cone
from .config import GEOM_TOL
from .errors import (
    FlowIncompatible,
    IntegrationBlowup,
    NeedCurvedDisk,
    PreconditionError,
)
from .geometry import (
    ClosedBall,
    DSlice,
    boundary_points,
    del_ZW,
    distance_to_set,
    meets_interior,
)
from .simplicial import SimplicialSet, clip_to_slice, refine, union

THETA_SCALE = 1e-2
THETA_POWER = 1.0


@dataclass
class FlowScenario:
    B: ClosedBall
    Q: DSlice
    p: np.ndarray
    A: SimplicialSet
    eps: float
    delta: float = None
    theta_scale: float = THETA_SCALE
    theta_power: float = THETA_POWER
    dt: float = 1e-3
    density: int = 4
    max_edge: float = None
    label: str = ""

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=np.float64)
        if self.delta is None:
            self.delta = self.eps / 4.0
        if not 0 < self.delta < self.eps:
            raise PreconditionError("need 0 < delta < eps")
        if self.A.dim > 1:
            raise PreconditionError("flow mode supports A of dimension <= 1")
        if self.theta_scale <= 0 or self.theta_power <= 0:
            raise PreconditionError("cutoff scale and power must be positive")

    @property
    def n(self):
        return self.Q.n

    @property
    def d(self):
        return self.Q.dim

    @property
    def disk_radius(self):
        return 0.0 if self.d == self.n else 7.0 * self.delta / 8.0

    def to_json(self):
        from .io import set_to_json
        return {"ball": {"center": self.B.c.tolist(), "radius": self.B.radius},
                "Q": self.Q.to_json(), "p": self.p.tolist(), "A": set_to_json(self.A),
                "eps": self.eps, "delta": self.delta, "theta_scale": self.theta_scale,
                "theta_power": self.theta_power, "dt": self.dt, "density": self.density,
                "max_edge": self.max_edge, "label": self.label}

    @classmethod
    def from_json(cls, obj):
        from .io import set_from_json
        ball = obj["ball"]
        return cls(ClosedBall(np.asarray(ball["center"], dtype=np.float64), float(ball["radius"])),
                   DSlice.from_json(obj["Q"]), np.asarray(obj["p"], dtype=np.float64),
                   set_from_json(obj["A"]), float(obj["eps"]), obj.get("delta"),
                   float(obj.get("theta_scale", THETA_SCALE)),
                   float(obj.get("theta_power", THETA_POWER)), float(obj.get("dt", 1e-3)),
                   int(obj.get("density", 4)), obj.get("max_edge"), obj.get("label", ""))


@dataclass
class DiskSpec:
    center: np.ndarray
    radius: float
    normal_axes: tuple
    conditions: dict = field(default_factory=dict)


def build_disk(Q, p, delta, B, samples=64):
    """Flat disk ``p + (N(0, 7 delta / 8) ∩ G)`` with its three conditions checked.

    ``G`` is spanned by the fixed coordinates of ``Q``.  When ``Q`` is
    n-dimensional the disk is the single point ``p``.
    """
    p = np.asarray(p, dtype=np.float64)
    fixed = tuple(Q.fixed)
    if not (Q.contains(p) and B.contains(p)):
        raise PreconditionError("p must lie in Q ∩ B")
    if not fixed:
        return DiskSpec(p.copy(), 0.0, (), {"transverse": True, "graph": True, "covers": True})
    clearance = B.radius - float(np.linalg.norm(p - B.c))
    if clearance <= 0:
        raise NeedCurvedDisk("p on the sphere needs a curved disk")
    if clearance < delta:
        raise NeedCurvedDisk(f"p is {clearance:.3g} < delta from the sphere; a flat disk is not safe")
    # x + Q must meet int(B) for |x| <= delta along G
    for axis in fixed:
        for sgn in (-1.0, 1.0):
            shifted = DSlice(Q.n, Q.bounds, dict(Q.fixed, **{str(axis): Q.fixed[axis] + sgn * delta}))
            if not meets_interior(shifted, B):
                raise PreconditionError("delta too large: shifted slice misses int(B)")
    r = 7.0 * delta / 8.0
    rng = np.random.default_rng(0)
    dirs = rng.normal(size=(samples, len(fixed)))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    pts = np.repeat(p[None], samples, axis=0)
    pts[:, list(fixed)] += r * dirs
    # condition (1): D minus p inside int(((N(0, delta) ∩ G) + Q) ∩ B)
    in_ball = np.linalg.norm(pts - B.c, axis=1) < B.radius
    faces_ok = all(lo < p[i] < hi for i, (lo, hi) in Q.bounds.items())
    transverse = bool(in_ball.all() and faces_ok and r < delta)
    if not transverse:
        raise NeedCurvedDisk("flat disk leaves the interior; a curved disk would be needed")
    # (2) a flat disk orthogonal to Q is its own projection; (3) radius 7/8 > 3/4
    return DiskSpec(p.copy(), r, fixed, {"transverse": transverse, "graph": True,
                                         "covers": bool(r >= 0.75 * delta)})


def _segments_of(A, n):
    if A.is_empty():
        return np.zeros((0, 2, n))
    segs = []
    for i in range(len(A)):
        pts = A.simplex_points(i)
        segs.append(pts[[0, -1]])
    return np.array(segs)


def _kernel_args(sc):
    lo, hi = sc.Q.lo_hi()
    free = sc.Q.free_mask()
    half = sc.delta / 2.0 if sc.Q.fixed else math.inf
    return (sc.p, free, lo, hi, sc.B.c.astype(np.float64), float(sc.B.radius),
            float(sc.disk_radius), float(half), _segments_of(sc.A, sc.n),
            float(sc.theta_scale), float(sc.theta_power))


def cutoff_theta(x, scenario):
    """``min(1, dist(x, D ∪ A ∪ F) / scale) ** power``."""
    X = np.atleast_2d(np.asarray(x, dtype=np.float64))
    theta = _theta_direct(X, scenario)
    return theta if np.ndim(x) > 1 else float(theta[0])


def _theta_direct(X, sc):
    free = sc.Q.free_mask()
    rel = X - sc.p
    gn = np.linalg.norm(np.where(free[None], 0.0, rel), axis=1)
    en = np.linalg.norm(np.where(free[None], rel, 0.0), axis=1)
    d_disk = np.sqrt(en ** 2 + np.maximum(gn - sc.disk_radius, 0.0) ** 2)
    d_a = kernels.min_dist_to_segments(X, _segments_of(sc.A, sc.n))
    slack = np.full(len(X), sc.delta / 2.0) - gn if sc.Q.fixed else np.full(len(X), np.inf)
    for i, (lo, hi) in sc.Q.bounds.items():
        slack = np.minimum(slack, np.minimum(X[:, i] - lo, hi - X[:, i]))
    slack = np.minimum(slack, sc.B.radius - np.linalg.norm(X - sc.B.c, axis=1))
    d = np.minimum(np.minimum(d_disk, d_a), np.maximum(slack, 0.0))
    th = np.minimum(1.0, d / sc.theta_scale) ** sc.theta_power
    return np.where(gn <= sc.disk_radius, th, 0.0)


def vector_field(x, scenario):
    """``theta(x) * Vhat(x)`` with ``Vhat(y + e) = -e``."""
    X = np.atleast_2d(np.asarray(x, dtype=np.float64))
    V = kernels.flow_velocity(X, *_kernel_args(scenario))
    return V if np.ndim(x) > 1 else V[0]


def advect(points, scenario, t, tol=1e-6):
    """Integrate ``dx/ds = V(x)`` for time ``t`` with fixed-step RK4."""
    if t < 0:
        raise PreconditionError("t must be non-negative")
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if t == 0 or len(X) == 0:
        return X.copy()
    nsteps = max(1, int(math.ceil(t / scenario.dt - 1e-9)))
    dt = t / nsteps
    # the field vanishes on F, so points starting there never move
    lo, hi = _support_box(scenario)
    live = (np.all((X > lo) & (X < hi), axis=1)
            & (np.linalg.norm(X - scenario.B.c, axis=1) < scenario.B.radius))
    out = X.copy()
    if live.any():
        out[live] = kernels.flow_rk4(np.ascontiguousarray(X[live]), *_kernel_args(scenario),
                                     dt, nsteps)
    far = np.linalg.norm(out - scenario.B.c, axis=1) - scenario.B.radius
    if not np.all(np.isfinite(out)) or np.any(far > tol):
        raise IntegrationBlowup("trajectory left the ball; reduce dt")
    return out


def flow_evolve(Z, scenario, t, refine_first=False):
    """The image of ``Z`` under the time-``t`` flow (vertices advected)."""
    if refine_first:
        Z = refine(Z, scenario.density, scenario.max_edge)
    if Z.is_empty():
        return Z
    V = advect(Z.vertices, scenario, t)
    return SimplicialSet(V, Z.simplices, Z.dim, Z.tags)


def ray_drift(X0, Xt, scenario):
    """Max distance of each advected point from its initial ray ``y + s e``."""
    free = scenario.Q.free_mask()
    e0 = np.where(free[None], X0 - scenario.p, 0.0)
    y = X0 - e0
    rel = Xt - y
    n0 = np.linalg.norm(e0, axis=1)
    unit = np.divide(e0, n0[:, None], out=np.zeros_like(e0), where=n0[:, None] > 0)
    along = (rel * unit).sum(axis=1)
    perp = rel - along[:, None] * unit
    return float(np.linalg.norm(perp, axis=1).max()) if len(X0) else 0.0


# -------------------------------------------------------------------------
# checks of the three conclusions


def cone_target(scenario):
    """``{p} ∪ C(A ∩ Q, p)``."""
    AQ = clip_to_slice(scenario.A, scenario.Q) if not scenario.A.is_empty() else scenario.A
    return cone(AQ, scenario.p)


def _dist_points(points, X):
    points = np.atleast_2d(points)
    if len(points) == 0 or points.size == 0:
        return 0.0
    if X.is_empty():
        return math.inf
    return float(distance_to_set(X, points).max())


def _point_set(pts, n):
    pts = np.asarray(pts, dtype=np.float64).reshape(-1, n)
    if len(pts) == 0:
        return SimplicialSet.empty(n, 0)
    return SimplicialSet.from_points(pts)


def _outside_support(X, sc, tol):
    """Initial positions outside ``{p} ∪ (Q ∩ int B) ∪ int(Q(eps) ∩ B)``."""
    fat = sc.Q.fattened(sc.eps)
    out = np.ones(len(X), dtype=bool)
    for i, x in enumerate(X):
        inner = np.linalg.norm(x - sc.B.c) < sc.B.radius - tol
        at_p = np.linalg.norm(x - sc.p) <= tol
        in_q = sc.Q.contains(x, tol) and inner
        in_fat = inner and all(lo < x[k] < hi for k, (lo, hi) in fat.bounds.items())
        out[i] = not (at_p or in_q or in_fat)
    return out


def check_flow(scenario, Z, times, tol=1e-3, refine_first=True):
    """Evolve ``Z`` through ``times`` and measure the three conclusions.

    Item (1) is the largest distance from ``Z_T ∩ Q`` to
    ``{p} ∪ C(A ∩ Q, p) ∪ (Z ∩ ∂(Q ∩ B))``; item (2) the largest movement of a
    vertex starting outside the support; item (3) the largest distance from
    ``∂(Z_T, Q(eps))`` to ``{p} ∪ C(A ∩ Q, p) ∪ ∂(Z, Q(eps))``.
    """
    sc = scenario
    times = sorted(float(t) for t in times)
    if not times or times[0] < 0:
        raise PreconditionError("times must be non-negative")
    disk = build_disk(sc.Q, sc.p, sc.delta, sc.B)
    bdry = del_ZW(Z, sc.Q, sc.B, sc.eps)
    if len(bdry.used_vertices()) and not sc.A.is_empty():
        gap = float(distance_to_set(sc.A, bdry.used_vertices()).max())
    else:
        gap = 0.0 if not len(bdry.used_vertices()) else math.inf
    if gap > GEOM_TOL * 1e3:
        raise PreconditionError(f"hypothesis fails: boundary part of Z is {gap:.3g} away from A")
    Zr = refine(Z, sc.density, sc.max_edge) if refine_first else Z
    base = cone_target(sc)
    z_bd = _point_set([q for q, _ in boundary_points(Z, sc.Q, sc.B)], sc.n)
    target1 = union([base, z_bd.with_dim(base.dim)], dim=base.dim)
    fatQ = sc.Q.fattened(sc.eps)
    d0 = del_ZW(Zr, fatQ, sc.B, sc.eps)
    target3 = union([base, d0.with_dim(base.dim)], dim=base.dim)
    X0 = Zr.vertices.copy()
    outside = _outside_support(X0, sc, GEOM_TOL)

    X = X0
    prev = 0.0
    rows = []
    snapshots = []
    for t in times:
        X = advect(X, sc, t - prev)
        prev = t
        Zt = SimplicialSet(X, Zr.simplices, Zr.dim, Zr.tags)
        snapshots.append(Zt)
        in_q = clip_to_slice(Zt, sc.Q).used_vertices()
        item1 = _dist_points(in_q, target1)
        moved = float(np.linalg.norm(X[outside] - X0[outside], axis=1).max()) if outside.any() else 0.0
        dT = del_ZW(Zt, fatQ, sc.B, sc.eps).used_vertices()
        item3 = _dist_points(dT, target3)
        rows.append({"t": t, "item1": item1, "item2": moved, "item3": item3,
                     "drift": ray_drift(X0, X, sc)})
    decay = [r["item1"] for r in rows]
    monotone = all(b <= a + 1e-12 for a, b in zip(decay, decay[1:]))
    last = rows[-1]
    return {
        "times": times,
        "rows": rows,
        "item1": {"distance": last["item1"], "tol": tol, "pass": bool(last["item1"] <= tol),
                  "monotone": monotone},
        "item2": {"max_movement": last["item2"], "pass": bool(last["item2"] == 0.0)},
        "item3": {"distance": last["item3"], "tol": tol, "pass": bool(last["item3"] <= tol)},
        "max_ray_drift": max(r["drift"] for r in rows),
        "vertices": int(len(X0)),
        "evolved": Zt,
        "snapshots": snapshots,
        "cutoff": {"scale": sc.theta_scale, "power": sc.theta_power},
        "disk": {"radius": disk.radius, "conditions": disk.conditions},
    }


# -------------------------------------------------------------------------
# composition over walls and slabs


def _support_box(sc):
    """Axis box containing the support of the field."""
    lo, hi = sc.Q.lo_hi()
    lo, hi = lo.copy(), hi.copy()
    for j in sc.Q.fixed:
        lo[j] -= sc.delta / 2.0
        hi[j] += sc.delta / 2.0
    return lo, hi


def _open_boxes_overlap(a, b):
    return bool(np.all(np.maximum(a[0], b[0]) < np.minimum(a[1], b[1])))


def check_compatible(stages):
    """Scenarios in one stage must have disjoint open supports; all share ``n``."""
    ns = {sc.n for stage in stages for sc in stage}
    if len(ns) > 1:
        raise FlowIncompatible("scenarios live in different dimensions")
    for stage in stages:
        boxes = [_support_box(sc) for sc in stage]
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if _open_boxes_overlap(boxes[i], boxes[j]):
                    raise FlowIncompatible(f"stage scenarios {i} and {j} have overlapping supports")


def _adjacent_walls(slab, walls, tol=GEOM_TOL):
    """Wall scenarios whose hyperplane bounds the slab."""
    out = []
    for w in walls:
        for axis, c in w.Q.fixed.items():
            if axis in slab.Q.bounds and any(abs(c - b) <= tol for b in slab.Q.bounds[axis]):
                out.append(w)
    return out


def compose_flows(walls, slabs, Z, t_per_stage, W=None, tol=1e-3):
    """Run all wall flows, then all slab flows, and check the slab containments.

    With ``X_j = {p_j}`` the wall outputs, the report measures
    ``∂(Y', W_j)`` against ``(∂(Y, W) ∩ W_j) ∪ X_j ∪ X_(j+1)`` and
    ``Y' ∩ ∂(W_j ∩ B)`` against ``(Y ∩ ∂(W ∩ B)) ∪ X_j ∪ X_(j+1)`` after the
    wall stage, and ``Ytilde ∩ W_j`` against the slab cones after the slab stage.
    """
    check_compatible([walls, slabs])
    for sc in walls + slabs:
        build_disk(sc.Q, sc.p, sc.delta, sc.B)
    if not walls and not slabs:
        return Z, {"stages": 0}
    ref = (walls or slabs)[0]
    B = ref.B
    edges = [sc.max_edge for sc in walls + slabs if sc.max_edge]
    edge = min(edges) if edges else None
    Y = refine(Z, ref.density, edge)
    X = Y.vertices.copy()
    for sc in walls:
        X = advect(X, sc, t_per_stage)
    Yp = SimplicialSet(X, Y.simplices, Y.dim, Y.tags)
    for sc in slabs:
        X = advect(X, sc, t_per_stage)
    Yt = SimplicialSet(X, Y.simplices, Y.dim, Y.tags)

    report = {"stages": 2, "t_per_stage": t_per_stage, "slabs": []}
    if W is not None:
        dYW = del_ZW(Z, W, B, ref.eps)
        y_bd = _point_set([q for q, _ in boundary_points(Z, W, B)], ref.n)
        cones = [cone_target(sc) for sc in slabs]
        worst3 = worst4 = worst_c4 = 0.0
        for j, sc in enumerate(slabs):
            Xs = [w.p for w in _adjacent_walls(sc, walls)]
            Xset = _point_set(Xs, ref.n)
            in_slab = clip_to_slice(dYW, sc.Q) if not dYW.is_empty() else dYW
            t3 = union([in_slab.with_dim(0), Xset], dim=0)
            lhs3 = del_ZW(Yp, sc.Q, B, ref.eps).used_vertices()
            d3 = _dist_points(lhs3, t3)
            t4 = union([y_bd, Xset], dim=0)
            lhs4 = np.array([q for q, _ in boundary_points(Yp, sc.Q, B)]).reshape(-1, ref.n)
            d4 = _dist_points(lhs4, t4)
            nb = [cones[i] for i in (j - 1, j) if 0 <= i < len(cones)]
            t_c4 = union([c.with_dim(1) for c in nb] + [y_bd.with_dim(1), Xset.with_dim(1)], dim=1)
            lhs_c4 = clip_to_slice(Yt, sc.Q).used_vertices()
            dc4 = _dist_points(lhs_c4, t_c4)
            report["slabs"].append({"slab": j, "slab_boundary": d3, "sphere_trace": d4, "slab_cone": dc4,
                                    "wall_points": [x.tolist() for x in Xs]})
            worst3, worst4, worst_c4 = max(worst3, d3), max(worst4, d4), max(worst_c4, dc4)
        report["slab_boundary"] = {"distance": worst3, "tol": tol, "pass": bool(worst3 <= tol)}
        report["sphere_trace"] = {"distance": worst4, "tol": tol, "pass": bool(worst4 <= tol)}
        report["slab_cone"] = {"distance": worst_c4}
    report["intermediate"] = Yp
    return Yt, report


def scenarios_from_decomposition(W, B, family, A, wall_points, slab_points, zeta,
                                 max_edge=None, **kw):
    """Wall and slab scenarios for one slicing step.

    Walls use ``eps = min(L / 4, zeta / 2)``; slabs see ``A`` plus the wall
    points and use half that.
    """
    eps_w = min(family.step / 4.0, zeta / 2.0)
    axis = family.direction
    walls = []
    for c, p in zip(family.interior_planes, wall_points):
        walls.append(FlowScenario(B, W.fix(axis, c), p, A, eps_w, max_edge=max_edge,
                                  label=f"wall x{axis}={c:g}", **kw))
    calA = union([A.with_dim(max(A.dim, 0))] + [SimplicialSet.from_points(np.atleast_2d(p))
                                                for p in wall_points], dim=max(A.dim, 0))
    slabs = []
    for j, (Wj, p) in enumerate(zip(family.slabs, slab_points)):
        slabs.append(FlowScenario(B, Wj, p, calA, eps_w / 2.0, max_edge=max_edge,
                                  label=f"slab {j}", **kw))
    return walls, slabs


def report_json(rep):
    """Drop mesh objects from a check report so it serializes."""
    return {k: v for k, v in rep.items()
            if not isinstance(v, SimplicialSet) and k != "snapshots"}


@dataclass
class CompositionScenario:
    """One slicing step of ``W`` with a set ``Z`` to push through walls then slabs."""

    B: ClosedBall
    W: DSlice
    A: SimplicialSet
    Z: SimplicialSet
    L: float
    axis: int = 0
    zeta: float = None
    t_per_stage: float = 50.0
    edge_divisor: float = 32.0
    label: str = ""

    def __post_init__(self):
        if self.zeta is None:
            self.zeta = self.B.radius / 8.0

    def build(self):
        """Return ``(walls, slabs, family)`` with deterministic wall and cone points."""
        from dataclasses import replace

        from .coning import pick_cone_point
        from .geometry import deepest_point
        from .slicing import choose_hyperplane_family, consecutive_planes, slab_decompose

        none = SimplicialSet.empty(self.W.n, 1)
        fam = choose_hyperplane_family(none, SimplicialSet.empty(self.W.n, 0), self.W,
                                       self.axis, self.L, m=2)
        fam = consecutive_planes(self.W, self.B, fam)
        fam = replace(fam, slabs=tuple(slab_decompose(self.W, fam)))
        wall_pts = [deepest_point(self.W.fix(self.axis, c), self.B) for c in fam.interior_planes]
        slab_pts = [pick_cone_point(clip_to_slice(self.A, Wj), None, Wj, self.B)
                    for Wj in fam.slabs]
        eps_w = min(fam.step / 4.0, self.zeta / 2.0)
        walls, slabs = scenarios_from_decomposition(self.W, self.B, fam, self.A, wall_pts,
                                                    slab_pts, self.zeta,
                                                    max_edge=eps_w / self.edge_divisor)
        return walls, slabs, fam

    def run(self, tol=1e-3):
        walls, slabs, fam = self.build()
        Yt, rep = compose_flows(walls, slabs, self.Z, self.t_per_stage, W=self.W, tol=tol)
        rep["family"] = fam.to_json()
        rep["pass"] = bool(rep["slab_boundary"]["pass"] and rep["sphere_trace"]["pass"])
        return Yt, rep

    def to_json(self):
        from .io import set_to_json
        return {"mode": "compose", "ball": {"center": self.B.c.tolist(), "radius": self.B.radius},
                "W": self.W.to_json(), "A": set_to_json(self.A), "Z": set_to_json(self.Z),
                "L": self.L, "axis": self.axis, "zeta": self.zeta,
                "t_per_stage": self.t_per_stage, "edge_divisor": self.edge_divisor,
                "label": self.label}

    @classmethod
    def from_json(cls, obj):
        from .io import set_from_json
        ball = obj["ball"]
        return cls(ClosedBall(np.asarray(ball["center"], dtype=np.float64), float(ball["radius"])),
                   DSlice.from_json(obj["W"]), set_from_json(obj["A"]), set_from_json(obj["Z"]),
                   float(obj["L"]), int(obj.get("axis", 0)), obj.get("zeta"),
                   float(obj.get("t_per_stage", 50.0)), float(obj.get("edge_divisor", 32.0)),
                   obj.get("label", ""))


def two_slab_example():
    """Arc over two points of the unit disk, cut once by ``{x_0 = 0}``."""
    B = ClosedBall(np.zeros(2), 1.0)
    a1, a2 = np.array([-0.6, -0.8]), np.array([0.6, -0.8])
    t = np.linspace(0.0, 1.0, 41)[:, None]
    arc = (1 - t) ** 2 * a1 + 2 * t * (1 - t) * np.array([0.0, 0.9]) + t ** 2 * a2
    return CompositionScenario(B, DSlice.box([-1.0, -1.0], [1.0, 1.0]),
                               SimplicialSet.from_points(np.array([a1, a2])),
                               SimplicialSet.polyline(arc), 1.0, label="two-slab arc")


def disk_example():
    """Full-dimensional disk scenario: the same arc, coned to ``p = (0, 0.1)``."""
    cs = two_slab_example()
    sc = FlowScenario(cs.B, cs.W, np.array([0.0, 0.1]), cs.A, eps=0.1, label="disk arc")
    return sc, cs.Z


def scenario_from_json(obj):
    """``("single", scenario, Z)`` or ``("compose", composition, None)`` from a scenario file."""
    from .io import set_from_json
    if not isinstance(obj, dict):
        raise PreconditionError("scenario must be a JSON object")
    mode = obj.get("mode", "single")
    try:
        if mode == "compose":
            return mode, CompositionScenario.from_json(obj), None
        if mode == "single":
            return mode, FlowScenario.from_json(obj), set_from_json(obj["Z"])
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"scenario is missing or mistypes a field: {exc}") from exc
    raise PreconditionError(f"unknown scenario mode {mode!r}")


def scenario_to_json(sc, Z):
    from .io import set_to_json
    return dict(sc.to_json(), mode="single", Z=set_to_json(Z))
