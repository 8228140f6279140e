"""Recursive construction of a spanning set with controlled measure.

A node ``P(m, k, N)`` receives a closed set ``A`` (a simplicial complex of
dimension ``m - 1`` whose ``exceptional``-tagged part plays the role of the
exceptional set ``S``), a ball ``B``, an N-slice ``W`` and a bound ``L``.  It
returns an m-dimensional complex ``A_tilde`` in ``W ∩ B`` whose
``exceptional`` part is ``S_tilde``.

* ``m = 1``: a single interior point.
* ``k = N``: the cone over ``A ∩ W`` from a point of ``(A ∩ W) minus S``.
* otherwise: if the ``(k+1)``-width of ``W`` is at most ``L`` the node defers
  to ``P(m, k+1, N)``; if not, ``W`` is cut by walls spaced ``L`` apart, each
  wall gets a ``P(m-1, 0, N-1)`` span, and each slab between walls a
  ``P(m, k+1, N)`` span with the enlarged bound ``script_L(m, L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import constants
from .coning import cone, pick_cone_point
from .config import GEOM_TOL
from .errors import IsospanError, PreconditionError, PreconditionP10
from .geometry import (
    ClosedBall,
    DSlice,
    deepest_point,
    distance_to_set,
    hull_distance,
    k_width,
)
from .measure import hm
from .simplicial import EXCEPTIONAL, SimplicialSet, clip_to_slice, union
from .slicing import decompose

DEFAULT_MAX_N = 4


@dataclass
class SpanOptions:
    n_offsets: int = 1024
    enforce_preconditions: bool = True
    tol: float = 1e-9
    max_n: int = DEFAULT_MAX_N


@dataclass
class PNodeInput:
    A: SimplicialSet
    B: ClosedBall
    W: DSlice
    L: float
    zeta: float
    m: int
    k: int
    N: int

    @property
    def S(self):
        return self.A.tagged(EXCEPTIONAL)


@dataclass
class SpanResult:
    A_tilde: SimplicialSet
    kind: str
    m: int
    k: int
    N: int
    K: float
    L: float
    zeta: float
    path: str
    A_W: SimplicialSet
    B: ClosedBall
    W: DSlice
    script_L: float = None
    children: list = field(default_factory=list)
    slabs: object = None
    checks: dict = field(default_factory=dict)
    preconditions: dict = field(default_factory=dict)

    @property
    def S_tilde(self):
        return self.A_tilde.tagged(EXCEPTIONAL)

    @property
    def ledger_node(self):
        return {"m": self.m, "k": self.k, "N": self.N, "K": self.K, "L": _f(self.L),
                "script_L": _f(self.script_L) if self.script_L is not None else None}

    def measures(self):
        m = self.m
        return {"A_W": hm(self.A_W, m - 1) if m >= 2 else float(len(self.A_W.used_vertices())),
                "A_tilde": hm(self.A_tilde, m),
                "S_tilde": hm(self.S_tilde, m - 1) if m >= 2 else 0.0}

    def to_json(self):
        out = {"path": self.path, "kind": self.kind, "ledger": self.ledger_node,
               "zeta": self.zeta, "W": self.W.to_json(), "measures": self.measures(),
               "preconditions": self.preconditions, "checks": self.checks,
               "A_tilde": self.A_tilde.summary(), "S_tilde": self.S_tilde.summary(),
               "children": [c.to_json() for c in self.children]}
        if self.slabs is not None:
            out["slabs"] = self.slabs.to_json()
        return out

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


def _f(x):
    return x if math.isfinite(x) else "inf"


def _node_A(inp):
    return clip_to_slice(inp.A, inp.W).with_dim(inp.m - 1)


def _preconditions(inp, A_W, opts):
    """Record the node preconditions; raise when enforced and violated."""
    L, m = inp.L, inp.m
    pre = {}
    if m >= 2:
        kw = k_width(inp.W, inp.k)
        pre["L_ge_k_width"] = bool(kw <= L + opts.tol)
        mass = hm(A_W, m - 1)
        pre["L_ge_mass_bound"] = bool(4.0 * mass ** (1.0 / (m - 1)) <= L * (1 + 1e-12) + opts.tol)
    if opts.enforce_preconditions and not all(pre.values()):
        raise PreconditionError(f"node preconditions fail: {pre}")
    return pre


def _reraise(err, path):
    if getattr(err, "node_path", None) is None:
        err.node_path = path
        err.args = (f"{path}: {err.args[0] if err.args else ''}",) + err.args[1:]
    raise err


def span_point(inp, opts=None, path="root"):
    """``m = 1``: a single interior point, both span and exceptional set."""
    opts = opts or SpanOptions()
    if inp.m != 1 or inp.k != 0:
        raise PreconditionError("span_point handles m = 1, k = 0 only")
    A_W = clip_to_slice(inp.A, inp.W)
    p = deepest_point(inp.W, inp.B)
    pt = SimplicialSet.from_points(p[None], tags=(EXCEPTIONAL,)).with_dim(1)
    pre = {"A_W_empty": bool(A_W.is_empty())}
    if not A_W.is_empty():
        if opts.enforce_preconditions:
            raise PreconditionP10(f"{path}: A meets the slice in {len(A_W)} simplices")
        # relaxed: whatever A leaves on the slice joins the exceptional output
        pt = union([pt, A_W.with_tag(EXCEPTIONAL).with_dim(1)], dim=1)
    return SpanResult(pt, "point", 1, 0, inp.N, constants.K1_CONVENTION, inp.L, inp.zeta,
                      path, A_W.with_dim(0), inp.B, inp.W, preconditions=pre)


def span_base(inp, opts=None, path="root"):
    """``k = N``: cone over ``A ∩ W`` from a point of ``(A ∩ W) minus S``."""
    opts = opts or SpanOptions()
    if inp.k != inp.N:
        raise PreconditionError("span_base needs k = N")
    A_W = _node_A(inp)
    pre = _preconditions(inp, A_W, opts)
    p = pick_cone_point(A_W, None, inp.W, inp.B)
    ordinary = A_W.untagged(EXCEPTIONAL)
    on_ordinary = (not ordinary.is_empty()
                   and distance_to_set(ordinary, p[None])[0] <= GEOM_TOL
                   and (inp.S.is_empty() or distance_to_set(A_W.tagged(EXCEPTIONAL), p[None])[0] > GEOM_TOL))
    At = cone(A_W, p).with_dim(inp.m)
    if not on_ordinary:
        At = union([At, SimplicialSet.from_points(p[None], tags=(EXCEPTIONAL,))], dim=inp.m)
    K = constants.K(inp.m, inp.k, inp.N)
    res = SpanResult(At, "base", inp.m, inp.k, inp.N, K, inp.L, inp.zeta, path, A_W,
                     inp.B, inp.W, preconditions=pre)
    res.checks["cone_point"] = {"point": p.tolist(), "exceptional": not on_ordinary}
    return res


def _slicing_axis(W, L):
    """Widest free direction with width > L (ties to the smallest index)."""
    cands = [(-(hi - lo), i) for i, (lo, hi) in W.bounds.items() if hi - lo > L]
    return min(cands)[1] if cands else None


def span_step(inp, opts=None, path="root"):
    """``k < N``: defer to ``P(m, k+1, N)`` or cut ``W`` into walls and slabs."""
    opts = opts or SpanOptions()
    m, k, N, L = inp.m, inp.k, inp.N, inp.L
    if not k < N:
        raise PreconditionError("span_step needs k < N")
    A_W = _node_A(inp)
    pre = _preconditions(inp, A_W, opts)
    K = constants.K(m, k, N)
    if k_width(inp.W, k + 1) <= L:
        child = _solve(PNodeInput(inp.A, inp.B, inp.W, L, inp.zeta, m, k + 1, N), opts, path + "/defer")
        return SpanResult(child.A_tilde, "defer", m, k, N, K, L, inp.zeta, path, A_W, inp.B,
                          inp.W, children=[child], preconditions=pre)

    axis = _slicing_axis(inp.W, L)
    mass = hm(A_W, m - 1)
    fam = decompose(A_W, inp.W, inp.B, axis, L, opts.n_offsets, m=m)
    zeta0 = min(L / 4.0, inp.zeta / 2.0)
    walls = []
    for j, c in enumerate(fam.interior_planes, start=1):
        sub = PNodeInput(A_W, inp.B, inp.W.fix(axis, c), L, zeta0, m - 1, 0, N - 1)
        walls.append(_solve(sub, opts, f"{path}/wall[{j}]"))
    calA = union([A_W] + [w.A_tilde.with_dim(m - 1) for w in walls], dim=m - 1)

    sL = constants.script_L(m, L, N)
    slabs = []
    lbound = []
    for j, Wj in enumerate(fam.slabs):
        sub = PNodeInput(calA, inp.B, Wj, sL, zeta0 / 2.0, m, k + 1, N)
        part = clip_to_slice(calA, Wj).with_dim(m - 1)
        lhs = 4.0 * hm(part, m - 1) ** (1.0 / (m - 1))
        lbound.append({"slab": j, "lhs": lhs, "rhs": sL, "pass": bool(lhs <= sL + opts.tol)})
        slabs.append(_solve(sub, opts, f"{path}/slab[{j}]"))

    At = union([calA.with_dim(m)] + [s.A_tilde for s in slabs], dim=m)
    res = SpanResult(At, "step", m, k, N, K, L, inp.zeta, path, A_W, inp.B, inp.W,
                     script_L=sL, children=walls + slabs, slabs=fam, preconditions=pre)

    # numerical counterparts of the estimates behind the step
    k0 = constants.K(m - 1, 0, N - 1)
    x_mass = sum(hm(w.A_tilde.with_dim(m - 1), m - 1) for w in walls) if m >= 3 else 0.0
    mid = k0 * L * sum(fam.wall_measures[1:-1])
    res.checks["averaging_bound"] = {"wall_measure": _f(fam.wall_measure), "bound": fam.bound,
                                     "pass": bool(fam.wall_measure <= fam.bound * (1 + 1e-9) + 1e-12)}
    res.checks["wall_chain"] = {"walls": x_mass, "middle": _f(mid), "bound": 2.0 * k0 * mass,
                                "pass": bool(x_mass <= mid + opts.tol and mid <= 2.0 * k0 * mass + opts.tol)}
    # the slab bound is derived from the node preconditions; without them it is informational
    res.checks["script_L_bound"] = {"slabs": lbound, "pass": all(e["pass"] for e in lbound),
                                    "premise_holds": all(pre.values())}
    total = sum(hm(s.A_tilde, m) for s in slabs)
    res.checks["assembly"] = {"lhs": hm(At, m), "rhs": total,
                              "pass": bool(hm(At, m) <= total + opts.tol)}
    res.checks["zeta"] = {"wall": zeta0, "slab": zeta0 / 2.0}
    return res


def _solve(inp, opts, path):
    try:
        if inp.m == 1:
            return span_point(inp, opts, path)
        if inp.k == inp.N:
            return span_base(inp, opts, path)
        return span_step(inp, opts, path)
    except IsospanError as err:
        _reraise(err, path)


# -------------------------------------------------------------------------
# property verification


def _ordinary_vertices(X):
    """Vertices of non-exceptional simplices that are not themselves exceptional."""
    ordinary = X.untagged(EXCEPTIONAL)
    if ordinary.is_empty():
        return np.zeros((0, X.n))
    verts = ordinary.used_vertices()
    exc = X.tagged(EXCEPTIONAL)
    if not exc.is_empty() and len(verts):
        verts = verts[distance_to_set(exc, verts) > GEOM_TOL]
    return verts


def _check_a(res, tol):
    """Points of the span on the sphere must be points of ``A`` on the sphere."""
    V = res.A_tilde.used_vertices()
    if not len(V):
        return {"pass": True, "violations": 0, "max_distance": 0.0}
    on = np.abs(np.linalg.norm(V - res.B.c, axis=1) - res.B.radius) <= tol
    if not on.any():
        return {"pass": True, "violations": 0, "max_distance": 0.0}
    d = distance_to_set(res.A_W, V[on]) if not res.A_W.is_empty() else np.full(on.sum(), np.inf)
    bad = int((d > tol).sum())
    return {"pass": bad == 0, "violations": bad, "max_distance": _f(float(d.max()))}


def _check_b(res, tol):
    m = res.m
    lhs = hm(res.A_tilde, m)
    mass = hm(res.A_W, m - 1) if m >= 2 else 0.0
    rhs = 0.0 if mass == 0.0 else res.K * res.L * mass
    return {"lhs": lhs, "rhs": _f(rhs), "pass": bool(lhs <= rhs + tol)}


def _check_d(res, tol, hull_tol):
    """``A_tilde minus S_tilde`` inside ``Conv`` and ``N(·, K L)`` of ``(A ∩ W) minus S``."""
    base = res.A_W.untagged(EXCEPTIONAL) if not res.A_W.is_empty() else res.A_W
    if res.A_tilde.untagged(EXCEPTIONAL).is_empty():
        return {"pass": True, "vacuous": True, "checked": 0}
    probes = _ordinary_vertices(res.A_tilde)
    ordinary = res.A_tilde.untagged(EXCEPTIONAL)
    bary = np.array([ordinary.simplex_points(i).mean(axis=0) for i in range(len(ordinary))])
    if len(bary):
        exc = res.A_tilde.tagged(EXCEPTIONAL)
        if not exc.is_empty():
            bary = bary[distance_to_set(exc, bary) > GEOM_TOL]
        probes = np.vstack([probes, bary]) if len(bary) else probes
    if not len(probes):
        return {"pass": True, "vacuous": True, "checked": 0}
    if base.is_empty():
        return {"pass": False, "vacuous": False, "checked": len(probes),
                "reason": "non-exceptional output over an exceptional-only input"}
    H = base.used_vertices()
    radius = res.K * res.L
    dist = distance_to_set(base, probes)
    near = bool(np.all(dist <= radius + tol)) if math.isfinite(radius) else True
    known = cKDTree(H).query(probes)[0] <= GEOM_TOL
    outside = 0
    worst = 0.0
    for q, ok in zip(probes, known):
        if ok:
            continue
        dq = hull_distance(H, q)
        worst = max(worst, dq)
        if dq > hull_tol:
            outside += 1
    return {"pass": bool(near and outside == 0), "vacuous": False, "checked": len(probes),
            "hull_violations": outside, "max_hull_distance": worst,
            "max_distance": float(dist.max()), "radius": _f(radius)}


def verify_properties(result, tol=1e-9, hull_tol=1e-6):
    """Check (a), (b), (d) at every node; (c) is reported as not applicable.

    Returns a list of per-node entries; failures are entries, not exceptions.
    """
    out = []
    for node in result.walk():
        entry = {"path": node.path, "kind": node.kind, "m": node.m, "k": node.k, "N": node.N,
                 "a": _check_a(node, tol), "b": _check_b(node, tol),
                 "c": "not_applicable", "d": _check_d(node, tol, hull_tol)}
        steps = [v["pass"] for v in node.checks.values()
                 if isinstance(v, dict) and "pass" in v and v.get("premise_holds", True)]
        entry["pass"] = bool(entry["a"]["pass"] and entry["b"]["pass"] and entry["d"]["pass"]
                             and all(steps))
        out.append(entry)
    return out


# -------------------------------------------------------------------------
# top level


@dataclass
class SpanRun:
    root: SpanResult
    A: SimplicialSet
    B: ClosedBall
    m: int
    L: float
    L_mode: str
    zeta: float
    properties: list
    isoperimetric: dict
    options: SpanOptions

    @property
    def A_tilde(self):
        return self.root.A_tilde

    @property
    def S_tilde(self):
        return self.root.S_tilde

    @property
    def passed(self):
        return bool(self.isoperimetric["pass"] and all(e["pass"] for e in self.properties))

    def to_json(self):
        return {"schema": 1, "command": "span", "m": self.m, "n": self.A.n,
                "ball": {"center": self.B.c.tolist(), "radius": self.B.radius},
                "L": _f(self.L), "L_mode": self.L_mode, "zeta": self.zeta,
                "K1_0_convention": constants.K1_CONVENTION,
                "options": {"n_offsets": self.options.n_offsets,
                            "enforce_preconditions": self.options.enforce_preconditions,
                            "tol": self.options.tol},
                "isoperimetric": self.isoperimetric, "properties": self.properties,
                "property_c": "not_applicable", "tree": self.root.to_json(),
                "pass": self.passed}


def span(A, B, m, L="auto", zeta=None, opts=None):
    """Run the root node ``P(m, 0, n, n)`` and verify its conclusions.

    ``L="auto"`` uses ``4 H^(m-1)(A)^(1/(m-1))``; it must then be positive.
    """
    opts = opts or SpanOptions()
    n = A.n
    if not 2 <= m <= n:
        raise PreconditionError("need 2 <= m <= n")
    if n > opts.max_n:
        raise PreconditionError(f"ambient dimension {n} exceeds the configured maximum {opts.max_n}")
    if B.n != n:
        raise PreconditionError("ball and set live in different spaces")
    if A.dim > m - 1:
        raise PreconditionError(f"A has dimension {A.dim} > m - 1")
    A = A.with_dim(m - 1)
    if not A.is_empty():
        far = np.linalg.norm(A.used_vertices() - B.c, axis=1).max()
        if far > B.radius + GEOM_TOL:
            raise PreconditionError("A is not contained in B")
    mass = hm(A, m - 1)
    if isinstance(L, str):
        if L != "auto":
            L = float(L)
    if L == "auto":
        L = 4.0 * mass ** (1.0 / (m - 1))
        mode = "auto"
        if not L > 0:
            raise PreconditionError("H^(m-1)(A) is 0: supply L explicitly")
    else:
        L = float(L)
        mode = "user"
        if not L > 0:
            raise PreconditionError("L must be positive")
    if zeta is None:
        zeta = B.radius / 8.0
    W = DSlice.full(n).clipped_to(B)
    root = _solve(PNodeInput(A, B, W, L, zeta, m, 0, n), opts, "root")
    props = verify_properties(root, tol=opts.tol)
    K = constants.final_constant(m, n)
    hA = hm(root.A_tilde, m)
    lhs = hA ** (m - 1)
    rhs = K * mass ** m
    isoperimetric = {"lhs": lhs, "rhs": rhs, "final_constant": K,
               "isoperimetric_constant": constants.isoperimetric_constant(m, n),
               "isoperimetric_rhs": constants.isoperimetric_constant(m, n) * mass ** m,
               "margin": rhs - lhs, "pass": bool(lhs <= rhs + opts.tol),
               "root_bound": {"lhs": hA, "rhs": _f(K * L * mass),
                              "pass": bool(hA <= K * L * mass + opts.tol)}}
    return SpanRun(root, A, B, m, L, mode, zeta, props, isoperimetric, opts)
