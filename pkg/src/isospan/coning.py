"""Cones over simplicial sets and the cone measure bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import GEOM_TOL
from .errors import PreconditionError
from .geometry import deepest_point, distance_to_set
from .measure import hm
from .simplicial import DEGENERATE, EXCEPTIONAL, SimplicialSet, simplex_volumes, union


def _degenerate(pts, tol):
    """True when the simplex spanned by ``pts`` has (relatively) zero volume."""
    if len(pts) <= 1:
        return False
    diam = float(np.max(np.linalg.norm(pts[:, None] - pts[None], axis=2)))
    if diam <= tol:
        return True
    vol = simplex_volumes(pts[None])[0]
    return vol <= tol * diam ** (len(pts) - 1)


def cone(X, p, tol=GEOM_TOL):
    """The cone ``C(X, p)``: X, the apex, and every simplex of X joined to ``p``.

    Joined simplices with ``p`` in their affine span are tagged ``degenerate``.
    Tags of a simplex carry over to its cone, so the cone over an exceptional
    part stays exceptional.  An empty ``X`` gives ``{p}``.
    """
    p = np.asarray(p, dtype=np.float64)
    apex = SimplicialSet.from_points(p[None, :])
    if X.is_empty():
        return apex.with_dim(max(X.dim + 1, 0))
    if X.n != p.size:
        raise PreconditionError("apex and set live in different spaces")
    X = X.welded(tol)
    k = len(X.vertices)
    verts = np.vstack([X.vertices, p[None, :]])
    near = np.linalg.norm(X.vertices - p, axis=1) <= tol
    simp, tags = [], []
    for s, tg in zip(X.simplices, X.tags):
        if any(near[v] for v in s):
            continue
        joined = s + (k,)
        if _degenerate(verts[list(joined)], tol):
            tg = tg | {DEGENERATE}
        simp.append(joined)
        tags.append(tg)
    joined_set = SimplicialSet(verts, tuple(simp), X.dim + 1, tuple(tags))
    return union([X.with_dim(X.dim + 1), joined_set, apex], dim=X.dim + 1, tol=tol)


def _exceptional_part(A_W, S):
    parts = [A_W.tagged(EXCEPTIONAL)]
    if S is not None and not S.is_empty():
        parts.append(S)
    return union(parts)


def pick_cone_point(A_W, S, W, B, tol=GEOM_TOL):
    """Deterministic point of ``(A ∩ W) minus S``, or the deepest point of ``W ∩ int(B)``.

    Candidates are vertices of non-exceptional simplices that are not in the
    exceptional set (``S`` together with the exceptional-tagged part of
    ``A_W``); the lexicographically smallest one wins.  When every such vertex
    is exceptional the barycenter of the first non-exceptional top simplex is
    used instead.
    """
    ordinary = A_W.untagged(EXCEPTIONAL) if not A_W.is_empty() else A_W
    if ordinary.is_empty():
        return deepest_point(W, B)
    exc = _exceptional_part(A_W, S)
    verts = ordinary.used_vertices()
    if not exc.is_empty():
        d = distance_to_set(exc, verts)
        verts = verts[d > tol]
    if len(verts):
        order = np.lexsort(verts.T[::-1])
        return verts[order[0]].copy()
    top = ordinary.top_indices(max(len(s) for s in ordinary.simplices) - 1)
    bary = sorted((tuple(ordinary.simplex_points(i).mean(axis=0)) for i in top))
    for q in bary:
        q = np.array(q)
        if exc.is_empty() or distance_to_set(exc, q[None])[0] > tol:
            return q
    return deepest_point(W, B)


@dataclass
class ConeBound:
    lhs: float
    rhs: float
    passed: bool
    skipped: bool = False

    def to_json(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "pass": self.passed, "skipped": self.skipped}


def cone_bound_check(X, p, r, m=None, tol=1e-9):
    """Compare ``H^m(C(X, p))`` with ``2^(2m-1) r H^(m-1)(X)``.

    Skipped for ``m = 1``, where the bound is never used.
    """
    m = X.dim + 1 if m is None else m
    if m < 2:
        return ConeBound(0.0, 0.0, True, skipped=True)
    p = np.asarray(p, dtype=np.float64)
    if not X.is_empty():
        far = np.linalg.norm(X.used_vertices() - p, axis=1).max()
        if far > r + GEOM_TOL:
            raise PreconditionError(f"set reaches distance {far} > r = {r} from the apex")
    lhs = hm(cone(X, p), m)
    rhs = 2.0 ** (2 * m - 1) * r * hm(X, m - 1)
    return ConeBound(lhs, rhs, lhs <= rhs + tol)
