"""Embedded simplicial sets and the set operations the construction needs.

A :class:`SimplicialSet` is a finite list of simplices (vertex-index tuples)
over a shared vertex array in R^n.  Simplices may have different sizes; the
declared ``dim`` bounds them.  Each simplex carries a frozenset of string
tags.  The ``exceptional`` tag marks the exceptional sub-complex, so a single
object carries both a set and its exceptional part.

Clipping and hyperplane intersection are exact (up to floating point) for
simplices of dimension <= 2, which covers every input the construction
produces for m <= 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .config import GEOM_TOL
from .errors import PreconditionError

EXCEPTIONAL = "exceptional"
DEGENERATE = "degenerate"
TANGENTIAL = "tangential"

_EMPTY_TAGS = frozenset()


@dataclass(frozen=True, eq=False)
class SimplicialSet:
    vertices: np.ndarray
    simplices: tuple
    dim: int
    tags: tuple

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2:
            raise PreconditionError("vertices must be a 2-d array")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("vertex coordinates must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        if len(self.tags) != len(self.simplices):
            raise PreconditionError("one tag set per simplex required")
        if self.dim < -1:
            raise PreconditionError("dim must be >= -1")
        nv = v.shape[0]
        for s, tg in zip(self.simplices, self.tags):
            if not 1 <= len(s) <= self.dim + 1:
                raise PreconditionError(f"simplex {s} too large for dim {self.dim}")
            if min(s) < 0 or max(s) >= nv:
                raise PreconditionError(f"simplex {s} has an invalid vertex index")
            if len(set(s)) != len(s) and DEGENERATE not in tg:
                raise PreconditionError(f"simplex {s} repeats a vertex")

    # construction -----------------------------------------------------

    @classmethod
    def build(cls, vertices, simplices, dim=None, tags=None):
        vertices = np.asarray(vertices, dtype=np.float64)
        if vertices.ndim == 1:
            vertices = vertices.reshape(0, 0) if vertices.size == 0 else vertices[None, :]
        simplices = tuple(tuple(int(i) for i in s) for s in simplices)
        if dim is None:
            dim = max((len(s) - 1 for s in simplices), default=-1)
        if tags is None:
            tags = (_EMPTY_TAGS,) * len(simplices)
        else:
            tags = tuple(frozenset(t) for t in tags)
        return cls(vertices, simplices, int(dim), tags)

    @classmethod
    def empty(cls, n, dim=-1):
        return cls(np.zeros((0, n)), (), dim, ())

    @classmethod
    def from_points(cls, points, tags=()):
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        tg = frozenset(tags)
        return cls(pts, tuple((i,) for i in range(len(pts))), 0, (tg,) * len(pts))

    @classmethod
    def polyline(cls, points, closed=False):
        pts = np.asarray(points, dtype=np.float64)
        k = len(pts)
        edges = [(i, i + 1) for i in range(k - 1)]
        if closed and k > 2:
            edges.append((k - 1, 0))
        return cls(pts, tuple(edges), 1, (_EMPTY_TAGS,) * len(edges))

    # basic queries ----------------------------------------------------

    @property
    def n(self):
        return self.vertices.shape[1]

    def __len__(self):
        return len(self.simplices)

    def is_empty(self):
        return len(self.simplices) == 0

    def simplex_points(self, i):
        return self.vertices[list(self.simplices[i])]

    def top_indices(self, d=None):
        d = self.dim if d is None else d
        return [i for i, s in enumerate(self.simplices) if len(s) == d + 1]

    def used_vertices(self):
        used = sorted({v for s in self.simplices for v in s})
        return self.vertices[used] if used else np.zeros((0, self.n))

    def points_of(self, indices):
        used = sorted({v for i in indices for v in self.simplices[i]})
        return self.vertices[used] if used else np.zeros((0, self.n))

    # tag handling -----------------------------------------------------

    def select(self, indices, dim=None):
        """Sub-complex made of the listed simplices (vertices compacted)."""
        indices = list(indices)
        used = sorted({v for i in indices for v in self.simplices[i]})
        remap = {old: new for new, old in enumerate(used)}
        verts = self.vertices[used] if used else np.zeros((0, self.n))
        simp = tuple(tuple(remap[v] for v in self.simplices[i]) for i in indices)
        tags = tuple(self.tags[i] for i in indices)
        return SimplicialSet(verts, simp, self.dim if dim is None else dim, tags)

    def tagged(self, tag):
        return self.select(i for i, t in enumerate(self.tags) if tag in t)

    def untagged(self, tag):
        return self.select(i for i, t in enumerate(self.tags) if tag not in t)

    def with_tag(self, tag):
        return SimplicialSet(self.vertices, self.simplices, self.dim,
                             tuple(t | {tag} for t in self.tags))

    def with_dim(self, dim):
        return SimplicialSet(self.vertices, self.simplices, dim, self.tags)

    def translated(self, shift):
        return SimplicialSet(self.vertices + np.asarray(shift), self.simplices,
                             self.dim, self.tags)

    def scaled(self, factor):
        return SimplicialSet(self.vertices * factor, self.simplices, self.dim, self.tags)

    # combination ------------------------------------------------------

    def welded(self, tol=GEOM_TOL):
        """Merge vertices closer than ``tol`` and drop duplicate simplices.

        Duplicate simplices keep the union of their tags.  Simplices that
        collapse onto repeated vertices are reduced to their distinct vertices.
        """
        return union([self], tol=tol)

    def summary(self):
        return {"n": self.n, "dim": self.dim, "vertices": int(self.vertices.shape[0]),
                "simplices": len(self.simplices)}


def union(sets, dim=None, tol=GEOM_TOL):
    """Union of complexes in the same ambient space, welded and deduplicated."""
    sets = [s for s in sets]
    if not sets:
        raise PreconditionError("union of nothing")
    n = sets[0].n
    if dim is None:
        dim = max(s.dim for s in sets)
    verts = [s.vertices for s in sets]
    offsets = np.cumsum([0] + [len(v) for v in verts])
    allv = np.concatenate(verts, axis=0) if verts else np.zeros((0, n))
    rep = _weld_map(allv, tol)
    order = sorted(set(rep.tolist()))
    new_index = {old: k for k, old in enumerate(order)}
    new_verts = allv[order] if order else np.zeros((0, n))
    seen = {}
    simp_out = []
    tags_out = []
    for s, off in zip(sets, offsets[:-1]):
        for simplex, tg in zip(s.simplices, s.tags):
            mapped = []
            for v in simplex:
                w = new_index[rep[v + off]]
                if w not in mapped:
                    mapped.append(w)
            key = tuple(sorted(mapped))
            if key in seen:
                k = seen[key]
                # a simplex present as both ordinary and exceptional stays exceptional
                tags_out[k] = tags_out[k] | tg
                continue
            seen[key] = len(simp_out)
            simp_out.append(tuple(mapped))
            tags_out.append(tg)
    return SimplicialSet(new_verts, tuple(simp_out), dim, tuple(tags_out))


def _weld_map(points, tol):
    """Representative index for every point: smallest index within ``tol``."""
    m = len(points)
    parent = np.arange(m)
    if m < 2:
        return parent
    pairs = cKDTree(points).query_pairs(tol, output_type="ndarray")

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in sorted(map(tuple, pairs)):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return np.array([find(i) for i in range(m)])


# -------------------------------------------------------------------------
# volumes


def simplex_volumes(points):
    """k-volumes of simplices given as an array of shape (S, k+1, n)."""
    points = np.asarray(points, dtype=np.float64)
    if points.shape[0] == 0:
        return np.zeros(0)
    k = points.shape[1] - 1
    if k == 0:
        return np.ones(points.shape[0])
    edges = points[:, 1:, :] - points[:, :1, :]
    gram = edges @ np.swapaxes(edges, 1, 2)
    det = np.linalg.det(gram)
    return np.sqrt(np.clip(det, 0.0, None)) / math.factorial(k)


def unit_ball_volume(d):
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


# -------------------------------------------------------------------------
# clipping and hyperplane intersection


def _dedupe_points(pts, tol):
    out = []
    for p in pts:
        if all(np.linalg.norm(p - q) > tol for q in out):
            out.append(p)
    return out


def _polygon_pieces(poly, tol):
    """Split a convex planar polygon (ordered vertex list) into simplices."""
    ring = []
    for p in poly:
        if not ring or np.linalg.norm(p - ring[-1]) > tol:
            ring.append(p)
    while len(ring) > 1 and np.linalg.norm(ring[0] - ring[-1]) <= tol:
        ring.pop()
    if len(ring) == 0:
        return []
    if len(ring) == 1:
        return [np.array([ring[0]])]
    if len(ring) >= 3:
        tris = [np.array([ring[0], ring[i], ring[i + 1]]) for i in range(1, len(ring) - 1)]
        areas = simplex_volumes(np.array(tris))
        scale = max(np.linalg.norm(r - ring[0]) for r in ring)
        if areas.sum() > tol * max(scale, tol):
            return [t for t, a in zip(tris, areas) if a > 0.0]
    # collinear: keep the extreme pair
    pts = np.array(ring)
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    i, j = np.unravel_index(np.argmax(d), d.shape)
    return [np.array([pts[i], pts[j]])]


def _clip_piece(pts, axis, bound, keep_below, tol):
    """Clip a simplex (point, segment or triangle) by a coordinate half-space."""
    s = pts[:, axis] - bound
    if not keep_below:
        s = -s
    k = len(pts)
    if np.all(s <= tol):
        return [pts]
    if np.all(s > tol):
        return []
    if k == 1:
        return []
    if k == 2:
        a, b = pts
        sa, sb = s
        t = min(max(sa / (sa - sb), 0.0), 1.0)
        c = a + t * (b - a)
        c[axis] = bound
        inside = a if sa <= tol else b
        if np.linalg.norm(inside - c) <= tol:
            return [np.array([c])]
        return [np.array([inside, c]) if sa <= tol else np.array([c, inside])]
    if k == 3:
        out = []
        for i in range(3):
            p, q = pts[i], pts[(i + 1) % 3]
            sp, sq = s[i], s[(i + 1) % 3]
            if sp <= tol:
                out.append(p)
            if (sp <= tol) != (sq <= tol) and abs(sp - sq) > 0:
                t = sp / (sp - sq)
                c = p + t * (q - p)
                c[axis] = bound
                out.append(c)
        return _polygon_pieces(out, tol)
    raise NotImplementedError("clipping is implemented for simplices of dimension <= 2")


def _rebuild(pieces, n, dim):
    verts = []
    simp = []
    tags = []
    for pts, tg in pieces:
        base = len(verts)
        verts.extend(pts)
        simp.append(tuple(range(base, base + len(pts))))
        tags.append(tg)
    v = np.array(verts) if verts else np.zeros((0, n))
    return union([SimplicialSet(v, tuple(simp), dim, tuple(tags))])


def clip_halfspace(X, axis, bound, keep_below, tol=GEOM_TOL):
    """``X ∩ {x_axis <= bound}`` (or ``>=`` when ``keep_below`` is False)."""
    pieces = []
    for i, tg in enumerate(X.tags):
        for piece in _clip_piece(X.simplex_points(i).copy(), axis, bound, keep_below, tol):
            pieces.append((piece, tg))
    return _rebuild(pieces, X.n, X.dim)


def _hyperplane_piece(pts, axis, c, tol):
    s = pts[:, axis] - c
    on = np.abs(s) <= tol
    if np.all(on):
        out = pts.copy()
        out[:, axis] = c
        return out, True
    cand = [pts[i].copy() for i in range(len(pts)) if on[i]]
    k = len(pts)
    for i in range(k):
        for j in range(i + 1, k):
            if not on[i] and not on[j] and s[i] * s[j] < 0:
                t = s[i] / (s[i] - s[j])
                cand.append(pts[i] + t * (pts[j] - pts[i]))
    cand = _dedupe_points(cand, tol)
    for p in cand:
        p[axis] = c
    if not cand:
        return None, False
    if len(cand) <= 2:
        return np.array(cand), False
    # planar polygon inside the hyperplane: order by angle and fan
    arr = np.array(cand)
    ctr = arr.mean(axis=0)
    rel = arr - ctr
    _, _, vt = np.linalg.svd(rel, full_matrices=False)
    u, w = rel @ vt[0], rel @ vt[1]
    order = np.argsort(np.arctan2(w, u), kind="stable")
    return arr[order], False


def intersect_hyperplane(X, axis, c, tol=GEOM_TOL):
    """Set intersection ``X ∩ {x_axis = c}``.

    Simplices contained in the hyperplane are kept whole; the result keeps
    ``X.dim`` as its declared dimension.  Returns ``(result, contained)``
    where ``contained`` lists the indices of simplices lying in the plane.
    """
    pieces = []
    contained = []
    for i, tg in enumerate(X.tags):
        pts, inside = _hyperplane_piece(X.simplex_points(i), axis, c, tol)
        if pts is None:
            continue
        if inside:
            contained.append(i)
        if len(pts) >= 3 and not inside:
            for piece in _polygon_pieces(list(pts), tol):
                pieces.append((piece, tg))
        else:
            pieces.append((pts, tg))
    return _rebuild(pieces, X.n, X.dim), contained


def clip_to_slice(X, W, tol=GEOM_TOL):
    """Set intersection ``X ∩ W`` for an axis-aligned slice ``W``."""
    out = X
    for j, c in sorted(W.fixed.items()):
        out, _ = intersect_hyperplane(out, j, c, tol)
    for i, (lo, hi) in sorted(W.bounds.items()):
        if math.isfinite(lo):
            out = clip_halfspace(out, i, lo, keep_below=False, tol=tol)
        if math.isfinite(hi):
            out = clip_halfspace(out, i, hi, keep_below=True, tol=tol)
    return out


def faces(simplex, k):
    """All k-faces (as sorted index tuples) of a simplex."""
    from itertools import combinations
    return [tuple(f) for f in combinations(simplex, k + 1)]


def refine(X, density=4, max_edge=None):
    """Subdivide every edge into ``density + 1`` pieces (further if ``max_edge``).

    Points stay points; segments become polylines; triangles are split into
    the standard ``k*k`` sub-triangles.
    """
    if X.dim > 2:
        raise NotImplementedError("refinement is implemented for dim <= 2")
    pieces = []
    for i, tg in enumerate(X.tags):
        pts = X.simplex_points(i)
        k = int(density) + 1
        if max_edge is not None and len(pts) > 1:
            longest = max(np.linalg.norm(pts[a] - pts[b])
                          for a in range(len(pts)) for b in range(a + 1, len(pts)))
            k = max(k, int(math.ceil(longest / max_edge)))
        if len(pts) == 1:
            pieces.append((pts, tg))
        elif len(pts) == 2:
            t = np.linspace(0.0, 1.0, k + 1)[:, None]
            line = pts[0] + t * (pts[1] - pts[0])
            for a in range(k):
                pieces.append((line[a:a + 2], tg))
        else:
            a, b, c = pts

            def grid(ii, jj):
                return a + (b - a) * (ii / k) + (c - a) * (jj / k)

            for ii in range(k):
                for jj in range(k - ii):
                    pieces.append((np.array([grid(ii, jj), grid(ii + 1, jj), grid(ii, jj + 1)]), tg))
                    if ii + jj < k - 1:
                        pieces.append((np.array([grid(ii + 1, jj), grid(ii + 1, jj + 1),
                                                 grid(ii, jj + 1)]), tg))
    return _rebuild(pieces, X.n, X.dim)
