"""n-dimensional primitives: balls, axis-aligned slices, distances, hulls.

Slices follow the usual description of a d-dimensional rectangle
``{x : l_i <= x_i <= r_i (i in I), x_j = c_j (j not in I)}`` with possibly
infinite bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .config import GEOM_TOL
from .errors import NoLimitFound, NotFreeDirection, PreconditionError
from .simplicial import EXCEPTIONAL, SimplicialSet, clip_halfspace, intersect_hyperplane, union


@dataclass(frozen=True)
class ClosedBall:
    center: tuple
    radius: float

    def __post_init__(self):
        c = tuple(float(x) for x in self.center)
        if not all(math.isfinite(x) for x in c):
            raise PreconditionError("ball center must be finite")
        if not self.radius > 0:
            raise PreconditionError("ball radius must be positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def n(self):
        return len(self.center)

    @property
    def c(self):
        return np.array(self.center)

    def contains(self, q, tol=GEOM_TOL):
        return float(np.linalg.norm(np.asarray(q) - self.c)) <= self.radius + tol

    def on_boundary(self, q, tol=GEOM_TOL):
        return abs(float(np.linalg.norm(np.asarray(q) - self.c)) - self.radius) <= tol


@dataclass(frozen=True)
class DSlice:
    """Axis-aligned slice: ``bounds`` for free indices, ``fixed`` coordinates otherwise."""

    n: int
    bounds: dict = field(default_factory=dict)
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        bounds = {int(i): (float(lo), float(hi)) for i, (lo, hi) in self.bounds.items()}
        fixed = {int(j): float(c) for j, c in self.fixed.items()}
        if set(bounds) & set(fixed) or set(bounds) | set(fixed) != set(range(self.n)):
            raise PreconditionError("every coordinate must be either free or fixed")
        for i, (lo, hi) in bounds.items():
            if not lo < hi:
                raise PreconditionError(f"empty bound interval on axis {i}")
        for c in fixed.values():
            if not math.isfinite(c):
                raise PreconditionError("fixed coordinates must be finite")
        object.__setattr__(self, "bounds", dict(sorted(bounds.items())))
        object.__setattr__(self, "fixed", dict(sorted(fixed.items())))

    @classmethod
    def box(cls, lows, highs):
        return cls(len(lows), {i: (lo, hi) for i, (lo, hi) in enumerate(zip(lows, highs))}, {})

    @classmethod
    def full(cls, n):
        return cls(n, {i: (-math.inf, math.inf) for i in range(n)}, {})

    @property
    def dim(self):
        return len(self.bounds)

    @property
    def free_indices(self):
        return tuple(self.bounds)

    def free_mask(self):
        m = np.zeros(self.n, dtype=bool)
        m[list(self.bounds)] = True
        return m

    def lo_hi(self):
        """Arrays of lower/upper limits (fixed coordinates give lo == hi == c)."""
        lo = np.empty(self.n)
        hi = np.empty(self.n)
        for i, (a, b) in self.bounds.items():
            lo[i], hi[i] = a, b
        for j, c in self.fixed.items():
            lo[j] = hi[j] = c
        return lo, hi

    def with_bounds(self, axis, lo, hi):
        bounds = dict(self.bounds)
        bounds[axis] = (lo, hi)
        return replace(self, bounds=bounds)

    def fix(self, axis, c):
        bounds = dict(self.bounds)
        del bounds[axis]
        fixed = dict(self.fixed)
        fixed[axis] = c
        return DSlice(self.n, bounds, fixed)

    def fattened(self, eps):
        """The n-slice ``W + Q_eps``: fixed coordinates widened to ``c_j ± eps``."""
        bounds = dict(self.bounds)
        for j, c in self.fixed.items():
            bounds[j] = (c - eps, c + eps)
        return DSlice(self.n, bounds, {})

    def clipped_to(self, ball):
        """Replace infinite bounds by the ball's bounding box."""
        bounds = {}
        for i, (lo, hi) in self.bounds.items():
            c = ball.center[i]
            bounds[i] = (max(lo, c - ball.radius), min(hi, c + ball.radius))
        return DSlice(self.n, bounds, self.fixed)

    def contains(self, q, tol=GEOM_TOL):
        q = np.asarray(q)
        for i, (lo, hi) in self.bounds.items():
            if q[i] < lo - tol or q[i] > hi + tol:
                return False
        return all(abs(q[j] - c) <= tol for j, c in self.fixed.items())

    def to_json(self):
        return {"n": self.n,
                "bounds": {str(i): [_num(lo), _num(hi)] for i, (lo, hi) in self.bounds.items()},
                "fixed": {str(j): c for j, c in self.fixed.items()}}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["n"]),
                   {int(i): (float(lo), float(hi)) for i, (lo, hi) in obj.get("bounds", {}).items()},
                   {int(j): float(c) for j, c in obj.get("fixed", {}).items()})


def _num(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


# -------------------------------------------------------------------------
# widths


def direction_width(W, i):
    if i not in W.bounds:
        raise NotFreeDirection(f"axis {i} is not a free direction of the slice")
    lo, hi = W.bounds[i]
    return hi - lo


def k_width(W, k):
    """Smallest achievable maximum width over k free directions (0 for k = 0)."""
    if not 0 <= k <= W.dim:
        raise PreconditionError(f"k must lie in [0, {W.dim}]")
    if k == 0:
        return 0.0
    widths = sorted(hi - lo for lo, hi in W.bounds.values())
    return widths[k - 1]


# -------------------------------------------------------------------------
# slice ∩ ball geometry


def _affine_disk(W, B):
    """Center and radius of ``aff(W) ∩ B`` (radius None when empty)."""
    c = B.c.copy()
    off2 = 0.0
    for j, cj in W.fixed.items():
        off2 += (cj - c[j]) ** 2
        c[j] = cj
    r2 = B.radius ** 2 - off2
    return c, (math.sqrt(r2) if r2 > 0 else None)


def slice_extent(W, B, axis):
    """Range of ``x_axis`` over ``W ∩ B`` (None when the intersection is empty)."""
    c, rho = _affine_disk(W, B)
    if rho is None:
        return None
    other = 0.0
    for i, (lo, hi) in W.bounds.items():
        if i != axis:
            other += (max(lo - c[i], 0.0, c[i] - hi)) ** 2
    if other >= rho ** 2:
        return None
    half = math.sqrt(rho ** 2 - other)
    lo, hi = W.bounds[axis]
    a, b = max(lo, c[axis] - half), min(hi, c[axis] + half)
    return (a, b) if a <= b else None


def meets_interior(W, B, tol=GEOM_TOL):
    """Whether ``W ∩ int(B)`` is non-empty."""
    c, rho = _affine_disk(W, B)
    if rho is None:
        return False
    q = _clamp(c, W)
    return float(np.linalg.norm(q - B.c)) < B.radius - tol


def _clamp(x, W):
    q = np.array(x, dtype=np.float64)
    for i, (lo, hi) in W.bounds.items():
        q[i] = min(max(q[i], lo), hi)
    for j, cj in W.fixed.items():
        q[j] = cj
    return q


def depth_in(W, B, q):
    """Concave depth of ``q`` in ``W ∩ B``: min slack to the ball and the free faces."""
    slack = B.radius - float(np.linalg.norm(q - B.c))
    for i, (lo, hi) in W.bounds.items():
        slack = min(slack, q[i] - lo, hi - q[i])
    return slack


def deepest_point(W, B):
    """Deterministic point of ``W ∩ int(B)`` maximizing the depth along a segment.

    Starts from the point of ``W`` nearest the ball center and searches the
    segment towards the center of ``W ∩ B``'s bounding box (golden section on
    a concave function).
    """
    c, rho = _affine_disk(W, B)
    if rho is None or not meets_interior(W, B):
        raise PreconditionError("slice does not meet the interior of the ball")
    start = _clamp(c, W)
    target = start.copy()
    for i in W.bounds:
        ext = slice_extent(W, B, i)
        target[i] = 0.5 * (ext[0] + ext[1])
    a, b = 0.0, 1.0
    g = (math.sqrt(5.0) - 1.0) / 2.0

    def f(t):
        return depth_in(W, B, start + t * (target - start))

    x1, x2 = b - g * (b - a), a + g * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(80):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = f(x1)
    best = max([(f(0.0), 0.0), (f(1.0), 1.0), (f(0.5 * (a + b)), 0.5 * (a + b))])
    return start + best[1] * (target - start)


# -------------------------------------------------------------------------
# distances


def point_simplex_distance(q, pts):
    """Euclidean distance from ``q`` to the simplex spanned by the rows of ``pts``."""
    q = np.asarray(q, dtype=np.float64)
    pts = np.asarray(pts, dtype=np.float64)
    k = len(pts)
    if k == 1:
        return float(np.linalg.norm(q - pts[0]))
    if k == 2:
        return float(kernels.min_dist_to_segments(q[None, :], pts[None, :, :])[0])
    base = pts[0]
    E = (pts[1:] - base).T
    coef, *_ = np.linalg.lstsq(E, q - base, rcond=None)
    bary = np.concatenate([[1.0 - coef.sum()], coef])
    if np.all(bary >= -1e-12):
        return float(np.linalg.norm(base + E @ coef - q))
    return min(point_simplex_distance(q, np.delete(pts, i, axis=0))
               for i in range(k) if bary[i] < 0)


def _triangle_plane_distances(Q, T, chunk=256):
    """Min over triangles of the distance to the triangle's plane, counted only
    where the orthogonal projection falls inside the triangle (inf otherwise)."""
    a = T[:, 0]
    e1, e2 = T[:, 1] - a, T[:, 2] - a
    g11, g12, g22 = (e1 * e1).sum(1), (e1 * e2).sum(1), (e2 * e2).sum(1)
    det = g11 * g22 - g12 * g12
    ok = det > 1e-300
    out = np.full(len(Q), np.inf)
    for s in range(0, len(Q), chunk):
        d = Q[s:s + chunk, None, :] - a[None]  # (q, T, n)
        b1, b2 = (d * e1).sum(2), (d * e2).sum(2)
        with np.errstate(divide="ignore", invalid="ignore"):
            u = (g22 * b1 - g12 * b2) / det
            v = (g11 * b2 - g12 * b1) / det
        inside = ok & (u >= 0) & (v >= 0) & (u + v <= 1)
        r = d - u[..., None] * e1 - v[..., None] * e2
        dist = np.where(inside, np.sqrt((r * r).sum(2)), np.inf)
        out[s:s + chunk] = dist.min(axis=1)
    return out


def distance_to_set(X, Q):
    """Distances from each row of ``Q`` to the simplicial set ``X`` (inf if empty)."""
    Q = np.atleast_2d(np.asarray(Q, dtype=np.float64))
    out = np.full(len(Q), np.inf)
    if X.is_empty():
        return out
    segs = []
    tris = []
    for i, s in enumerate(X.simplices):
        pts = X.simplex_points(i)
        if len(s) <= 2:
            segs.append(pts[[0, -1]])
        elif len(s) == 3:
            tris.append(pts)
            segs.extend((pts[[0, 1]], pts[[1, 2]], pts[[2, 0]]))
        else:
            d = np.array([point_simplex_distance(q, pts) for q in Q])
            out = np.minimum(out, d)
    if segs:
        out = np.minimum(out, kernels.min_dist_to_segments(Q, np.array(segs)))
    if tris:
        out = np.minimum(out, _triangle_plane_distances(Q, np.array(tris)))
    return out


def neighborhood_contains(X, q, r, tol=GEOM_TOL):
    """``q ∈ N(X, r)``; radius zero means membership in ``X`` itself."""
    if r < 0:
        raise PreconditionError("radius must be non-negative")
    return bool(distance_to_set(X, q)[0] <= r + tol)


def hausdorff_distance(X, Y):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    if X.size == 0 or Y.size == 0:
        raise PreconditionError("Hausdorff distance needs non-empty point sets")
    return max(kernels.directed_hausdorff(X, Y), kernels.directed_hausdorff(Y, X))


# -------------------------------------------------------------------------
# convex hulls


def hull_distance(points, q, tol=1e-12, max_iter=1000):
    """Distance from ``q`` to ``Conv(points)`` via Wolfe's minimum-norm-point method."""
    P = np.atleast_2d(np.asarray(points, dtype=np.float64)) - np.asarray(q, dtype=np.float64)
    if P.shape[0] == 0:
        raise PreconditionError("convex hull of an empty set")
    scale = max(float(np.abs(P).max()), 1e-300)
    P = P / scale
    norms = (P * P).sum(axis=1)
    first = int(np.argmin(norms))
    S = [first]
    lam = np.array([1.0])
    x = P[first].copy()
    for _ in range(max_iter):
        j = int(np.argmin(P @ x))
        if x @ x - P[j] @ x <= tol * max(1.0, norms.max()) or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            Q = P[S]
            k = len(S)
            M = np.zeros((k + 1, k + 1))
            M[:k, :k] = Q @ Q.T
            M[:k, k] = 1.0
            M[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
            alpha = sol[:k]
            if np.all(alpha > 1e-14):
                lam = alpha
                x = alpha @ Q
                break
            mask = alpha <= 1e-14
            ratios = lam[mask] / np.maximum(lam[mask] - alpha[mask], 1e-300)
            theta = min(1.0, float(ratios.min()))
            lam = lam + theta * (alpha - lam)
            keep = lam > 1e-14
            if not keep.any():
                keep[int(np.argmax(lam))] = True
            S = [s for s, kk in zip(S, keep) if kk]
            lam = lam[keep] / lam[keep].sum()
            x = lam @ P[S]
            if len(S) == 1:
                break
    return float(np.linalg.norm(x)) * scale


def convex_hull_contains(points, q, tol=0.0):
    """Whether ``dist(q, Conv(points)) <= tol`` (with round-off slack for ``tol = 0``)."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.size == 0:
        raise PreconditionError("convex hull of an empty set")
    scale = max(1.0, float(np.abs(points).max()), float(np.abs(np.asarray(q)).max()))
    return hull_distance(points, q) <= tol + 1e-12 * scale


# -------------------------------------------------------------------------
# limits


@dataclass
class LimitResult:
    points: np.ndarray
    path: list
    distances: list


def diagonal_limit_point(grid, tol):
    """Finite-precision version of the diagonal argument for doubly indexed sets.

    ``grid[i][j]`` holds point sets ``f_j(Z_i)``.  Row limits are estimated
    by the last row; their limit along ``j`` by the last column.  Returns the
    estimated limit and an index path ``(i_s, j_s)`` (non-decreasing in both
    indices) whose sets approach it.
    """
    I = len(grid)
    J = len(grid[0]) if I else 0
    if I == 0 or J == 0:
        raise NoLimitFound("empty grid")
    rows = [np.atleast_2d(np.asarray(grid[I - 1][j], dtype=np.float64)) for j in range(J)]
    limit = rows[-1]
    tail = max(2, J // 4)
    jumps = [hausdorff_distance(rows[j], rows[j + 1]) for j in range(max(0, J - tail), J - 1)]
    if any(d > tol for d in jumps):
        raise NoLimitFound(f"column limits not Cauchy within {tol} (max jump {max(jumps):.3g})")
    path, dists = [], []
    i_prev = 0
    for j in range(J):
        col_lim = rows[j]
        i_s = i_prev
        while i_s < I - 1 and hausdorff_distance(np.atleast_2d(grid[i_s][j]), col_lim) > tol / 2:
            i_s += 1
        i_prev = i_s
        path.append((i_s, j))
        dists.append(hausdorff_distance(np.atleast_2d(grid[i_s][j]), limit))
    if dists[-1] > tol:
        raise NoLimitFound(f"diagonal path ends at distance {dists[-1]:.3g} > {tol}")
    return LimitResult(limit, path, dists)


# -------------------------------------------------------------------------
# relative boundaries


class SliceBoundary:
    """Membership test for the relative boundary of ``W ∩ B``."""

    def __init__(self, W, B, tol=GEOM_TOL):
        if not meets_interior(W, B):
            raise PreconditionError("slice does not meet the interior of the ball")
        self.W, self.B, self.tol = W, B, tol

    def contains(self, q):
        q = np.asarray(q, dtype=np.float64)
        if not (self.W.contains(q, self.tol) and self.B.contains(q, self.tol)):
            return False
        if self.B.on_boundary(q, self.tol):
            return True
        return any(abs(q[i] - lo) <= self.tol or abs(q[i] - hi) <= self.tol
                   for i, (lo, hi) in self.W.bounds.items())

    __contains__ = contains


def boundary_of_slice(W, B, tol=GEOM_TOL):
    return SliceBoundary(W, B, tol)


def _segment_sphere_params(a, b, center, radius):
    d = b - a
    f = a - center
    A = d @ d
    if A == 0.0:
        return []
    Bq = 2.0 * (f @ d)
    C = f @ f - radius * radius
    disc = Bq * Bq - 4.0 * A * C
    if disc < 0:
        return []
    s = math.sqrt(disc)
    return [t for t in ((-Bq - s) / (2 * A), (-Bq + s) / (2 * A)) if -1e-12 <= t <= 1 + 1e-12]


def _meets_open_region(pts, region, B, tol):
    """Whether the convex hull of ``pts`` meets ``int(region) ∩ int(B)``."""
    X = SimplicialSet(pts, (tuple(range(len(pts))),), len(pts) - 1, (frozenset(),))
    for i, (lo, hi) in region.bounds.items():
        if math.isfinite(lo):
            X = clip_halfspace(X, i, lo + tol, keep_below=False, tol=0.0)
        if math.isfinite(hi):
            X = clip_halfspace(X, i, hi - tol, keep_below=True, tol=0.0)
        if X.is_empty():
            return False
    if X.is_empty():
        return False
    d = distance_to_set(X, B.c[None, :])[0]
    return d < B.radius - tol


def boundary_points(Z, W, B, tol=GEOM_TOL):
    """``Z ∩ ∂(W ∩ B)`` for ``Z`` of dimension <= 1, as a list of (point, simplex index)."""
    if Z.dim > 1:
        raise NotImplementedError("boundary intersection is implemented for dim <= 1")
    bd = SliceBoundary(W, B, tol)
    out = []
    for idx, s in enumerate(Z.simplices):
        pts = Z.simplex_points(idx)
        cands = [p for p in pts]
        if len(pts) == 2:
            a, b = pts
            for i, (lo, hi) in W.bounds.items():
                for bound in (lo, hi):
                    if math.isfinite(bound) and (a[i] - bound) * (b[i] - bound) < 0:
                        t = (bound - a[i]) / (b[i] - a[i])
                        c = a + t * (b - a)
                        c[i] = bound
                        cands.append(c)
            for t in _segment_sphere_params(a, b, B.c, B.radius):
                cands.append(a + t * (b - a))
        # restrict to the affine hull of W
        for p in cands:
            if all(abs(p[j] - c) <= tol for j, c in W.fixed.items()) and bd.contains(p):
                out.append((p, idx))
        if len(pts) == 2 and W.fixed:
            # transversal crossing of aff(W) that happens to hit its boundary
            X1, _ = intersect_hyperplane(Z.select([idx]), *next(iter(W.fixed.items())), tol)
            for q in X1.used_vertices():
                if bd.contains(q):
                    out.append((q, idx))
    return out


def del_ZW(Z, W, B, eps, tol=GEOM_TOL):
    """Points of ``Z`` on ``∂(W ∩ B)`` that bound a simplex meeting ``int(W(eps) ∩ B)``.

    Computed by face adjacency on the complex, so the result does not depend
    on ``eps`` for transversal inputs.  Returns a 0-dimensional set.
    """
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    fat = W.fattened(eps)
    kept = []
    cache = {}
    for p, idx in boundary_points(Z, W, B, tol):
        if idx not in cache:
            cache[idx] = len(Z.simplices[idx]) > 1 and _meets_open_region(
                Z.simplex_points(idx), fat, B, tol)
        if cache[idx]:
            kept.append(p)
    if not kept:
        return SimplicialSet.empty(Z.n, 0)
    return union([SimplicialSet.from_points(np.array(kept))], dim=0, tol=max(tol, 1e-12))


def nonexceptional(X):
    return X.untagged(EXCEPTIONAL)
