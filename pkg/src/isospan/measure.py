"""Hausdorff measure with the 2^-d normalization (no unit-ball factor).

On a d-rectifiable set this measure is the Lebesgue d-volume divided by the
volume of the unit d-ball, which is what :func:`measure_simplicial` returns.
The cube-covering estimator is an independent upper estimate used for
cross-validation only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import GEOM_TOL
from .errors import DimensionMismatch, PreconditionError
from .simplicial import (
    DEGENERATE,
    TANGENTIAL,
    SimplicialSet,
    _clip_piece,
    faces,
    intersect_hyperplane,
    simplex_volumes,
    union,
    unit_ball_volume,
)


@dataclass
class MeasureReport:
    dimension: int
    value: float
    method: str
    params: dict = field(default_factory=dict)

    def to_json(self):
        return {"dimension": self.dimension, "value": self.value,
                "method": self.method, "params": dict(self.params)}


def measure_simplicial(X, d):
    """Sum of d-volumes of the top simplices divided by the unit d-ball volume."""
    if d < 0:
        raise PreconditionError("no numeric measure is defined for d < 0")
    if X.is_empty():
        return MeasureReport(d, 0.0, "simplicial", {"simplices": 0})
    if X.dim != d:
        raise DimensionMismatch(f"set has dimension {X.dim}, asked for H^{d}")
    if d == 0:
        pts = union([X]).used_vertices()
        return MeasureReport(0, float(len(pts)), "simplicial", {"simplices": len(X)})
    top = [i for i in X.top_indices(d) if DEGENERATE not in X.tags[i]]
    if not top:
        return MeasureReport(d, 0.0, "simplicial", {"simplices": 0})
    vols = simplex_volumes(np.array([X.simplex_points(i) for i in top]))
    return MeasureReport(d, float(vols.sum() / unit_ball_volume(d)), "simplicial",
                         {"simplices": len(top)})


def hm(X, d):
    """Shorthand for the numeric value of :func:`measure_simplicial`; 0 when empty."""
    if X.is_empty() or d < 0:
        return 0.0
    return measure_simplicial(X.with_dim(d) if X.dim != d else X, d).value


# -------------------------------------------------------------------------
# covering estimator


def _segment_cells(a, b, r):
    """Split segment ab at grid planes; yield (cell key, piece endpoints)."""
    ts = [0.0, 1.0]
    for k in range(len(a)):
        lo, hi = sorted((a[k], b[k]))
        if hi - lo <= 0:
            continue
        first, last = math.floor(lo / r) + 1, math.ceil(hi / r) - 1
        for g in range(first, last + 1):
            ts.append((g * r - a[k]) / (b[k] - a[k]))
    ts = sorted(set(t for t in ts if 0.0 <= t <= 1.0))
    for t0, t1 in zip(ts[:-1], ts[1:]):
        p0, p1 = a + t0 * (b - a), a + t1 * (b - a)
        key = tuple(np.floor((0.5 * (p0 + p1)) / r).astype(int))
        yield key, (p0, p1)


def measure_covering(X, d, grid_r):
    """Upper estimate of H^d from the cover by pieces ``X ∩ cube`` of side ``grid_r``.

    Each occupied cube contributes ``(diam(X ∩ cube) / 2)^d``.
    """
    if grid_r <= 0:
        raise PreconditionError("grid_r must be positive")
    if X.is_empty():
        return MeasureReport(d, 0.0, "covering", {"grid_r": grid_r, "cells": 0})
    cells = {}
    for i, s in enumerate(X.simplices):
        pts = X.simplex_points(i)
        if len(pts) == 1:
            key = tuple(np.floor(pts[0] / grid_r).astype(int))
            cells.setdefault(key, []).append(pts[0])
        elif len(pts) == 2:
            for key, seg in _segment_cells(pts[0], pts[1], grid_r):
                cells.setdefault(key, []).extend(seg)
        elif len(pts) == 3:
            lo = np.floor(pts.min(axis=0) / grid_r).astype(int)
            hi = np.floor(pts.max(axis=0) / grid_r).astype(int)
            for key in np.ndindex(*(hi - lo + 1)):
                cell = lo + np.array(key)
                pieces = [pts.copy()]
                for axis in range(X.n):
                    nxt = []
                    for pc in pieces:
                        for q in _clip_piece(pc, axis, cell[axis] * grid_r, False, 0.0):
                            nxt.extend(_clip_piece(q, axis, (cell[axis] + 1) * grid_r, True, 0.0))
                    pieces = nxt
                for pc in pieces:
                    if len(pc) == 3 and simplex_volumes(pc[None])[0] > 0:
                        cells.setdefault(tuple(cell.tolist()), []).extend(pc)
        else:
            raise NotImplementedError("covering estimator supports dim <= 2")
    total = 0.0
    for pts in cells.values():
        arr = np.array(pts)
        diam = float(np.sqrt(((arr[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2).max()))
        total += 1.0 if d == 0 else (diam / 2.0) ** d
    return MeasureReport(d, total, "covering", {"grid_r": grid_r, "cells": len(cells)})


# -------------------------------------------------------------------------
# slices by parallel hyperplanes


def slice_restriction(X, axis, c, tol=GEOM_TOL):
    """Exact slice ``X ∩ {x_axis = c}`` as a complex of dimension ``X.dim - 1``.

    Top simplices lying inside the hyperplane are replaced by their boundary
    faces, tagged ``tangential``, with a warning (a measure-zero event).
    """
    if X.dim < 1:
        raise PreconditionError("slicing needs dim >= 1")
    out, contained = intersect_hyperplane(X, axis, c, tol)
    tangential = [i for i in contained if len(X.simplices[i]) == X.dim + 1]
    if not tangential:
        return out.with_dim(X.dim - 1)
    warnings.warn(f"{len(tangential)} simplices lie inside the slicing hyperplane", stacklevel=2)
    keep = [i for i in range(len(X)) if i not in set(tangential)]
    base, _ = intersect_hyperplane(X.select(keep), axis, c, tol)
    parts = [base.with_dim(X.dim - 1)]
    for i in tangential:
        s = X.simplices[i]
        bnd = faces(tuple(range(len(s))), len(s) - 2)
        pts = X.simplex_points(i)
        pts[:, axis] = c
        parts.append(SimplicialSet(pts, tuple(bnd), X.dim - 1,
                                   tuple(X.tags[i] | {TANGENTIAL} for _ in bnd)))
    return union(parts, dim=X.dim - 1)


def level_measures(X, d, axis, levels, tangential="infinite", tol=GEOM_TOL):
    """H^(d-1) of ``X ∩ {x_axis = c}`` for every level ``c``, vectorized.

    ``X`` contributes through its simplices of dimension ``d`` and ``d - 1``.
    A ``d``-simplex inside a level contributes ``inf`` (``tangential="infinite"``)
    or the measure of its boundary (``"boundary"``).  Shared lower faces that
    sit exactly on a level may be counted twice, an over-estimate confined to
    finitely many levels.
    """
    levels = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    out = np.zeros(len(levels))
    if X.is_empty():
        return out
    if d == 1:
        return _level_counts(X, axis, levels, tangential, tol)
    if d == 2:
        return _level_lengths(X, axis, levels, tangential, tol)
    raise NotImplementedError("level measures are implemented for d in {1, 2}")


def _level_counts(X, axis, levels, tangential, tol):
    segs = [X.simplex_points(i) for i, s in enumerate(X.simplices) if len(s) == 2]
    verts = X.used_vertices()
    out = np.zeros(len(levels))
    if len(verts):
        on = np.abs(verts[:, axis][None, :] - levels[:, None]) <= tol
        out += on.sum(axis=1)
    if segs:
        S = np.array(segs)
        x0, x1 = S[:, 0, axis], S[:, 1, axis]
        lo, hi = np.minimum(x0, x1), np.maximum(x0, x1)
        strict = (lo[None, :] < levels[:, None] - tol) & (levels[:, None] < hi[None, :] - tol)
        out += strict.sum(axis=1)
        flat = (hi - lo) <= tol
        if flat.any():
            hit = (np.abs(lo[flat][None, :] - levels[:, None]) <= tol).any(axis=1)
            if tangential == "infinite":
                out[hit] = np.inf
    return out


def _level_lengths(X, axis, levels, tangential, tol):
    tris = [X.simplex_points(i) for i, s in enumerate(X.simplices) if len(s) == 3]
    segs = [X.simplex_points(i) for i, s in enumerate(X.simplices) if len(s) == 2]
    out = np.zeros(len(levels))
    if tris:
        T = np.array(tris)
        for start in range(0, len(levels), 64):
            lv = levels[start:start + 64]
            s = T[None, :, :, axis] - lv[:, None, None]  # (L, T, 3)
            on = np.abs(s) <= tol
            cand = []
            valid = []
            for a, b in ((0, 1), (1, 2), (2, 0)):
                sa, sb = s[..., a], s[..., b]
                ok = (~on[..., a]) & (~on[..., b]) & (sa * sb < 0)
                t = np.where(ok, sa / np.where(ok, sa - sb, 1.0), 0.0)
                pa, pb = T[None, :, a, :], T[None, :, b, :]
                cand.append(pa + t[..., None] * (pb - pa))
                valid.append(ok)
            for a in range(3):
                cand.append(np.broadcast_to(T[None, :, a, :], s.shape[:2] + (T.shape[2],)))
                valid.append(on[..., a])
            C = np.stack(cand, axis=2)  # (L, T, 6, n)
            V = np.stack(valid, axis=2)
            D = np.sqrt(((C[:, :, :, None, :] - C[:, :, None, :, :]) ** 2).sum(axis=4))
            D = np.where(V[:, :, :, None] & V[:, :, None, :], D, 0.0)
            length = D.max(axis=(2, 3))
            inside = on.all(axis=2)
            if inside.any():
                if tangential == "infinite":
                    length = np.where(inside, np.inf, length)
                else:
                    per = (np.linalg.norm(T[:, 0] - T[:, 1], axis=1)
                           + np.linalg.norm(T[:, 1] - T[:, 2], axis=1)
                           + np.linalg.norm(T[:, 2] - T[:, 0], axis=1))
                    length = np.where(inside, per[None, :], length)
            out[start:start + 64] += length.sum(axis=1)
    if segs:
        S = np.array(segs)
        flat = np.abs(S[:, 0, axis] - S[:, 1, axis]) <= tol
        if flat.any():
            lens = np.linalg.norm(S[flat, 1] - S[flat, 0], axis=1)
            hit = np.abs(S[flat, 0, axis][None, :] - levels[:, None]) <= tol
            out += (hit * lens[None, :]).sum(axis=1)
    return out / unit_ball_volume(1)


@dataclass
class EilenbergResult:
    lhs: float
    rhs: float
    passed: bool
    n_samples: int


def eilenberg_check(X, axis, offset, n_samples=512, tol=0.02, m=None):
    """Quadrature check of ``∫_0^∞ H^(m-1)(X_h) dH^1(h) <= H^m(X)``.

    ``X_h`` is the part of ``X`` at distance ``h`` from ``{x_axis = offset}``
    (both sides).  ``dH^1`` is half the Lebesgue measure, hence the factor 1/2.
    Midpoint rule over ``n_samples`` values of ``h``.
    """
    if X.is_empty():
        return EilenbergResult(0.0, 0.0, True, n_samples)
    m = X.dim if m is None else m
    if m < 1:
        raise PreconditionError("m must be >= 1")
    rhs = hm(X, m)
    verts = X.used_vertices()
    hmax = float(np.abs(verts[:, axis] - offset).max())
    if hmax == 0.0:
        return EilenbergResult(0.0, rhs, True, n_samples)
    dh = hmax / n_samples
    h = (np.arange(n_samples) + 0.5) * dh
    top = X.select(X.top_indices(m))
    vals = (level_measures(top, m, axis, offset + h, tangential="boundary")
            + level_measures(top, m, axis, offset - h, tangential="boundary"))
    lhs = 0.5 * float(vals.sum()) * dh
    return EilenbergResult(lhs, rhs, lhs <= rhs * (1.0 + tol) + 1e-15, n_samples)
