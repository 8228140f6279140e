"""Seeded randomized property suites for the cone, slicing and averaging bounds.

Every suite takes a ``seed`` and returns a JSON-ready dict whose ``pass``
field is the conjunction of its cases.  Same seed, same dict.
"""

from __future__ import annotations

import math

import numpy as np

from .coning import cone_bound_check
from .errors import AveragingFailed
from .geometry import DSlice
from .measure import eilenberg_check, hm
from .simplicial import SimplicialSet
from .slicing import choose_hyperplane_family


def _rng(seed):
    return np.random.default_rng(seed)


def random_ball_points(rng, k, center, r):
    """``k`` points uniform in the closed ball ``N(center, r)``."""
    n = len(center)
    g = rng.normal(size=(k, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = r * rng.uniform(size=(k, 1)) ** (1.0 / n)
    return center + rad * g


def random_polyline(rng, n, center=None, r=1.0, kmin=2, kmax=12):
    center = np.zeros(n) if center is None else np.asarray(center, dtype=np.float64)
    k = int(rng.integers(kmin, kmax + 1))
    return SimplicialSet.polyline(random_ball_points(rng, k, center, r))


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def random_surface(rng, grid=5):
    """Random height field over a ``grid x grid`` triangulated square, rotated in R^3."""
    u = np.linspace(0.0, 1.0, grid)
    uu, vv = np.meshgrid(u, u, indexing="ij")
    amp = rng.uniform(0.0, 0.5)
    zz = amp * rng.normal(size=uu.shape)
    pts = np.stack([uu.ravel(), vv.ravel(), zz.ravel()], axis=1)
    pts = pts @ random_rotation(rng, 3).T * rng.uniform(0.3, 2.0)
    idx = np.arange(grid * grid).reshape(grid, grid)
    tris = []
    for i in range(grid - 1):
        for j in range(grid - 1):
            a, b, c, d = idx[i, j], idx[i + 1, j], idx[i, j + 1], idx[i + 1, j + 1]
            tris += [(a, b, d), (a, d, c)]
    return SimplicialSet.build(pts, tris, dim=2)


def random_closed_curve(rng, k=96, rmax=0.95):
    """Star-shaped closed polygon around the origin inside the ball of radius ``rmax``."""
    th = np.linspace(0.0, 2.0 * math.pi, k, endpoint=False)
    rad = np.ones(k)
    for f in range(1, 6):
        rad += rng.uniform(-0.3, 0.3) / f * np.cos(f * th + rng.uniform(0, 2 * math.pi))
    rad = np.clip(rad, 0.1, None)
    rad *= rng.uniform(0.3, rmax) / rad.max()
    return SimplicialSet.polyline(np.stack([rad * np.cos(th), rad * np.sin(th)], axis=1),
                                  closed=True)


def cone_suite(count=200, seed=0, tol=1e-9):
    """Cone bound ``H^2(C(X, p)) <= 8 r H^1(X)`` on random polylines ``X ⊂ N(p, r)`` in R^3."""
    rng = _rng(seed)
    rows = []
    for _ in range(count):
        p = rng.uniform(-1.0, 1.0, size=3)
        r = float(rng.uniform(0.2, 2.0))
        X = random_polyline(rng, 3, p, r)
        b = cone_bound_check(X, p, r, m=2, tol=tol)
        rows.append({"lhs": b.lhs, "rhs": b.rhs, "pass": b.passed})
    worst = max(r["lhs"] / r["rhs"] for r in rows if r["rhs"] > 0)
    return {"suite": "cone", "seed": seed, "count": count, "tol": tol,
            "pass": all(r["pass"] for r in rows), "worst_ratio": worst,
            "failures": sum(not r["pass"] for r in rows), "rows": rows}


def square_case(n_samples=512):
    """Unit square against ``{x_0 = 0}``: lhs ``1/4``, rhs ``1/pi``."""
    sq = SimplicialSet.build([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]],
                             [(0, 1, 3), (0, 3, 2)], dim=2)
    return eilenberg_check(sq, 0, 0.0, n_samples=n_samples)


def eilenberg_suite(count=100, seed=0, tol=0.02, n_samples=512):
    """Averaging inequality on random surfaces in R^3 and random polylines in R^2."""
    rng = _rng(seed)
    rows = []
    for kind in ("surface", "polyline"):
        for _ in range(count):
            if kind == "surface":
                X, axis = random_surface(rng), int(rng.integers(3))
            else:
                X, axis = random_polyline(rng, 2), int(rng.integers(2))
            lo, hi = X.used_vertices()[:, axis].min(), X.used_vertices()[:, axis].max()
            off = float(rng.uniform(lo - 0.2, hi + 0.2))
            res = eilenberg_check(X, axis, off, n_samples=n_samples, tol=tol)
            rows.append({"kind": kind, "lhs": res.lhs, "rhs": res.rhs, "pass": bool(res.passed)})
    sq = square_case(n_samples)
    square = {"lhs": sq.lhs, "rhs": sq.rhs, "pass": bool(sq.passed)}
    return {"suite": "eilenberg", "seed": seed, "count": count, "tol": tol,
            "square": square, "worst_ratio": max(r["lhs"] / r["rhs"] for r in rows if r["rhs"] > 0),
            "failures": sum(not r["pass"] for r in rows),
            "pass": all(r["pass"] for r in rows) and square["pass"], "rows": rows}


def slicing_suite(count=100, seed=0, Ls=(0.2, 0.5, 1.0), n_offsets=1024):
    """Wall count ``<= 2 L^-1 H^1(A ∩ W)`` for random closed curves in the unit disk."""
    rng = _rng(seed)
    W = DSlice.box([-1.0, -1.0], [1.0, 1.0])
    none = SimplicialSet.empty(2, 0)
    rows = []
    averaging_failed = 0
    for _ in range(count):
        A = random_closed_curve(rng)
        mass = hm(A, 1)
        for L in Ls:
            try:
                fam = choose_hyperplane_family(A, none, W, 0, L, n_offsets=n_offsets, m=2)
            except AveragingFailed:
                averaging_failed += 1
                rows.append({"L": L, "walls": None, "bound": 2.0 / L * mass, "pass": False})
                continue
            rows.append({"L": L, "walls": fam.wall_measure, "bound": fam.bound,
                         "offset": fam.offset, "pass": bool(fam.wall_measure <= fam.bound)})
    return {"suite": "slicing", "seed": seed, "count": count, "Ls": list(Ls),
            "n_offsets": n_offsets, "averaging_failed": averaging_failed,
            "failures": sum(not r["pass"] for r in rows),
            "pass": averaging_failed == 0 and all(r["pass"] for r in rows), "rows": rows}


SUITES = {"cone": cone_suite, "eilenberg": eilenberg_suite, "slicing": slicing_suite}
