"""Families of parallel walls spaced ``L`` apart, and the slabs between them."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import GEOM_TOL
from .errors import AveragingFailed, PreconditionError
from .geometry import direction_width, slice_extent
from .measure import hm, level_measures
from .simplicial import EXCEPTIONAL


@dataclass
class SlabDecomposition:
    direction: int
    step: float
    offset: float
    planes: tuple
    slabs: tuple = ()
    wall_measure: float = 0.0
    exceptional_wall_measure: float = 0.0
    wall_measures: tuple = ()
    bound: float = math.inf
    rectifiable_choice: str = "not_applicable"

    @property
    def M(self):
        return max(len(self.planes) - 2, 0)

    @property
    def interior_planes(self):
        return self.planes[1:-1]

    def to_json(self):
        return {
            "direction": self.direction,
            "step": self.step,
            "offset": self.offset,
            "planes": list(self.planes),
            "M": self.M,
            "wall_measure": _j(self.wall_measure),
            "exceptional_wall_measure": _j(self.exceptional_wall_measure),
            "wall_measures": [_j(w) for w in self.wall_measures],
            "averaging_bound": _j(self.bound),
            "rectifiable_choice": self.rectifiable_choice,
        }


def _j(x):
    return x if math.isfinite(x) else "inf"


def pi_gamma(y, offset, L, axis):
    """Fold ``y`` into the slab ``offset <= x_axis < offset + L``."""
    if not L > 0:
        raise PreconditionError("L must be positive")
    y = np.array(y, dtype=np.float64)
    y[axis] -= L * math.floor((y[axis] - offset) / L)
    # rounding can land on the excluded end of [offset, offset + L)
    if y[axis] - offset >= L:
        y[axis] = math.nextafter(offset + L, -math.inf)
    elif y[axis] < offset:
        y[axis] = offset
    return y


def choose_hyperplane_family(A_W, S_W, W, axis, L, n_offsets=1024, m=None):
    """Pick the offset whose walls carry the least (m-2)-measure of ``A_W``.

    ``A_W`` is the (m-1)-dimensional part of ``A ∩ W``.  Ties are broken by the
    wall count of ``S_W`` and then by the smaller offset.  The chosen family
    always satisfies ``wall_measure <= 2 L^-1 H^(m-1)(A_W)``; failing that
    raises :class:`AveragingFailed`.
    """
    if not L > 0:
        raise PreconditionError("L must be positive")
    if not direction_width(W, axis) > L:
        raise PreconditionError("direction width must exceed L")
    m = A_W.dim + 1 if m is None else m
    if m < 2:
        raise PreconditionError("hyperplane families need m >= 2")
    lo, hi = W.bounds[axis]
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise PreconditionError("slice must be bounded along the slicing direction")
    offsets = np.arange(n_offsets) * (L / n_offsets)
    js = np.arange(math.floor(lo / L) - 1, math.ceil(hi / L) + 2)
    grid = offsets[:, None] + js[None, :] * L  # (n_offsets, J)
    if A_W.is_empty():
        walls = np.zeros(grid.shape)
    else:
        walls = level_measures(A_W.with_dim(m - 1), m - 1, axis, grid.ravel()).reshape(grid.shape)
    if S_W.is_empty():
        exc = np.zeros(grid.shape)
    else:
        exc = level_measures(S_W.with_dim(max(S_W.dim, 1)), 1, axis, grid.ravel()).reshape(grid.shape)
    w_tot, e_tot = walls.sum(axis=1), exc.sum(axis=1)
    best = min(range(n_offsets), key=lambda i: (w_tot[i], e_tot[i], offsets[i]))
    bound = 2.0 / L * hm(A_W, m - 1)
    w = float(w_tot[best])
    if not w <= bound * (1.0 + 1e-9) + 1e-12:
        raise AveragingFailed(f"best wall measure {w} exceeds bound {bound} at {n_offsets} offsets")
    keep = (grid[best] >= lo - L) & (grid[best] <= hi + L)
    return SlabDecomposition(axis, float(L), float(offsets[best]), tuple(grid[best][keep].tolist()),
                             (), w, float(e_tot[best]), tuple(walls[best][keep].tolist()), bound)


def consecutive_planes(W, B, family, tol=GEOM_TOL):
    """Relabel to ``Σ_0..Σ_{M+1}``: interior planes cut ``W ∩ B``, extremes enclose it.

    A plane disconnects the convex set ``W ∩ B`` exactly when it crosses the
    open extent of that set along the slicing direction; tangent planes do not.
    """
    ext = slice_extent(W, B, family.direction)
    if ext is None:
        raise PreconditionError("slice does not meet the ball")
    lo, hi = ext
    t, L = family.offset, family.step
    j0 = math.floor((lo + tol - t) / L)
    j1 = math.ceil((hi - tol - t) / L)
    planes = tuple(t + j * L for j in range(j0, max(j1, j0 + 1) + 1))
    lookup = dict(zip(family.planes, family.wall_measures))
    per = tuple(next((v for p, v in lookup.items() if abs(p - x) <= tol), 0.0) for x in planes)
    return replace(family, planes=planes, wall_measures=per)


def slab_decompose(W, family):
    """Slices equal to ``W`` except for the bounds ``[Σ_j, Σ_{j+1}]`` along the direction."""
    axis = family.direction
    lo, hi = W.bounds[axis]
    slabs = []
    for a, b in zip(family.planes[:-1], family.planes[1:]):
        slabs.append(W.with_bounds(axis, max(lo, a), min(hi, b)))
    return slabs


def decompose(A_W, W, B, axis, L, n_offsets=1024, m=None):
    """Full pipeline: offset search, consecutive planes, slabs."""
    S_W = A_W.tagged(EXCEPTIONAL)
    fam = choose_hyperplane_family(A_W, S_W, W, axis, L, n_offsets, m=m)
    fam = consecutive_planes(W, B, fam)
    return replace(fam, slabs=tuple(slab_decompose(W, fam)))
