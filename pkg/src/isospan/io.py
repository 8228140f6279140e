"""Geometry ingestion and mesh export.

JSON geometry is ``{"vertices": [[...], ...], "simplices": [[i, j], ...],
"dim": d, "tags": [["exceptional"], ...]}``; ``tags`` and ``dim`` are
optional.  A shorthand ``{"polyline": [[...], ...], "closed": true}`` is also
accepted.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import PreconditionError
from .simplicial import SimplicialSet


def _float(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def set_to_json(X):
    return {"n": X.n, "dim": X.dim, "vertices": X.vertices.tolist(),
            "simplices": [list(s) for s in X.simplices],
            "tags": [sorted(t) for t in X.tags]}


def set_from_json(obj):
    if not isinstance(obj, dict):
        raise PreconditionError("geometry must be a JSON object")
    if "polyline" in obj:
        pts = np.asarray(obj["polyline"], dtype=np.float64)
        if pts.ndim != 2:
            raise PreconditionError("polyline must be a list of points")
        return SimplicialSet.polyline(pts, closed=bool(obj.get("closed", False)))
    if "vertices" not in obj or "simplices" not in obj:
        raise PreconditionError("geometry needs 'vertices' and 'simplices'")
    verts = np.asarray(obj["vertices"], dtype=np.float64)
    if verts.size == 0:
        return SimplicialSet.empty(int(obj.get("n", 0)), int(obj.get("dim", -1)))
    if verts.ndim != 2:
        raise PreconditionError("vertices must be a list of equal-length coordinate lists")
    return SimplicialSet.build(verts, obj["simplices"], obj.get("dim"), obj.get("tags"))


def load_set(path):
    with open(path) as fh:
        return set_from_json(json.load(fh))


def dumps(obj):
    """Deterministic JSON: sorted keys, full-precision floats, ``inf`` as a string."""
    return json.dumps(_clean(obj), sort_keys=True, indent=1, allow_nan=False)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return _float(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


# -------------------------------------------------------------------------
# meshes


def to_obj(X):
    """Wavefront OBJ for sets in R^3 (lower dimensions are zero-padded)."""
    if X.n > 3:
        raise PreconditionError("OBJ export needs n <= 3; use OFF")
    V = np.zeros((len(X.vertices), 3))
    V[:, :X.n] = X.vertices
    lines = [f"# n={X.n} dim={X.dim}"]
    lines += ["v " + " ".join(repr(float(c)) for c in v) for v in V]
    for s in X.simplices:
        idx = " ".join(str(i + 1) for i in s)
        if len(s) == 1:
            lines.append(f"p {idx}")
        elif len(s) == 2:
            lines.append(f"l {idx}")
        elif len(s) == 3:
            lines.append(f"f {idx}")
        else:
            # no cell type for solids: export the boundary triangles
            from itertools import combinations
            for f in combinations(s, 3):
                lines.append("f " + " ".join(str(i + 1) for i in f))
    return "\n".join(lines) + "\n"


def from_obj(text, n=3):
    verts, simp = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(c) for c in parts[1:4]])
        elif parts[0] in ("p", "l", "f"):
            simp.append(tuple(int(tok.split("/")[0]) - 1 for tok in parts[1:]))
    V = np.asarray(verts, dtype=np.float64).reshape(-1, 3)[:, :n]
    return SimplicialSet.build(V, simp)


def to_off(X):
    """OFF with ``n`` coordinates per vertex (nOFF header when ``n != 3``)."""
    head = ["OFF"] if X.n == 3 else ["nOFF", str(X.n)]
    lines = [" ".join(head), f"{len(X.vertices)} {len(X.simplices)} 0"]
    lines += [" ".join(repr(float(c)) for c in v) for v in X.vertices]
    lines += [f"{len(s)} " + " ".join(str(i) for i in s) for s in X.simplices]
    return "\n".join(lines) + "\n"


def from_off(text):
    toks = [ln.split("#")[0].split() for ln in text.splitlines()]
    toks = [t for t in toks if t]
    head = toks[0]
    if head[0] == "nOFF":
        n = int(head[1]) if len(head) > 1 else int(toks[1][0])
        rest = toks[1:] if len(head) > 1 else toks[2:]
    elif head[0] == "OFF":
        n, rest = 3, toks[1:]
    else:
        raise PreconditionError("not an OFF file")
    nv, nf = int(rest[0][0]), int(rest[0][1])
    V = np.array([[float(c) for c in t[:n]] for t in rest[1:1 + nv]]).reshape(-1, n)
    simp = [tuple(int(c) for c in t[1:1 + int(t[0])]) for t in rest[1 + nv:1 + nv + nf]]
    return SimplicialSet.build(V, simp)


def write_mesh(path, X):
    text = to_off(X) if str(path).endswith(".off") else to_obj(X)
    with open(path, "w") as fh:
        fh.write(text)
