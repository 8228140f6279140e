import math

import numpy as np
import pytest

from isospan.geometry import ClosedBall, DSlice
from isospan.simplicial import SimplicialSet


def circle(k=256, r=1.0, n=3):
    th = np.linspace(0.0, 2.0 * math.pi, k, endpoint=False)
    pts = np.zeros((k, n))
    pts[:, 0], pts[:, 1] = r * np.cos(th), r * np.sin(th)
    return SimplicialSet.polyline(pts, closed=True)


def disk_mesh(rings=40, sectors=160, r=1.0):
    """Triangulated disk in the plane z = 0 of R^3."""
    pts = [[0.0, 0.0, 0.0]]
    for i in range(1, rings + 1):
        rad = r * i / rings
        for j in range(sectors):
            a = 2 * math.pi * j / sectors
            pts.append([rad * math.cos(a), rad * math.sin(a), 0.0])
    tris = []
    for j in range(sectors):
        tris.append((0, 1 + j, 1 + (j + 1) % sectors))
    for i in range(1, rings):
        b0, b1 = 1 + (i - 1) * sectors, 1 + i * sectors
        for j in range(sectors):
            j1 = (j + 1) % sectors
            tris += [(b0 + j, b1 + j, b1 + j1), (b0 + j, b1 + j1, b0 + j1)]
    return SimplicialSet.build(np.array(pts), tris, dim=2)


@pytest.fixture
def unit_disk_ball():
    return ClosedBall((0.0, 0.0), 1.0)


@pytest.fixture
def square_slice():
    return DSlice.box([-1.0, -1.0], [1.0, 1.0])
