import os
import subprocess
import sys

import numpy as np
import pytest

from isospan import _kernels_py, kernels

cy = pytest.importorskip("isospan._kernels")


def _flow_args(p_fixed=False):
    if p_fixed:
        free = np.array([1, 1, 0], dtype=np.uint8)
        return (np.array([0.0, 0.1, 0.2]), free, np.array([-1.0, -1.0, 0.2]),
                np.array([1.0, 1.0, 0.2]), np.zeros(3), 1.0, 0.05, 0.1,
                np.array([[[-0.6, -0.8, 0.0], [0.6, -0.8, 0.0]]]), 1e-2, 2.0)
    return (np.array([0.0, 0.1]), np.array([1, 1], dtype=np.uint8), np.array([-1.0, -1.0]),
            np.array([1.0, 1.0]), np.zeros(2), 1.0, 0.0, np.inf,
            np.array([[[-0.6, -0.8], [-0.6, -0.8]], [[0.6, -0.8], [0.6, -0.8]]]), 1e-2, 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_directed_hausdorff_agrees(seed):
    rng = np.random.default_rng(seed)
    X, Y = rng.normal(size=(300, 3)), rng.normal(size=(200, 3))
    assert cy.directed_hausdorff(X, Y) == pytest.approx(_kernels_py.directed_hausdorff(X, Y),
                                                        abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_min_dist_to_segments_agrees(seed):
    rng = np.random.default_rng(seed)
    P = rng.uniform(-1, 1, size=(500, 2))
    segs = rng.uniform(-1, 1, size=(40, 2, 2))
    segs[0, 1] = segs[0, 0]
    np.testing.assert_allclose(cy.min_dist_to_segments(P, segs),
                               _kernels_py.min_dist_to_segments(P, segs), atol=1e-12)


@pytest.mark.parametrize("fixed", [False, True])
def test_flow_kernels_agree(fixed):
    rng = np.random.default_rng(1)
    args = _flow_args(fixed)
    n = len(args[0])
    X = rng.uniform(-0.9, 0.9, size=(200, n)) * 0.6
    if fixed:
        X[:, 2] = 0.2 + rng.uniform(-0.08, 0.08, size=200)
    np.testing.assert_allclose(cy.flow_velocity(X, *args), _kernels_py.flow_velocity(X, *args),
                               atol=1e-12)
    np.testing.assert_allclose(cy.flow_rk4(X, *args, 1e-3, 50),
                               _kernels_py.flow_rk4(X, *args, 1e-3, 50), atol=1e-10)


def test_read_only_inputs():
    X = np.zeros((3, 2))
    X.setflags(write=False)
    assert cy.directed_hausdorff(X, X) == 0.0


def test_dispatch_env():
    assert kernels.BACKEND == "cython"
    code = "import isospan.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, ISOSPAN_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
