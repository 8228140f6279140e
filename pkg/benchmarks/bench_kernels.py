"""Compare the compiled and numpy kernels on representative workloads.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]``
"""

import argparse
import json
import time

import numpy as np

from isospan import _kernels_py

try:
    from isospan import _kernels
except ImportError:  # extension not built
    _kernels = None


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads(rng):
    X = rng.normal(size=(2000, 3))
    Y = rng.normal(size=(2000, 3))
    P = rng.uniform(-1, 1, size=(4000, 3))
    segs = rng.uniform(-1, 1, size=(256, 2, 3))
    th = np.linspace(0, 2 * np.pi, 400)
    Z = np.stack([0.5 * np.cos(th), 0.5 * np.sin(th) + 0.1], axis=1)
    flow = (np.array([0.0, 0.1]), np.array([1, 1], dtype=np.uint8), np.array([-1.0, -1.0]),
            np.array([1.0, 1.0]), np.zeros(2), 1.0, 0.0, np.inf,
            np.array([[[-0.6, -0.8], [-0.6, -0.8]], [[0.6, -0.8], [0.6, -0.8]]]), 1e-2, 1.0)
    return {
        "directed_hausdorff 2000x2000": lambda k: k.directed_hausdorff(X, Y),
        "min_dist_to_segments 4000x256": lambda k: k.min_dist_to_segments(P, segs),
        "flow_velocity 400 pts": lambda k: k.flow_velocity(Z, *flow),
        "flow_rk4 400 pts x 200 steps": lambda k: k.flow_rk4(Z, *flow, 1e-3, 200),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)
    rows = []
    print(f"{'kernel':34s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} {'max diff':>9s}")
    for name, call in workloads(np.random.default_rng(args.seed)).items():
        t_py, r_py = _best(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            t_cy, diff = float("nan"), float("nan")
        else:
            t_cy, r_cy = _best(lambda: call(_kernels), args.repeat)
            diff = float(np.max(np.abs(np.asarray(r_py) - np.asarray(r_cy))))
        rows.append({"kernel": name, "python": t_py, "cython": t_cy, "max_abs_diff": diff})
        print(f"{name:34s} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:8.1f} {diff:9.1e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
