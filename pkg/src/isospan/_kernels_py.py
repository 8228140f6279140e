"""Pure numpy implementations of the hot kernels.

Same call signatures as the compiled ``_kernels`` module; selected by
``isospan.kernels`` when the extension is unavailable.
"""

import numpy as np

_CHUNK = 2048


def directed_hausdorff(X, Y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    worst = 0.0
    for start in range(0, X.shape[0], _CHUNK):
        block = X[start:start + _CHUNK]
        d2 = ((block[:, None, :] - Y[None, :, :]) ** 2).sum(axis=2)
        worst = max(worst, float(d2.min(axis=1).max()))
    return float(np.sqrt(worst))


def min_dist_to_segments(P, segs):
    """Distance from each row of ``P`` to the union of segments ``segs[s] = (a, b)``."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    segs = np.ascontiguousarray(segs, dtype=np.float64)
    if segs.shape[0] == 0:
        return np.full(P.shape[0], np.inf)
    a = segs[:, 0, :]
    ab = segs[:, 1, :] - a
    ll = (ab * ab).sum(axis=1)
    safe = np.where(ll > 0.0, ll, 1.0)
    out = np.empty(P.shape[0])
    for start in range(0, P.shape[0], _CHUNK):
        block = P[start:start + _CHUNK]
        ap = block[:, None, :] - a[None, :, :]
        t = (ap * ab[None, :, :]).sum(axis=2) / safe[None, :]
        t = np.clip(np.where(ll[None, :] > 0.0, t, 0.0), 0.0, 1.0)
        diff = ap - t[:, :, None] * ab[None, :, :]
        out[start:start + _CHUNK] = np.sqrt((diff * diff).sum(axis=2).min(axis=1))
    return out


def flow_velocity(X, p, free, lo, hi, center, radius, disk_r, half_width,
                  segs, theta_scale, theta_power):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    free = np.asarray(free, dtype=bool)
    fixed = ~free
    rel = X - p
    e = np.where(free[None, :], rel, 0.0)
    if fixed.any():
        gn = np.sqrt((rel[:, fixed] ** 2).sum(axis=1))
        g_slack = half_width - gn
    else:
        gn = np.zeros(X.shape[0])
        g_slack = np.full(X.shape[0], np.inf)
    en2 = (e * e).sum(axis=1)
    over = np.maximum(gn - disk_r, 0.0)
    d_disk = np.sqrt(en2 + over * over)
    d_a = min_dist_to_segments(X, segs)
    slack = g_slack
    idx = np.flatnonzero(free)
    if idx.size:
        face = np.minimum(X[:, idx] - lo[idx], hi[idx] - X[:, idx]).min(axis=1)
        slack = np.minimum(slack, face)
    slack = np.minimum(slack, radius - np.sqrt(((X - center) ** 2).sum(axis=1)))
    d_f = np.maximum(slack, 0.0)
    d = np.minimum(np.minimum(d_disk, d_a), d_f)
    theta = np.minimum(1.0, d / theta_scale) ** theta_power
    theta = np.where(gn <= disk_r, theta, 0.0)
    return -theta[:, None] * e


def flow_rk4(X, p, free, lo, hi, center, radius, disk_r, half_width, segs,
             theta_scale, theta_power, dt, nsteps):
    args = (p, free, lo, hi, center, radius, disk_r, half_width, segs,
            theta_scale, theta_power)
    x = np.array(X, dtype=np.float64, copy=True)
    for _ in range(int(nsteps)):
        k1 = flow_velocity(x, *args)
        k2 = flow_velocity(x + 0.5 * dt * k1, *args)
        k3 = flow_velocity(x + 0.5 * dt * k2, *args)
        k4 = flow_velocity(x + dt * k3, *args)
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x
