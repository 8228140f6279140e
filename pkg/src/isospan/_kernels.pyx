# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: point-set distances and the cone-flow integrator."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fmin, fmax, pow, INFINITY
from libc.stdlib cimport malloc, free as cfree

cnp.import_array()


def directed_hausdorff(X, Y):
    cdef const double[:, ::1] xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] yv = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t nx = xv.shape[0], ny = yv.shape[0], n = xv.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double worst = 0.0, best, d, t
    for i in range(nx):
        best = INFINITY
        for j in range(ny):
            d = 0.0
            for k in range(n):
                t = xv[i, k] - yv[j, k]
                d += t * t
                if d >= best:
                    break
            if d < best:
                best = d
                if best <= worst:
                    # cannot raise the running maximum any more
                    break
        if best > worst:
            worst = best
    return sqrt(worst)


cdef inline double _seg_dist2(const double* x, const double[:, :, ::1] segs,
                              Py_ssize_t s, Py_ssize_t n) noexcept nogil:
    cdef double ll = 0.0, dot = 0.0, t, d = 0.0, ab, diff
    cdef Py_ssize_t k
    for k in range(n):
        ab = segs[s, 1, k] - segs[s, 0, k]
        ll += ab * ab
        dot += (x[k] - segs[s, 0, k]) * ab
    t = dot / ll if ll > 0.0 else 0.0
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    for k in range(n):
        diff = x[k] - segs[s, 0, k] - t * (segs[s, 1, k] - segs[s, 0, k])
        d += diff * diff
    return d


def min_dist_to_segments(P, segs):
    cdef const double[:, ::1] pv = np.ascontiguousarray(P, dtype=np.float64)
    cdef Py_ssize_t m = pv.shape[0], n = pv.shape[1]
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    sa = np.ascontiguousarray(segs, dtype=np.float64)
    if sa.shape[0] == 0:
        out_arr.fill(np.inf)
        return out_arr
    cdef const double[:, :, ::1] sv = sa
    cdef Py_ssize_t i, s, ns = sv.shape[0]
    cdef double best, d
    for i in range(m):
        best = INFINITY
        for s in range(ns):
            d = _seg_dist2(&pv[i, 0], sv, s, n)
            if d < best:
                best = d
        out[i] = sqrt(best)
    return out_arr


cdef struct FlowParams:
    const double* p
    const unsigned char* free
    const double* lo
    const double* hi
    const double* center
    double radius
    double disk_r
    double half_width
    double theta_scale
    double theta_power
    Py_ssize_t n
    int has_fixed


cdef void _velocity(const double* x, FlowParams* prm, const double[:, :, ::1] segs,
                    Py_ssize_t ns, double* out) noexcept nogil:
    cdef Py_ssize_t k, s, n = prm.n
    cdef double rel, g2 = 0.0, e2 = 0.0, gn, over, d_disk, d_a, slack, r2 = 0.0
    cdef double d, theta, t
    for k in range(n):
        rel = x[k] - prm.p[k]
        if prm.free[k]:
            e2 += rel * rel
        else:
            g2 += rel * rel
        t = x[k] - prm.center[k]
        r2 += t * t
    gn = sqrt(g2)
    if gn > prm.disk_r:
        for k in range(n):
            out[k] = 0.0
        return
    over = fmax(gn - prm.disk_r, 0.0)
    d_disk = sqrt(e2 + over * over)
    d_a = INFINITY
    for s in range(ns):
        t = _seg_dist2(x, segs, s, n)
        if t < d_a:
            d_a = t
    d_a = sqrt(d_a)
    slack = prm.half_width - gn if prm.has_fixed else INFINITY
    for k in range(n):
        if prm.free[k]:
            slack = fmin(slack, fmin(x[k] - prm.lo[k], prm.hi[k] - x[k]))
    slack = fmin(slack, prm.radius - sqrt(r2))
    d = fmin(fmin(d_disk, d_a), fmax(slack, 0.0))
    theta = fmin(1.0, d / prm.theta_scale)
    if prm.theta_power != 1.0:
        theta = pow(theta, prm.theta_power)
    for k in range(n):
        if prm.free[k]:
            out[k] = -theta * (x[k] - prm.p[k])
        else:
            out[k] = 0.0


def flow_velocity(X, p, free, lo, hi, center, radius, disk_r, half_width,
                  segs, theta_scale, theta_power):
    cdef const double[:, ::1] xv = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0], n = xv.shape[1], i
    out_arr = np.zeros((m, n))
    cdef double[:, ::1] out = out_arr
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef const unsigned char[::1] fv = np.ascontiguousarray(free, dtype=np.uint8)
    cdef const double[::1] lv = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] hv = np.ascontiguousarray(hi, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(center, dtype=np.float64)
    sa = np.ascontiguousarray(segs, dtype=np.float64).reshape(-1, 2, n)
    cdef const double[:, :, ::1] sv = sa if sa.shape[0] else np.zeros((1, 2, n))
    cdef Py_ssize_t ns = sa.shape[0]
    cdef FlowParams prm
    prm.p = &pv[0]
    prm.free = &fv[0]
    prm.lo = &lv[0]
    prm.hi = &hv[0]
    prm.center = &cv[0]
    prm.radius = radius
    prm.disk_r = disk_r
    prm.half_width = half_width
    prm.theta_scale = theta_scale
    prm.theta_power = theta_power
    prm.n = n
    prm.has_fixed = 0
    for i in range(n):
        if not fv[i]:
            prm.has_fixed = 1
    for i in range(m):
        _velocity(&xv[i, 0], &prm, sv, ns, &out[i, 0])
    return out_arr


def flow_rk4(X, p, free, lo, hi, center, radius, disk_r, half_width, segs,
             theta_scale, theta_power, double dt, long nsteps):
    x_arr = np.array(X, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] xv = x_arr
    cdef Py_ssize_t m = xv.shape[0], n = xv.shape[1], i, k
    cdef long step
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef const unsigned char[::1] fv = np.ascontiguousarray(free, dtype=np.uint8)
    cdef const double[::1] lv = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] hv = np.ascontiguousarray(hi, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(center, dtype=np.float64)
    sa = np.ascontiguousarray(segs, dtype=np.float64).reshape(-1, 2, n)
    cdef const double[:, :, ::1] sv = sa if sa.shape[0] else np.zeros((1, 2, n))
    cdef Py_ssize_t ns = sa.shape[0]
    cdef double* buf
    cdef double *x0, *w, *k1, *k2, *k3, *k4
    cdef double h = 0.5 * dt, s6 = dt / 6.0
    cdef FlowParams prm
    prm.p = &pv[0]
    prm.free = &fv[0]
    prm.lo = &lv[0]
    prm.hi = &hv[0]
    prm.center = &cv[0]
    prm.radius = radius
    prm.disk_r = disk_r
    prm.half_width = half_width
    prm.theta_scale = theta_scale
    prm.theta_power = theta_power
    prm.n = n
    prm.has_fixed = 0
    for i in range(n):
        if not fv[i]:
            prm.has_fixed = 1
    buf = <double*> malloc(6 * n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    x0 = buf
    w = buf + n
    k1 = buf + 2 * n
    k2 = buf + 3 * n
    k3 = buf + 4 * n
    k4 = buf + 5 * n
    try:
        with nogil:
            for i in range(m):
                for k in range(n):
                    x0[k] = xv[i, k]
                for step in range(nsteps):
                    _velocity(x0, &prm, sv, ns, k1)
                    for k in range(n):
                        w[k] = x0[k] + h * k1[k]
                    _velocity(w, &prm, sv, ns, k2)
                    for k in range(n):
                        w[k] = x0[k] + h * k2[k]
                    _velocity(w, &prm, sv, ns, k3)
                    for k in range(n):
                        w[k] = x0[k] + dt * k3[k]
                    _velocity(w, &prm, sv, ns, k4)
                    for k in range(n):
                        x0[k] = x0[k] + s6 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k])
                for k in range(n):
                    xv[i, k] = x0[k]
    finally:
        cfree(buf)
    return x_arr
