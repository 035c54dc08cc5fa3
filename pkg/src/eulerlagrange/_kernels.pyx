# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: batched rotating-frame residuals and the RK4 n-body
integrator. Same signatures as ``_kernels_py``."""
import numpy as np

from libc.math cimport sqrt, INFINITY


def rotating_residuals(prim_pos, prim_mass, probes):
    cdef double[:, ::1] P = np.ascontiguousarray(prim_pos, dtype=np.float64)
    cdef double[::1] m = np.ascontiguousarray(prim_mass, dtype=np.float64)
    cdef double[:, ::1] X = np.ascontiguousarray(probes, dtype=np.float64)
    cdef Py_ssize_t p = X.shape[0], k = P.shape[0], a, i
    out_arr = np.empty((p, 2), dtype=np.float64)
    dist_arr = np.empty(p, dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] dist = dist_arr
    cdef double x, y, dx, dy, r, w, rx, ry, dmin
    with nogil:
        for a in range(p):
            x = X[a, 0]
            y = X[a, 1]
            rx = x
            ry = y
            dmin = INFINITY
            for i in range(k):
                dx = P[i, 0] - x
                dy = P[i, 1] - y
                r = sqrt(dx * dx + dy * dy)
                if r < dmin:
                    dmin = r
                w = m[i] / (r * r * r)
                rx = rx + w * dx
                ry = ry + w * dy
            out[a, 0] = rx
            out[a, 1] = ry
            dist[a] = dmin
    return out_arr, dist_arr


cdef double _accel(const double[:, ::1] x, const double[::1] m,
                   double[:, ::1] acc) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef double dx, dy, r2, r, inv3, dmin = INFINITY
    for i in range(n):
        acc[i, 0] = 0.0
        acc[i, 1] = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[j, 0] - x[i, 0]
            dy = x[j, 1] - x[i, 1]
            r2 = dx * dx + dy * dy
            r = sqrt(r2)
            if r < dmin:
                dmin = r
            inv3 = 1.0 / (r2 * r)
            acc[i, 0] += m[j] * inv3 * dx
            acc[i, 1] += m[j] * inv3 * dy
            acc[j, 0] -= m[i] * inv3 * dx
            acc[j, 1] -= m[i] * inv3 * dy
    return dmin


def rk4_nbody(pos0, vel0, mass, double dt, Py_ssize_t nsteps, double min_sep):
    cdef double[:, ::1] x0 = np.ascontiguousarray(pos0, dtype=np.float64)
    cdef double[:, ::1] v0 = np.ascontiguousarray(vel0, dtype=np.float64)
    cdef double[::1] m = np.ascontiguousarray(mass, dtype=np.float64)
    cdef Py_ssize_t n = x0.shape[0], k, i, c
    pos_arr = np.empty((nsteps + 1, n, 2), dtype=np.float64)
    vel_arr = np.empty((nsteps + 1, n, 2), dtype=np.float64)
    cdef double[:, :, ::1] pos = pos_arr
    cdef double[:, :, ::1] vel = vel_arr
    cdef double[:, ::1] x = np.array(x0)
    cdef double[:, ::1] v = np.array(v0)
    cdef double[:, ::1] xt = np.empty((n, 2))
    cdef double[:, ::1] v2 = np.empty((n, 2))
    cdef double[:, ::1] v3 = np.empty((n, 2))
    cdef double[:, ::1] v4 = np.empty((n, 2))
    cdef double[:, ::1] a1 = np.empty((n, 2))
    cdef double[:, ::1] a2 = np.empty((n, 2))
    cdef double[:, ::1] a3 = np.empty((n, 2))
    cdef double[:, ::1] a4 = np.empty((n, 2))
    cdef double h = dt, d, dmin
    cdef Py_ssize_t collide = -1
    pos[0, :, :] = x
    vel[0, :, :] = v
    with nogil:
        for k in range(nsteps):
            dmin = _accel(x, m, a1)
            for i in range(n):
                for c in range(2):
                    xt[i, c] = x[i, c] + 0.5 * h * v[i, c]
                    v2[i, c] = v[i, c] + 0.5 * h * a1[i, c]
            d = _accel(xt, m, a2)
            if d < dmin:
                dmin = d
            for i in range(n):
                for c in range(2):
                    xt[i, c] = x[i, c] + 0.5 * h * v2[i, c]
                    v3[i, c] = v[i, c] + 0.5 * h * a2[i, c]
            d = _accel(xt, m, a3)
            if d < dmin:
                dmin = d
            for i in range(n):
                for c in range(2):
                    xt[i, c] = x[i, c] + h * v3[i, c]
                    v4[i, c] = v[i, c] + h * a3[i, c]
            d = _accel(xt, m, a4)
            if d < dmin:
                dmin = d
            for i in range(n):
                for c in range(2):
                    x[i, c] = x[i, c] + (h / 6.0) * (v[i, c] + 2.0 * v2[i, c] + 2.0 * v3[i, c] + v4[i, c])
                    v[i, c] = v[i, c] + (h / 6.0) * (a1[i, c] + 2.0 * a2[i, c] + 2.0 * a3[i, c] + a4[i, c])
                    pos[k + 1, i, c] = x[i, c]
                    vel[k + 1, i, c] = v[i, c]
            if dmin < min_sep:
                collide = k
                break
    if collide >= 0:
        return pos_arr[: collide + 2], vel_arr[: collide + 2], collide
    return pos_arr, vel_arr, -1
