"""Pure numpy kernels; fallback for the compiled ``_kernels`` extension.

Signatures and return layouts match ``_kernels.pyx`` exactly.
"""
import numpy as np


def rotating_residuals(prim_pos, prim_mass, probes):
    """Rotating-frame equilibrium residual of massless probes.

    For each probe ``X``: ``sum_i m_i (X_i - X) / |X_i - X|**3 + X``.

    Returns ``(residuals, min_dist)`` with shapes ``(p, 2)`` and ``(p,)``.
    """
    P = np.ascontiguousarray(prim_pos, dtype=np.float64)
    m = np.ascontiguousarray(prim_mass, dtype=np.float64)
    X = np.ascontiguousarray(probes, dtype=np.float64)
    d = P[None, :, :] - X[:, None, :]
    r = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)
    min_dist = r.min(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = m[None, :] / (r * r * r)
    out = X.copy()
    for i in range(P.shape[0]):
        out += w[:, i, None] * d[:, i, :]
    return out, min_dist


def _accel(x, m):
    n = x.shape[0]
    a = np.zeros_like(x)
    dmin = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[j] - x[i]
            r2 = dx[0] * dx[0] + dx[1] * dx[1]
            r = np.sqrt(r2)
            dmin = min(dmin, r)
            inv3 = 1.0 / (r2 * r) if r2 > 0.0 else np.inf
            a[i] += m[j] * inv3 * dx
            a[j] -= m[i] * inv3 * dx
    return a, dmin


def rk4_nbody(pos0, vel0, mass, dt, nsteps, min_sep):
    """Classical RK4 for planar point masses (G = 1).

    Returns ``(pos, vel, collide_step)``: arrays of shape ``(nsteps+1, n, 2)``
    and the index of the first step whose stage evaluation saw two bodies
    closer than ``min_sep`` (``-1`` if none). On collision the trajectory is
    truncated after that step.
    """
    x = np.array(pos0, dtype=np.float64)
    v = np.array(vel0, dtype=np.float64)
    m = np.ascontiguousarray(mass, dtype=np.float64)
    n = x.shape[0]
    pos = np.empty((nsteps + 1, n, 2))
    vel = np.empty((nsteps + 1, n, 2))
    pos[0], vel[0] = x, v
    h = dt
    # an exact encounter yields inf/nan for that step, which is then flagged
    with np.errstate(invalid="ignore", over="ignore"):
        return _rk4_loop(x, v, m, h, nsteps, min_sep, pos, vel)


def _rk4_loop(x, v, m, h, nsteps, min_sep, pos, vel):
    for k in range(nsteps):
        a1, d1 = _accel(x, m)
        a2, d2 = _accel(x + 0.5 * h * v, m)
        v2 = v + 0.5 * h * a1
        a3, d3 = _accel(x + 0.5 * h * v2, m)
        v3 = v + 0.5 * h * a2
        a4, d4 = _accel(x + h * v3, m)
        v4 = v + h * a3
        x = x + (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v = v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        pos[k + 1], vel[k + 1] = x, v
        if min(d1, d2, d3, d4) < min_sep:
            return pos[: k + 2], vel[: k + 2], k
    return pos, vel, -1
