"""First-principles checks straight from Newton's equations (G = 1).

Nothing here uses the reduced closed forms of ``el_points``: an equilibrium
of a massless body in the frame rotating at unit rate is checked through
``sum_i m_i (X_i - X) / |X_i - X|**3 + X = 0`` (uniform circular motion at
unit rate has acceleration ``-X``), and dynamics are checked by integrating
the inertial-frame n-body system with RK4.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import Collision, CollisionDuringIntegration, InputError, StepTooLarge
from .kernels import rk4_nbody, rotating_residuals

COLLISION_DIST = 1e-12
INTEGRATION_MIN_SEP = 1e-6
ENERGY_WARN = 1e-6


@dataclass(frozen=True)
class Drift:
    radius_drift: float
    angular_rate_drift: float


@dataclass
class ResidualReport:
    """Named residuals of one check, optionally with integration drift."""

    eq_residuals: dict[str, float] = field(default_factory=dict)
    drift: Optional[Drift] = None

    @property
    def max_residual(self) -> float:
        if not self.eq_residuals:
            return 0.0
        return max(abs(v) for v in self.eq_residuals.values())


@dataclass(frozen=True)
class BodyState:
    position: tuple[float, float]
    velocity: tuple[float, float]
    mass: float

    def __post_init__(self):
        if not self.mass >= 0.0:
            raise InputError(f"mass must be >= 0, got {self.mass}")


def equilibrium_residuals(primaries, masses, points) -> np.ndarray:
    """Rotating-frame residuals at many points; shape ``(len(points), 2)``.

    Raises :class:`Collision` if any point is within 1e-12 of a primary.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    res, dmin = rotating_residuals(
        np.asarray(primaries, dtype=np.float64), np.asarray(masses, dtype=np.float64), pts
    )
    if np.any(dmin <= COLLISION_DIST):
        bad = pts[int(np.argmin(dmin))]
        raise Collision(f"point ({bad[0]}, {bad[1]}) coincides with a primary")
    return res


def accel_residual(sol, r4: float, r5: float) -> ResidualReport:
    """Equilibrium residual of a massless fourth body at ``(r4, r5)``."""
    (rx, ry), = equilibrium_residuals(sol.primaries(), sol.masses, [(r4, r5)])
    return ResidualReport({"x": float(rx), "y": float(ry)})


def accel_residuals(sol, points) -> np.ndarray:
    return equilibrium_residuals(sol.primaries(), sol.masses, points)


def check_es_equations(sol) -> ResidualReport:
    """The three reduced radial equations of an Euler solution (one per body)."""
    r2, r3 = sol.r2, sol.r3
    m1, m2, m3 = sol.masses
    a, b, g = (r2 + 1.0) ** 2, (r3 + 1.0) ** 2, (r2 - r3) ** 2
    return ResidualReport(
        {
            "body1": m2 / a + (m3 - b) / b,
            "body2": (r2 * a - m1) / a + m3 / g,
            "body3": (r3 * b - m1) / b - m2 / g,
        }
    )


def center_of_mass_offset(sol) -> float:
    return sol.m1 - sol.m2 * sol.r2 - sol.m3 * sol.r3


def circular_states(sol, tracers: Sequence[tuple[float, float]] = ()) -> list[BodyState]:
    """Initial states for rigid rotation at unit rate: the three primaries of
    ``sol`` followed by massless tracers at the given rotating-frame points."""
    pts = list(sol.primaries()) + [tuple(map(float, t)) for t in tracers]
    masses = list(sol.masses) + [0.0] * len(tracers)
    return [BodyState((x, y), (-y, x), m) for (x, y), m in zip(pts, masses)]


@dataclass
class Trajectory:
    """Sampled RK4 solution plus drift diagnostics.

    ``radius_drift[i]`` is ``max_t | |X_i(t)| - |X_i(0)| |`` and
    ``angular_rate_drift[i]`` the same for ``(x vy - y vx) / |X|**2``; the
    latter is ``nan`` for a body starting at the origin.
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    masses: np.ndarray
    radius_drift: np.ndarray
    angular_rate_drift: np.ndarray
    energy_drift: float

    @property
    def drift(self) -> Drift:
        ang = self.angular_rate_drift[~np.isnan(self.angular_rate_drift)]
        return Drift(
            float(self.radius_drift.max()),
            float(ang.max()) if ang.size else 0.0,
        )

    def momentum(self) -> np.ndarray:
        """Total linear momentum at every sample, shape ``(T, 2)``."""
        return np.einsum("i,tij->tj", self.masses, self.velocities)


def _energy(pos, vel, m):
    mask = m > 0
    x, v, mm = pos[..., mask, :], vel[..., mask, :], m[mask]
    kin = 0.5 * np.einsum("i,...i->...", mm, (v**2).sum(-1))
    pot = np.zeros(kin.shape)
    n = mm.size
    for i in range(n):
        for j in range(i + 1, n):
            r = np.linalg.norm(x[..., i, :] - x[..., j, :], axis=-1)
            pot -= mm[i] * mm[j] / r
    return kin + pot


def integrate_nbody(bodies: Sequence[BodyState], t_end: float, dt: float) -> Trajectory:
    """Integrate the planar n-body equations with fixed-step RK4.

    The step count is ``ceil(t_end / dt)`` and the step is shrunk to land on
    ``t_end`` exactly. Massless bodies are accelerated by the others but
    exert no force.

    Raises
    ------
    CollisionDuringIntegration
        Two bodies came within 1e-6 of each other.

    Warns
    -----
    StepTooLarge
        Relative energy drift of the massive subsystem exceeded 1e-6.
    """
    if not dt > 0 or not t_end > 0:
        raise InputError("dt and t_end must be positive")
    pos0 = np.array([b.position for b in bodies], dtype=np.float64)
    vel0 = np.array([b.velocity for b in bodies], dtype=np.float64)
    m = np.array([b.mass for b in bodies], dtype=np.float64)
    n = len(bodies)
    for i in range(n):
        for j in range(i + 1, n):
            if math.dist(pos0[i], pos0[j]) < INTEGRATION_MIN_SEP:
                raise Collision(f"bodies {i} and {j} start in collision")

    nsteps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / nsteps
    pos, vel, hit = rk4_nbody(pos0, vel0, m, h, nsteps, INTEGRATION_MIN_SEP)
    if hit >= 0:
        raise CollisionDuringIntegration(
            f"bodies closer than {INTEGRATION_MIN_SEP} during step {hit}",
            step=hit,
            time=hit * h,
        )
    times = h * np.arange(nsteps + 1)

    radius = np.hypot(pos[..., 0], pos[..., 1])
    radius_drift = np.abs(radius - radius[0]).max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = (pos[..., 0] * vel[..., 1] - pos[..., 1] * vel[..., 0]) / radius**2
    ang = np.abs(rate - rate[0]).max(axis=0)
    ang[radius[0] < COLLISION_DIST] = np.nan

    energy_drift = 0.0
    if np.count_nonzero(m) >= 2:
        e = _energy(pos, vel, m)
        energy_drift = float(np.abs(e - e[0]).max() / abs(e[0]))
        if energy_drift > ENERGY_WARN:
            warnings.warn(
                f"massive-subsystem energy drifted by {energy_drift:.2e} (relative); "
                "consider a smaller dt",
                StepTooLarge,
                stacklevel=2,
            )
    return Trajectory(times, pos, vel, m, radius_drift, ang, energy_drift)
