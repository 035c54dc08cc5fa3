"""The five Lagrange points of two primaries at (1, 0) and (-x, 0).

With unit angular velocity and the centre of mass at the origin the masses
are fixed by ``x``: ``m1 = x (1 + x)**2`` at (1, 0) and ``m2 = (1 + x)**2``
at (-x, 0). The collinear points come from degenerate Euler solutions (one
mass set to zero), so they are all expressed through ``f`` and ``f^-1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import OutOfRange
from .euler_family import eval_f, eval_f_inverse
from .numerics import RootConfig
from .verify import ResidualReport, equilibrium_residuals

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class LagrangeSet:
    x: float
    l1: float
    l2: float
    l3: float
    l4: tuple[float, float]
    l5: tuple[float, float]

    def points(self) -> dict[str, tuple[float, float]]:
        return {
            "L1": (self.l1, 0.0),
            "L2": (self.l2, 0.0),
            "L3": (self.l3, 0.0),
            "L4": self.l4,
            "L5": self.l5,
        }


def _check(x):
    x = float(x)
    if not x > 0.0:
        raise OutOfRange(f"x must be positive, got {x}")
    return x


def L1(x: float, cfg: Optional[RootConfig] = None) -> float:
    x = _check(x)
    if x >= 1.0:
        return -eval_f_inverse(x, cfg)
    return x * eval_f_inverse(1.0 / x, cfg)


def L2(x: float, cfg: Optional[RootConfig] = None) -> float:
    x = _check(x)
    return x * eval_f(1.0 / x, cfg)


def L3(x: float, cfg: Optional[RootConfig] = None) -> float:
    return -eval_f(_check(x), cfg)


def L4(x: float) -> tuple[float, float]:
    """Apex of the equilateral triangle over the segment from (-x, 0) to (1, 0)."""
    x = _check(x)
    return (1.0 - x) / 2.0, (1.0 + x) / 2.0 * SQRT3


def L5(x: float) -> tuple[float, float]:
    a, b = L4(x)
    return a, -b


def lagrange_points(x: float, cfg: Optional[RootConfig] = None) -> LagrangeSet:
    x = _check(x)
    return LagrangeSet(x, L1(x, cfg), L2(x, cfg), L3(x, cfg), L4(x), L5(x))


def two_primary_system(x: float):
    """Positions and masses of the two primaries parametrized by ``x``."""
    x = _check(x)
    return ((1.0, 0.0), (-x, 0.0)), (x * (1.0 + x) ** 2, (1.0 + x) ** 2)


def lagrange_residual(x: float, r4: float, r5: float) -> float:
    """Max-norm rotating-frame residual at ``(r4, r5)`` for the pair ``x``."""
    prim, masses = two_primary_system(x)
    (rx, ry), = equilibrium_residuals(prim, masses, [(r4, r5)])
    return max(abs(rx), abs(ry))


def verify_lagrange(
    x: float,
    probes: Iterable[tuple[float, float]] = (),
    cfg: Optional[RootConfig] = None,
) -> ResidualReport:
    """Equilibrium residuals at L1..L5 (and any extra probe points)."""
    pts = lagrange_points(x, cfg).points()
    for i, probe in enumerate(probes):
        pts[f"probe{i}"] = tuple(probe)
    prim, masses = two_primary_system(x)
    res = equilibrium_residuals(prim, masses, list(pts.values()))
    return ResidualReport(
        {name: float(max(abs(rx), abs(ry))) for name, (rx, ry) in zip(pts, res)}
    )
