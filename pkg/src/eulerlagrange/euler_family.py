"""Euler's collinear circular solutions of the 3-body problem.

Normalization: gravitational constant 1, angular velocity 1, and the body
that is alone on its side of the centre of mass sits at radius 1. Body
positions at time ``t`` are

    X1 = (cos t, sin t),  X2 = -r2 (cos t, sin t),  X3 = -r3 (cos t, sin t)

with ``0 <= r2 < r3``. The radii are tied by ``p(r2, r3) = 0`` (so
``r3 = f(r2)``) and, for fixed radii, ``m1`` and ``m2`` are determined by
``m3``, which ranges over ``[0, (1 + r3)**2]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    BracketFailure,
    DegenerateFamily,
    MassOutOfRange,
    MaxIterExceeded,
    NoSignChange,
    OutOfRange,
    ResidualGateFailed,
)
from .numerics import DEFAULT_CONFIG, RootConfig, solve_bracketed

FAMILY_TOL = 1e-10
EQUATION_TOL = 1e-10
MAX_WIDENINGS = 64


def eval_p(r2: float, r3: float) -> float:
    """The family polynomial p(r2, r3), Horner-grouped in ``r3``."""
    c5 = 1.0
    c4 = 2.0 - 2.0 * r2
    c3 = (r2 - 4.0) * r2 + 1.0
    c2 = ((-r2 - 1.0) * r2 - 5.0) * r2 - 1.0
    c1 = (((2.0 * r2 + 4.0) * r2 + 1.0) * r2 - 4.0) * r2 - 2.0
    c0 = ((((-r2 - 2.0) * r2 - 1.0) * r2 - 1.0) * r2 - 2.0) * r2 - 1.0
    return ((((c5 * r3 + c4) * r3 + c3) * r3 + c2) * r3 + c1) * r3 + c0


def eval_dp_dr3(r2: float, r3: float) -> float:
    """Partial derivative of :func:`eval_p` with respect to ``r3``."""
    c4 = 2.0 - 2.0 * r2
    c3 = (r2 - 4.0) * r2 + 1.0
    c2 = ((-r2 - 1.0) * r2 - 5.0) * r2 - 1.0
    c1 = (((2.0 * r2 + 4.0) * r2 + 1.0) * r2 - 4.0) * r2 - 2.0
    return (((5.0 * r3 + 4.0 * c4) * r3 + 3.0 * c3) * r3 + 2.0 * c2) * r3 + c1


def _dp_dr2(r2, r3):
    d4 = -2.0
    d3 = 2.0 * r2 - 4.0
    d2 = -3.0 * r2 * r2 - 2.0 * r2 - 5.0
    d1 = ((8.0 * r2 + 12.0) * r2 + 2.0) * r2 - 4.0
    d0 = (((-5.0 * r2 - 8.0) * r2 - 3.0) * r2 - 2.0) * r2 - 2.0
    return (((d4 * r3 + d3) * r3 + d2) * r3 + d1) * r3 + d0


def p_scale(r3: float) -> float:
    return 1.0 + abs(r3) ** 5


def eval_f(r2: float, cfg: Optional[RootConfig] = None) -> float:
    """Radius ``r3 = f(r2)`` of the third body.

    The root of ``p(r2, .)`` is bracketed on ``[max(1, r2), r2 + 3]``;
    ``p`` is negative at the lower end (``p(r2, r2) = -(1 + r2)**4``), and the
    upper end is pushed out geometrically when needed.
    """
    r2 = float(r2)
    if not r2 >= 0.0:
        raise OutOfRange(f"f is defined for r2 >= 0, got {r2}")
    cfg = cfg or DEFAULT_CONFIG
    lo = max(1.0, r2)
    hi = r2 + 3.0
    for _ in range(MAX_WIDENINGS + 1):
        try:
            return solve_bracketed(
                lambda r3: eval_p(r2, r3), lo, hi, cfg, lambda r3: eval_dp_dr3(r2, r3)
            )
        except NoSignChange:
            hi = lo + 2.0 * (hi - lo)
    raise BracketFailure(f"no sign change of p({r2}, .) up to r3={hi}")


def _df_dr2(r2: float, r3: float) -> float:
    return -_dp_dr2(r2, r3) / eval_dp_dr3(r2, r3)


def eval_f_inverse(r3: float, cfg: Optional[RootConfig] = None) -> float:
    """The unique ``r2 >= 0`` with ``f(r2) = r3``."""
    r3 = float(r3)
    if not r3 >= 1.0:
        raise OutOfRange(f"f^-1 is defined for r3 >= 1, got {r3}")
    if r3 == 1.0:
        return 0.0
    cfg = cfg or DEFAULT_CONFIG
    return solve_bracketed(
        lambda r2: eval_f(r2, cfg) - r3,
        0.0,
        r3,
        cfg,
        lambda r2: _df_dr2(r2, eval_f(r2, cfg)),
    )


def m3_max(r3: float) -> float:
    return (1.0 + r3) ** 2


def masses_from_m3(r2: float, r3: float, m3: float) -> tuple[float, float]:
    """Masses ``(m1, m2)`` compatible with radii ``(1, r2, r3)`` and ``m3``."""
    top = m3_max(r3)
    if not 0.0 <= m3 <= top:
        raise MassOutOfRange(f"m3={m3} outside [0, {top}]")
    gap2 = (r2 - r3) ** 2
    if gap2 == 0.0:
        raise DegenerateFamily("r2 == r3")
    a = (r2 + 1.0) ** 2
    m1 = a * (m3 + r2 * gap2) / gap2
    m2 = a * (1.0 - m3 / top)
    return m1, m2


@dataclass(frozen=True)
class EulerFamilyPoint:
    r2: float
    r3: float


@dataclass(frozen=True)
class EulerSolution:
    """One member ES(r2, m3) of the Euler family with its three masses."""

    family: EulerFamilyPoint
    m1: float
    m2: float
    m3: float

    @property
    def r2(self) -> float:
        return self.family.r2

    @property
    def r3(self) -> float:
        return self.family.r3

    @property
    def masses(self) -> tuple[float, float, float]:
        return self.m1, self.m2, self.m3

    @property
    def radii(self) -> tuple[float, float, float]:
        return 1.0, self.r2, self.r3

    def primaries(self) -> tuple[tuple[float, float], ...]:
        """Positions of the three bodies at ``t = 0``."""
        return (1.0, 0.0), (-self.r2, 0.0), (-self.r3, 0.0)

    @classmethod
    def from_values(cls, r2, r3, m1, m2, m3) -> "EulerSolution":
        """Wrap already-known values without re-solving (e.g. parsed JSON)."""
        return cls(EulerFamilyPoint(float(r2), float(r3)), float(m1), float(m2), float(m3))


def build_solution(r2: float, m3: float, cfg: Optional[RootConfig] = None) -> EulerSolution:
    """Construct ES(r2, m3) and check it before returning.

    Raises
    ------
    MassOutOfRange
        ``m3`` outside ``[0, (1 + f(r2))**2]``.
    ResidualGateFailed
        The family relation or one of the three reduced equations of motion
        is violated by more than 1e-10 (a bug, not a legal outcome).
    """
    from .verify import check_es_equations

    r3 = eval_f(r2, cfg)
    m1, m2 = masses_from_m3(r2, r3, float(m3))
    sol = EulerSolution(EulerFamilyPoint(float(r2), r3), m1, m2, float(m3))

    if abs(eval_p(r2, r3)) > FAMILY_TOL * p_scale(r3):
        raise ResidualGateFailed(f"|p({r2}, {r3})| exceeds the family tolerance")
    report = check_es_equations(sol)
    if report.max_residual > EQUATION_TOL:
        raise ResidualGateFailed(
            f"ES({r2}, {m3}) violates the equations of motion: {report.eq_residuals}"
        )
    return sol


def positions_at(sol: EulerSolution, t: float):
    c, s = math.cos(t), math.sin(t)
    return (c, s), (-sol.r2 * c, -sol.r2 * s), (-sol.r3 * c, -sol.r3 * s)


# Substituting r2 = u, r3 = u + w + 1 turns p = 0 into a quartic in u.
def quartic_coefficients(w: float) -> tuple[float, float, float, float, float]:
    """Coefficients of the quartic in ``u``, highest degree first."""
    return (
        -1.0,
        -2.0 * w - 6.0,
        ((3.0 * w + 8.0) * w + 1.0) * w - 10.0,
        (((3.0 * w + 16.0) * w + 28.0) * w + 14.0) * w - 5.0,
        ((((w + 7.0) * w + 19.0) * w + 24.0) * w + 12.0) * w,
    )


def _quartic(u, w):
    a4, a3, a2, a1, a0 = quartic_coefficients(w)
    return (((a4 * u + a3) * u + a2) * u + a1) * u + a0


def _quartic_du(u, w):
    a4, a3, a2, a1, _ = quartic_coefficients(w)
    return ((4.0 * a4 * u + 3.0 * a3) * u + 2.0 * a2) * u + a1


def _quartic_dw(u, w):
    return (
        -2.0 * u**3
        + (9.0 * w * w + 16.0 * w + 1.0) * u * u
        + ((12.0 * w + 48.0) * w * w + 56.0 * w + 14.0) * u
        + (((5.0 * w + 28.0) * w + 57.0) * w + 48.0) * w
        + 12.0
    )


def _newton_quartic(u, w, iters=60):
    for _ in range(iters):
        d = _quartic_du(u, w)
        if d == 0.0:
            return None
        du = _quartic(u, w) / d
        u -= du
        if abs(du) <= 4e-16 * (1.0 + abs(u)):
            return u
    return None


def parametrize_G(w: float, max_step: float = 0.05) -> float:
    """Branch ``u = G(w)`` of the quartic that starts at ``G(0) = 0``.

    Continuation in ``w`` from 0 with a tangent predictor and a Newton
    corrector; a step whose corrector fails, or moves too far from the
    prediction, is halved.
    """
    w = float(w)
    if not w >= 0.0:
        raise OutOfRange(f"G is defined for w >= 0, got {w}")
    u, s = 0.0, 0.0
    h = max_step
    while s < w:
        # snap to w rather than leave a sliver of a step
        target = w if s + 1.5 * h >= w else s + h
        dw = target - s
        guess = u - dw * _quartic_dw(u, s) / _quartic_du(u, s)
        nxt = _newton_quartic(guess, target)
        if nxt is None or abs(nxt - guess) > 0.1 * (dw + abs(nxt - u)) + 1e-12 * (1.0 + abs(u)):
            h = 0.5 * dw
            if h < 1e-12:
                raise MaxIterExceeded(f"continuation of G stalled at w={s}")
            continue
        u, s = nxt, target
        h = min(2.0 * h, max_step)
    return u
