"""Euler-Lagrange points: equilibria of a massless fourth body in the frame
rotating with an Euler solution ES(r2, m3).

The fourth body sits at ``(r4, r5)`` in the rotating frame. Collinear
points (``r5 = 0``) are found by inverting closed-form branch functions
``m3 = g_k(r4)`` (centre-fixed case ``r2 = 0``) or ``m3 = h_k(r4)``
(``r2 > 0``) on the brackets between primaries and Lagrange points.
Off-axis points solve ``q3 = q4 = m3``. Every point is re-checked against
the first-principles residual in :mod:`eulerlagrange.verify`.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    AmbiguousRoots,
    Collision,
    MassOutOfRange,
    MaxIterExceeded,
    NumericalError,
    OutOfRange,
    Pole,
    ResidualGateFailed,
    RootNotFound,
)
from .euler_family import EulerSolution, eval_f, m3_max
from .lagrange import L1, L2, L3, L4
from .numerics import (
    DEFAULT_CONFIG,
    RootConfig,
    scan_roots,
    solve_bracketed,
    solve_planar,
    trace_level_curve,
)
from .verify import accel_residual

log = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
COLLISION_DIST = 1e-12
EDGE = 1e-9
GATE_TOL = 1e-10
# below this (and above 0) the off-axis system is too ill-conditioned to solve
R2_MIN = 1e-7


class ELClass(str, enum.Enum):
    COLLINEAR_OUTER_LEFT = "CollinearOuterLeft"
    COLLINEAR_MIDDLE = "CollinearMiddle"
    COLLINEAR_INNER = "CollinearInner"
    COLLINEAR_OUTER_RIGHT = "CollinearOuterRight"
    TRIANGULAR_UPPER = "TriangularUpper"
    TRIANGULAR_LOWER = "TriangularLower"


@dataclass(frozen=True)
class ELPoint:
    r4: float
    r5: float
    klass: ELClass
    residual: float


@dataclass(frozen=True)
class ELSet:
    solution: EulerSolution
    points: tuple[ELPoint, ...]

    def __getitem__(self, klass) -> ELPoint:
        klass = ELClass(klass)
        for p in self.points:
            if p.klass is klass:
                return p
        raise KeyError(klass)

    @property
    def max_residual(self) -> float:
        return max(p.residual for p in self.points)


@dataclass(frozen=True)
class CurveSample:
    r4: float
    r5: float
    m3_common: float
    physical: bool


# -- reduced equations of motion ---------------------------------------------

def _check_off_primaries(r2, r3, r4, r5):
    for cx in (1.0, -r2, -r3):
        if math.hypot(r4 - cx, r5) <= COLLISION_DIST:
            raise Collision(f"({r4}, {r5}) coincides with the primary at ({cx}, 0)")


def _cubed_distances(r2, r3, r4, r5):
    # squared distances written as sums of squares (no cancellation near a primary)
    y2 = r5 * r5
    d1 = ((r4 - 1) ** 2 + y2) ** 1.5
    d2 = ((r4 + r2) ** 2 + y2) ** 1.5
    d3 = ((r4 + r3) ** 2 + y2) ** 1.5
    return d1, d2, d3


def eval_f1(sol: EulerSolution, r4: float, r5: float) -> float:
    r2, r3 = sol.r2, sol.r3
    m1, m2, m3 = sol.masses
    _check_off_primaries(r2, r3, r4, r5)
    d1, d2, d3 = _cubed_distances(r2, r3, r4, r5)
    return (
        m1 * r4 / d1 + m2 * r4 / d2 + m3 * r4 / d3
        - r4 - m1 / d1 + m2 * r2 / d2 + m3 * r3 / d3
    )


def eval_f2(sol: EulerSolution, r4: float, r5: float) -> float:
    r2, r3 = sol.r2, sol.r3
    m1, m2, m3 = sol.masses
    _check_off_primaries(r2, r3, r4, r5)
    d1, d2, d3 = _cubed_distances(r2, r3, r4, r5)
    return r5 * (-m1 / d1 - m2 / d2 - m3 / d3 + 1)


def eval_q1(sol: EulerSolution, r4: float, r5: float) -> float:
    """``f2 = r5 * q1``."""
    r2, r3 = sol.r2, sol.r3
    m1, m2, m3 = sol.masses
    _check_off_primaries(r2, r3, r4, r5)
    d1, d2, d3 = _cubed_distances(r2, r3, r4, r5)
    return -m1 / d1 - m2 / d2 - m3 / d3 + 1


def eval_q2(sol: EulerSolution, r4: float, r5: float) -> float:
    """``f1 = q2 - r4 * q1``."""
    r2, r3 = sol.r2, sol.r3
    m1, m2, m3 = sol.masses
    _check_off_primaries(r2, r3, r4, r5)
    d1, d2, d3 = _cubed_distances(r2, r3, r4, r5)
    return -m1 / d1 + m2 * r2 / d2 + m3 * r3 / d3


# -- centre-fixed branches (r2 = 0, r3 = 1) ------------------------------------

def _ratio(num, den, which):
    if den == 0.0:
        raise Pole(f"{which}: denominator vanishes", which=which)
    return num / den


def g1(r4: float) -> float:
    num = 4 * (r4 - 1) ** 3 * (r4 + 1) ** 2 * (r4 * r4 + r4 + 1)
    return _ratio(num, 7 * r4**4 + 10 * r4**2 - 1, "g1")


def g2(r4: float) -> float:
    num = -4 * (r4 - 1) ** 3 * (r4 + 1) ** 2 * (r4 * r4 + r4 + 1)
    return _ratio(num, r4**4 + 16 * r4**3 - 2 * r4**2 + 1, "g2")


def g3(r4: float) -> float:
    num = 4 * (r4 - 1) * (r4 + 1) * (r4 * r4 - 1) * (r4**3 + 1)
    return _ratio(num, r4**4 - 16 * r4**3 - 2 * r4**2 + 1, "g3")


def g4(r4: float) -> float:
    num = -4 * (r4 - 1) * (r4 + 1) * (r4 * r4 - 1) * (r4**3 + 1)
    return _ratio(num, 7 * r4**4 + 10 * r4**2 - 1, "g4")


def g5(r5: float) -> float:
    s = (r5 * r5 + 1) ** 1.5
    return _ratio(4 * s * (1 - r5**3), s - 8 * r5**3, "g5")


def collinear_m3_centerfixed(r4: float) -> float:
    """``m3`` making ``(r4, 0)`` an equilibrium of ES(0, m3)."""
    if r4 in (-1.0, 0.0, 1.0):
        raise Pole(f"r4={r4} is a primary position", which="primary")
    if r4 > 1:
        return g1(r4)
    if r4 > 0:
        return g2(r4)
    if r4 > -1:
        return g3(r4)
    return g4(r4)


def axis_m3_centerfixed(r5: float) -> float:
    return g5(r5)


# -- general branches (r2 > 0) -------------------------------------------------

def _h_terms(r2, r3, r4):
    for cx, name in ((1.0, "r4=1"), (-r2, "r4=-r2"), (-r3, "r4=-r3")):
        if r4 == cx:
            raise Pole(f"{name} is a primary position", which="primary")
    A = (r2 + 1) ** 2
    B = (r3 + 1) ** 2
    C = (r2 - r3) ** 2
    u = (r4 - 1) ** 2
    v = (r2 + r4) ** 2
    w = (r3 + r4) ** 2
    return r2 * A / u, A / v, A / (u * C), A / (B * v), 1 / w


def h1(r2, r3, r4):
    a, b, c, d, e = _h_terms(r2, r3, r4)
    return _ratio(-(a + b + r4), c - d + e, "h1")


def h2(r2, r3, r4):
    a, b, c, d, e = _h_terms(r2, r3, r4)
    return _ratio(a + b + r4, -c + d + e, "h2")


def h3(r2, r3, r4):
    a, b, c, d, e = _h_terms(r2, r3, r4)
    return _ratio(a - b + r4, -c - d + e, "h3")


def h4(r2, r3, r4):
    a, b, c, d, e = _h_terms(r2, r3, r4)
    return _ratio(-a - b + r4, c - d + e, "h4")


def collinear_m3_general(r2: float, r3: float, r4: float) -> float:
    """``m3`` making ``(r4, 0)`` an equilibrium of ES(r2, m3), ``r2 > 0``."""
    if r4 < -r3:
        return h1(r2, r3, r4)
    if r4 < -r2:
        return h2(r2, r3, r4)
    if r4 < 1:
        return h3(r2, r3, r4)
    return h4(r2, r3, r4)


# -- off-axis relations --------------------------------------------------------

def _q_parts(r2, r3, r4, r5):
    _check_off_primaries(r2, r3, r4, r5)
    d1, d2, d3 = _cubed_distances(r2, r3, r4, r5)
    A = (r2 + 1) ** 2
    B = (r3 + 1) ** 2
    C = (r2 - r3) ** 2
    num3 = -(A / d2 + r2 * A / d1 - 1)
    den3 = -A / (B * d2) + A / (C * d1) + 1 / d3
    num4 = r2 * A * (1 / d1 - 1 / d2)
    den4 = -r2 * A / (B * d2) - A / (C * d1) + r3 / d3
    return num3, den3, num4, den4


def eval_q3(r2: float, r3: float, r4: float, r5: float) -> float:
    """``m3`` solving ``q1 = 0`` at ``(r4, r5)``."""
    num3, den3, _, _ = _q_parts(r2, r3, r4, r5)
    return _ratio(num3, den3, "q3")


def eval_q4(r2: float, r3: float, r4: float, r5: float) -> float:
    """``m3`` solving ``q2 = 0`` at ``(r4, r5)``."""
    _, _, num4, den4 = _q_parts(r2, r3, r4, r5)
    return _ratio(num4, den4, "q4")


def q3q4_field(r2: float, r3: float, r4: float, r5: float) -> float:
    """Level function of the ``q3 = q4`` curve, regular at the primaries.

    ``num3 den4 - num4 den3`` (denominators of ``q3``, ``q4`` cleared) is,
    in the inverse cubed distances ``e_i``, a combination of ``e_i`` and
    ``e_i e_j`` only: the ``e_i**2`` terms cancel. Expanded that way and
    divided by ``e1 + e2 + e3`` it stays bounded and smooth through the
    primaries, which the curve may cross.
    """
    _check_off_primaries(r2, r3, r4, r5)
    d1, d2, d3 = _cubed_distances(r2, r3, r4, r5)
    e1, e2, e3 = 1.0 / d1, 1.0 / d2, 1.0 / d3
    A = (r2 + 1) ** 2
    B = (r3 + 1) ** 2
    C = (r2 - r3) ** 2
    E = e1 + e2 + e3
    w1, w2 = e1 / E, e2 / E
    c12 = A**3 * (r2 * r2 - 2 * r2 * r3 - r2 + r3 * r3 + 2 * r3 + 1) / (B * C)
    return (
        c12 * w1 * e2
        - r2 * A * (r3 + 1) * w1 * e3
        + A * (r2 - r3) * w2 * e3
        - A / C * w1
        - r2 * A / B * w2
        + r3 * e3 / E
    )


# -- point finding -------------------------------------------------------------

def _single_root(func, lo, hi, cfg, label):
    roots = scan_roots(func, lo, hi, cfg)
    if not roots:
        raise RootNotFound(f"{label}: no sign change on [{lo}, {hi}]")
    if len(roots) > 1:
        raise AmbiguousRoots(f"{label}: {len(roots)} roots on [{lo}, {hi}]: {roots}", roots)
    return roots[0]


def _polish_collinear(sol, r4, cfg):
    """Refine an axis root on ``f1(r, 0)`` itself.

    The branch inversion converges in ``m3``; near the ends of the mass range
    a tiny ``m3`` error maps to a visible force residual, so the last digits
    are taken from the force balance. A failed polish keeps ``r4``.
    """
    f = lambda r: eval_f1(sol, r, 0.0)
    try:
        if f(r4) == 0.0:
            return r4
        w = 1e-9 * (1.0 + abs(r4))
        for _ in range(20):
            lo, hi = r4 - w, r4 + w
            flo, fhi = f(lo), f(hi)
            if flo * fhi < 0:
                return solve_bracketed(f, lo, hi, cfg)
            w *= 4.0
    except (Collision, ArithmeticError):
        pass
    return r4


def _gate(sol, r4, r5, klass):
    report = accel_residual(sol, r4, r5)
    reduced = max(abs(eval_f1(sol, r4, r5)), abs(eval_f2(sol, r4, r5)))
    if report.max_residual > GATE_TOL or reduced > GATE_TOL:
        raise ResidualGateFailed(
            f"{klass.value} at ({r4}, {r5}): first-principles residual "
            f"{report.max_residual:.3e}, reduced residual {reduced:.3e}"
        )
    return ELPoint(r4, r5, klass, report.max_residual)


def _centerfixed_points(sol, cfg):
    m3 = sol.m3
    top = eval_f(1.0, cfg)
    x1 = _single_root(lambda r: g2(r) - m3, EDGE, 1 - EDGE, cfg, "g2")
    x2 = _single_root(lambda r: g1(r) - m3, 1 + EDGE, top, cfg, "g1")
    y1 = _single_root(lambda r: g3(r) - m3, -1 + EDGE, -EDGE, cfg, "g3")
    y2 = _single_root(lambda r: g4(r) - m3, -top, -1 - EDGE, cfg, "g4")
    x3 = _single_root(lambda r: g5(r) - m3, 1.0, SQRT3, cfg, "g5")
    return [
        (y2, 0.0, ELClass.COLLINEAR_OUTER_LEFT),
        (y1, 0.0, ELClass.COLLINEAR_MIDDLE),
        (x1, 0.0, ELClass.COLLINEAR_INNER),
        (x2, 0.0, ELClass.COLLINEAR_OUTER_RIGHT),
        (0.0, x3, ELClass.TRIANGULAR_UPPER),
    ]


def collinear_brackets(r2: float, r3: float, cfg: Optional[RootConfig] = None):
    """Theorem brackets ``(lo, hi)`` of the four collinear points, ``r2 > 0``."""
    return {
        ELClass.COLLINEAR_OUTER_LEFT: (L3(r3, cfg), -r3 - EDGE),
        ELClass.COLLINEAR_MIDDLE: (-r3 + EDGE, -r2 - EDGE),
        ELClass.COLLINEAR_INNER: (-r2 + EDGE, L1(r2, cfg)),
        ELClass.COLLINEAR_OUTER_RIGHT: (L2(r2, cfg), L2(r3, cfg)),
    }


def triangular_seed(r2: float, r3: float, m3: float) -> tuple[float, float]:
    """Interpolate between L4 of the two limiting two-primary systems by the
    mass fraction ``m3 / (1 + r3)**2``."""
    t = m3 / m3_max(r3)
    a, b = L4(r2), L4(r3)
    return a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])


def _cleared_q(r2, r3, m3):
    # q3 = m3 and q4 = m3 with denominators cleared; the quotients lose
    # precision where den3 or den4 is small (small r2)
    def residual(x, y):
        num3, den3, num4, den4 = _q_parts(r2, r3, x, y)
        return num3 - m3 * den3, num4 - m3 * den4

    return residual


def triangular_point(
    r2: float, r3: float, m3: float, cfg: Optional[RootConfig] = None
) -> tuple[float, float]:
    """Upper off-axis equilibrium of ES(r2, m3), ``r2 > 0``.

    Newton from :func:`triangular_seed` first. If that fails (the seed is poor
    when ``m3`` is comparable to ``m1``, i.e. small ``r2``), continue in ``m3``
    from the exact point ``L4(r2)`` at ``m3 = 0`` with adaptive steps.
    """
    cfg = cfg or DEFAULT_CONFIG
    try:
        x, y = solve_planar(_cleared_q(r2, r3, m3), triangular_seed(r2, r3, m3), cfg)
        if y > 0:
            return x, y
    except NumericalError:
        pass

    s, p, prev = 0.0, L4(r2), None
    h = m3
    while s < m3:
        t = m3 if h >= m3 - s else s + h
        guess = p
        if prev is not None:
            # secant predictor in m3
            k = (t - s) / (s - prev[0])
            guess = (p[0] + k * (p[0] - prev[1][0]), p[1] + k * (p[1] - prev[1][1]))
        try:
            q = solve_planar(_cleared_q(r2, r3, t), guess, cfg)
            # a long jump may land on another branch
            ok = q[1] > 0 and math.dist(q, p) <= 0.25 * (1.0 + math.hypot(*p))
        except NumericalError:
            ok = False
        if not ok:
            h = 0.5 * (t - s)
            if h <= 1e-14 * m3:
                raise MaxIterExceeded(f"continuation in m3 stalled at m3={s}")
            continue
        h = 2.0 * (t - s)
        prev, s, p = (s, p), t, q
    return p


def _general_points(sol, cfg):
    r2, r3, m3 = sol.r2, sol.r3, sol.m3
    branch = {
        ELClass.COLLINEAR_OUTER_LEFT: h1,
        ELClass.COLLINEAR_MIDDLE: h2,
        ELClass.COLLINEAR_INNER: h3,
        ELClass.COLLINEAR_OUTER_RIGHT: h4,
    }
    found = []
    for klass, (lo, hi) in collinear_brackets(r2, r3, cfg).items():
        h = branch[klass]
        r4 = _single_root(lambda r, h=h: h(r2, r3, r) - m3, lo, hi, cfg, klass.value)
        found.append((r4, 0.0, klass))

    x, y = triangular_point(r2, r3, m3, cfg)
    found.append((x, y, ELClass.TRIANGULAR_UPPER))
    return found


def find_el_points(sol: EulerSolution, cfg: Optional[RootConfig] = None) -> ELSet:
    """All six Euler-Lagrange points of ``sol``.

    Requires ``0 < m3 < (1 + r3)**2``; the endpoints reduce to two-primary
    Lagrange points (see :mod:`eulerlagrange.lagrange`). Also requires
    ``r2 == 0`` or ``r2 >= 1e-7``: in between, the off-axis point sits on a
    nearly neutral ring around the heavy middle body and Newton with a
    finite-difference Jacobian cannot resolve it.

    Raises
    ------
    OutOfRange
        ``0 < r2 < 1e-7``.
    RootNotFound, AmbiguousRoots
        A theorem bracket held no root, or more than one.
    ResidualGateFailed
        A root failed the equilibrium check (residual above 1e-10).
    """
    cfg = cfg or DEFAULT_CONFIG
    if not 0.0 < sol.m3 < m3_max(sol.r3):
        raise MassOutOfRange(
            f"m3={sol.m3} must lie strictly inside (0, {m3_max(sol.r3)})"
        )
    if 0.0 < sol.r2 < R2_MIN:
        raise OutOfRange(f"r2={sol.r2} lies in (0, {R2_MIN}); use r2 = 0 or r2 >= {R2_MIN}")
    raw = _centerfixed_points(sol, cfg) if sol.r2 == 0.0 else _general_points(sol, cfg)
    raw = [
        (x if k is ELClass.TRIANGULAR_UPPER else _polish_collinear(sol, x, cfg), y, k)
        for x, y, k in raw
    ]
    points = [_gate(sol, x, y, k) for x, y, k in raw]
    upper = points[-1]
    points.append(ELPoint(upper.r4, -upper.r5, ELClass.TRIANGULAR_LOWER, upper.residual))
    return ELSet(sol, tuple(points))


def locus_m3(r2: float, r3: float, r4: float, r5: float) -> float:
    """Common value of ``q3`` and ``q4`` on the locus (better-conditioned one)."""
    num3, den3, num4, den4 = _q_parts(r2, r3, r4, r5)
    if abs(den3) >= abs(den4):
        return num3 / den3
    return num4 / den4


def q3q4_locus(
    r2: float,
    resolution: float = 0.01,
    max_points: int = 20_000,
    domain: Optional[tuple[float, float, float, float]] = None,
    cfg: Optional[RootConfig] = None,
) -> list[CurveSample]:
    """Samples of the ``q3 = q4`` curve through the upper equilateral point of
    the ``m3 = 0`` limit, traced in both directions.

    Samples whose common ``m3`` lies outside ``[0, (1 + r3)**2]`` are kept
    with ``physical=False``.
    """
    if not r2 > 0:
        raise MassOutOfRange(f"the locus needs r2 > 0, got {r2}")
    cfg = cfg or DEFAULT_CONFIG
    r3 = eval_f(r2, cfg)
    if domain is None:
        half = 2.0 * (r3 + 1.0)
        domain = (-half, half, -half, half)
    field = lambda x, y: q3q4_field(r2, r3, x, y)
    seed = L4(r2)
    fwd = trace_level_curve(field, seed, resolution, domain, max_points, cfg, direction=1)
    closed = len(fwd) >= 10 and math.dist(fwd[-1], fwd[0]) < resolution / 2
    path = fwd
    if not closed and len(fwd) < max_points:
        back = trace_level_curve(
            field, seed, resolution, domain, max_points - len(fwd) + 1, cfg, direction=-1
        )
        path = back[:0:-1] + fwd
    top = m3_max(r3)
    out = []
    for x, y in path:
        m = locus_m3(r2, r3, x, y)
        out.append(CurveSample(x, y, m, 0.0 <= m <= top))
    if log.isEnabledFor(logging.DEBUG):
        mono = m3_profile_monotone(out, r2, r3)
        log.debug("q3=q4 locus r2=%g: m3 monotone between endpoints: %s", r2, mono)
    return out


def m3_profile_monotone(samples, r2: float, r3: float) -> Optional[bool]:
    """Whether ``m3`` is monotone along the traced arc from the sample
    nearest ``L4(r2)`` to the one nearest ``L4(r3)``.

    A diagnostic only; ``None`` when the arc has fewer than two samples.
    """
    def nearest(pt):
        return min(range(len(samples)), key=lambda i: math.dist((samples[i].r4, samples[i].r5), pt))

    i, j = sorted((nearest(L4(r2)), nearest(L4(r3))))
    m = [s.m3_common for s in samples[i : j + 1]]
    if len(m) < 2:
        return None
    d = [b - a for a, b in zip(m, m[1:])]
    return all(x >= 0 for x in d) or all(x <= 0 for x in d)
