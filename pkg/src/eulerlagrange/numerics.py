"""Scalar and planar root finding, bracket scanning and level-curve tracing.

Everything here works on plain Python floats and callables so the same
routines serve the polynomial family relation, the branch functions and the
planar equilibrium systems.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from .errors import (
    GradientVanished,
    InputError,
    MaxIterExceeded,
    NoSignChange,
    NonFinite,
    NumericalError,
    SeedNotOnCurve,
    Singular,
)

log = logging.getLogger(__name__)

ScalarFunc = Callable[[float], float]
Point = tuple[float, float]
PlanarFunc = Callable[[float, float], Sequence[float]]
FieldFunc = Callable[[float, float], float]

GRADIENT_FLOOR = 1e-12
SINGULAR_DET = 1e-14
MAX_HALVINGS = 30


@dataclass(frozen=True)
class RootConfig:
    """Tolerances shared by all solvers.

    Attributes
    ----------
    abs_tol : float
        Residual tolerance on ``|func(x)|``.
    step_tol : float
        Bracket width (or argument change) at which iteration stops.
    max_iter : int
        Iteration cap for every loop.
    scan_samples : int
        Number of subintervals used by :func:`scan_roots`.
    """

    abs_tol: float = 1e-12
    step_tol: float = 1e-13
    max_iter: int = 200
    scan_samples: int = 2048

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.step_tol > 0):
            raise InputError("abs_tol and step_tol must be positive")
        if self.max_iter < 1:
            raise InputError("max_iter must be >= 1")
        if self.scan_samples < 2:
            raise InputError("scan_samples must be >= 2")

    def with_(self, **changes) -> "RootConfig":
        return replace(self, **changes)


DEFAULT_CONFIG = RootConfig()


def fd_step(x: float) -> float:
    return max(1e-7, 1e-7 * abs(x))


def central_difference(func: ScalarFunc, x: float) -> float:
    h = fd_step(x)
    return (func(x + h) - func(x - h)) / (2.0 * h)


def _checked(func, x):
    try:
        v = float(func(x))
    except ZeroDivisionError as exc:
        raise NonFinite(f"function raised {exc!r} at x={x!r}") from exc
    if not math.isfinite(v):
        raise NonFinite(f"function returned {v!r} at x={x!r}")
    return v


def solve_bracketed(
    func: ScalarFunc,
    lo: float,
    hi: float,
    cfg: Optional[RootConfig] = None,
    dfunc: Optional[ScalarFunc] = None,
) -> float:
    """Find a root of ``func`` inside a sign-change bracket.

    Newton steps (analytic ``dfunc`` or a central difference) are taken when
    they land strictly inside the current bracket and the bracket keeps
    halving at least every second iteration; otherwise the step is a
    bisection. Iteration stops once ``|func(x)| <= abs_tol`` or the bracket
    is narrower than ``step_tol`` (or cannot be split in floating point).

    Raises
    ------
    NoSignChange
        ``func(lo)`` and ``func(hi)`` have the same sign.
    NonFinite
        ``func`` returned inf/nan at an evaluation point.
    MaxIterExceeded
        No convergence in ``cfg.max_iter`` iterations.
    """
    cfg = cfg or DEFAULT_CONFIG
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise InputError(f"need lo < hi, got [{lo}, {hi}]")
    flo = _checked(func, lo)
    fhi = _checked(func, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise NoSignChange(f"f({lo})={flo:.3e} and f({hi})={fhi:.3e} share a sign")

    a, b, fa, fb = lo, hi, flo, fhi
    x = 0.5 * (a + b)
    widths = [b - a, b - a]
    for _ in range(cfg.max_iter):
        fx = _checked(func, x)
        if abs(fx) <= cfg.abs_tol:
            return x
        if (fx < 0) == (fa < 0):
            a, fa = x, fx
        else:
            b, fb = x, fx
        width = b - a
        mid = 0.5 * (a + b)
        if width <= cfg.step_tol or mid in (a, b):
            return a if abs(fa) <= abs(fb) else b

        try:
            d = dfunc(x) if dfunc is not None else central_difference(func, x)
            xn = x - fx / d
        except ZeroDivisionError:
            xn = math.nan
        stalled = width > 0.5 * widths[-2]
        widths.append(width)
        if a < xn < b and not stalled:
            x = xn
        else:
            x = mid
    raise MaxIterExceeded(f"no convergence in {cfg.max_iter} iterations on [{lo}, {hi}]")


def _safe_value(func, x):
    try:
        v = float(func(x))
    except (ZeroDivisionError, ArithmeticError):
        return math.nan
    return v


def scan_roots(
    func: ScalarFunc,
    lo: float,
    hi: float,
    cfg: Optional[RootConfig] = None,
    dfunc: Optional[ScalarFunc] = None,
) -> list[float]:
    """All roots of ``func`` on ``[lo, hi]`` found by grid scanning.

    The grid has ``cfg.scan_samples + 1`` uniform points. Non-finite samples
    are skipped along with both neighbouring subintervals. Sign changes that
    turn out to straddle a pole (the refined point is larger in magnitude
    than both samples) are discarded. Roots closer than ``10 * step_tol`` are
    merged.
    """
    cfg = cfg or DEFAULT_CONFIG
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise InputError(f"need lo < hi, got [{lo}, {hi}]")
    n = cfg.scan_samples
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    xs[-1] = hi
    vs = [_safe_value(func, x) for x in xs]

    roots: list[float] = []
    for i in range(n + 1):
        if vs[i] == 0.0:
            roots.append(xs[i])
    for i in range(n):
        va, vb = vs[i], vs[i + 1]
        if not (math.isfinite(va) and math.isfinite(vb)):
            continue
        if va == 0.0 or vb == 0.0 or (va < 0) == (vb < 0):
            continue
        try:
            r = solve_bracketed(func, xs[i], xs[i + 1], cfg, dfunc)
        except NonFinite:
            log.debug("skipping pole crossing on [%r, %r]", xs[i], xs[i + 1])
            continue
        if abs(_safe_value(func, r)) > max(abs(va), abs(vb)):
            log.debug("discarding pole crossing near %r", r)
            continue
        roots.append(r)

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and r - merged[-1] <= 10 * cfg.step_tol:
            continue
        merged.append(r)
    return merged


def _vec(residual, x, y):
    try:
        u, v = residual(x, y)
        u, v = float(u), float(v)
    except (ZeroDivisionError, ArithmeticError):
        return math.nan, math.nan
    return u, v


def fd_jacobian(residual: PlanarFunc, x: float, y: float):
    hx, hy = fd_step(x), fd_step(y)
    fxp = _vec(residual, x + hx, y)
    fxm = _vec(residual, x - hx, y)
    fyp = _vec(residual, x, y + hy)
    fym = _vec(residual, x, y - hy)
    return (
        ((fxp[0] - fxm[0]) / (2 * hx), (fyp[0] - fym[0]) / (2 * hy)),
        ((fxp[1] - fxm[1]) / (2 * hx), (fyp[1] - fym[1]) / (2 * hy)),
    )


def solve_planar(
    residual: PlanarFunc,
    seed: Point,
    cfg: Optional[RootConfig] = None,
    jacobian: Optional[Callable[[float, float], Sequence[Sequence[float]]]] = None,
) -> Point:
    """Damped Newton for a 2x2 nonlinear system ``residual(x, y) = (0, 0)``.

    The Jacobian is a central finite difference unless ``jacobian`` is given.
    Each Newton step is halved (up to 30 times) until the max-norm of the
    residual decreases. Stops when the max-norm drops to ``abs_tol`` or the
    full Newton step is below ``step_tol`` (relative to ``1 + |point|``).
    """
    cfg = cfg or DEFAULT_CONFIG
    x, y = float(seed[0]), float(seed[1])
    F = _vec(residual, x, y)
    if not all(map(math.isfinite, F)):
        raise NonFinite(f"residual is not finite at seed ({x}, {y})")
    norm = max(abs(F[0]), abs(F[1]))
    for _ in range(cfg.max_iter):
        if norm <= cfg.abs_tol:
            return x, y
        (a, b), (c, d) = jacobian(x, y) if jacobian else fd_jacobian(residual, x, y)
        det = a * d - b * c
        scale = max(abs(a), abs(b)) * max(abs(c), abs(d))
        if not math.isfinite(det) or abs(det) < SINGULAR_DET * scale or scale == 0.0:
            raise Singular(f"Jacobian singular at ({x}, {y}): det={det:.3e}")
        dx = -(d * F[0] - b * F[1]) / det
        dy = -(a * F[1] - c * F[0]) / det
        if max(abs(dx), abs(dy)) <= cfg.step_tol * (1.0 + max(abs(x), abs(y))):
            return x + dx, y + dy
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            xt, yt = x + lam * dx, y + lam * dy
            Ft = _vec(residual, xt, yt)
            nt = max(abs(Ft[0]), abs(Ft[1]))
            if math.isfinite(nt) and nt < norm:
                break
            lam *= 0.5
        else:
            raise MaxIterExceeded(
                f"line search stalled at ({x}, {y}) with residual {norm:.3e}"
            )
        x, y, F, norm = xt, yt, Ft, nt
    if norm <= cfg.abs_tol:
        return x, y
    raise MaxIterExceeded(f"no convergence in {cfg.max_iter} iterations (residual {norm:.3e})")


def fd_gradient(field: FieldFunc, x: float, y: float) -> Point:
    hx, hy = fd_step(x), fd_step(y)
    gx = (field(x + hx, y) - field(x - hx, y)) / (2 * hx)
    gy = (field(x, y + hy) - field(x, y - hy)) / (2 * hy)
    return gx, gy


def _project(field, x, y, cfg, gradient):
    """Newton along the gradient back to the zero level; None on failure."""
    for _ in range(cfg.max_iter):
        try:
            v = float(field(x, y))
        except (ZeroDivisionError, ArithmeticError):
            return None
        if not math.isfinite(v):
            return None
        if abs(v) <= cfg.abs_tol:
            return x, y
        gx, gy = gradient(x, y)
        g2 = gx * gx + gy * gy
        if not math.isfinite(g2):
            return None
        if math.sqrt(g2) < GRADIENT_FLOOR:
            raise GradientVanished(f"gradient vanished near ({x}, {y})")
        x, y = x - v * gx / g2, y - v * gy / g2
    return None


def trace_level_curve(
    scalar_field: FieldFunc,
    seed: Point,
    step: float,
    domain: tuple[float, float, float, float],
    max_points: int = 10_000,
    cfg: Optional[RootConfig] = None,
    direction: int = 1,
    gradient: Optional[Callable[[float, float], Point]] = None,
) -> list[Point]:
    """Trace the zero set of ``scalar_field`` from ``seed``.

    Predictor: a step of length ``step`` along the unit tangent (the
    gradient rotated by +90 degrees, times ``direction``). Corrector: Newton
    along the gradient back onto the curve. A failed corrector, or one that
    lands farther than twice the step away, halves the step (down to
    ``step / 1024``) before giving up.

    ``domain`` is ``(xmin, xmax, ymin, ymax)``. Tracing stops at the domain
    boundary, after ``max_points`` samples, or when the curve closes (back
    within ``step / 2`` of the start after at least 10 samples).

    Returns the samples in order, starting with the corrected seed.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not step > 0:
        raise InputError("step must be positive")
    grad = gradient or (lambda x, y: fd_gradient(scalar_field, x, y))
    xmin, xmax, ymin, ymax = domain

    start = _project(scalar_field, float(seed[0]), float(seed[1]), cfg, grad)
    if start is None or math.dist(start, seed) > step:
        raise SeedNotOnCurve(f"could not project seed {tuple(seed)} onto the zero level")

    def tangent(p, prev=None):
        gx, gy = grad(*p)
        gn = math.hypot(gx, gy)
        if gn < GRADIENT_FLOOR:
            raise GradientVanished(f"gradient vanished at {p}")
        t = (-gy / gn, gx / gn)
        if prev is None:
            return (direction * t[0], direction * t[1])
        if t[0] * prev[0] + t[1] * prev[1] < 0:
            return (-t[0], -t[1])
        return t

    points = [start]
    p = start
    t = tangent(p)
    while len(points) < max_points:
        h = step
        while True:
            q = _project(scalar_field, p[0] + h * t[0], p[1] + h * t[1], cfg, grad)
            if q is not None and math.dist(q, p) <= 2 * h:
                break
            h *= 0.5
            if h < step / 1024:
                raise NumericalError(f"corrector failed to converge near {p}")
        if not (xmin <= q[0] <= xmax and ymin <= q[1] <= ymax):
            break
        points.append(q)
        if len(points) >= 10 and math.dist(q, start) < step / 2:
            break
        t = tangent(q, t)
        p = q
    return points
