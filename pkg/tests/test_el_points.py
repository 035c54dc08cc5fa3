import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerlagrange.el_points import (
    ELClass,
    axis_m3_centerfixed,
    collinear_brackets,
    collinear_m3_centerfixed,
    collinear_m3_general,
    eval_f1,
    eval_f2,
    eval_q1,
    eval_q2,
    eval_q3,
    eval_q4,
    find_el_points,
    g1,
    g2,
    g3,
    g4,
    h1,
    h2,
    h3,
    h4,
    q3q4_field,
    q3q4_locus,
)
from eulerlagrange.errors import Collision, MassOutOfRange, Pole
from eulerlagrange.euler_family import build_solution, eval_f, m3_max
from eulerlagrange.lagrange import L4
from eulerlagrange.verify import accel_residual, equilibrium_residuals

COLLINEAR = [
    ELClass.COLLINEAR_OUTER_LEFT,
    ELClass.COLLINEAR_MIDDLE,
    ELClass.COLLINEAR_INNER,
    ELClass.COLLINEAR_OUTER_RIGHT,
]


def _probe(draw_x, draw_y, sol):
    # keep probes away from the primaries
    for cx in (1.0, -sol.r2, -sol.r3):
        if math.hypot(draw_x - cx, draw_y) < 1e-3:
            return None
    return draw_x, draw_y


solutions = st.builds(
    lambda r2, frac: build_solution(r2, frac * m3_max(eval_f(r2))),
    st.floats(0.0, 4.0),
    st.floats(0.0, 1.0),
)
coords = st.floats(-8.0, 8.0)


# -- reduced equations -----------------------------------------------------------

@settings(max_examples=200)
@given(solutions, coords, coords)
def test_f1_f2_are_the_rotating_frame_residual(sol, x, y):
    p = _probe(x, y, sol)
    if p is None:
        return
    (rx, ry), = equilibrium_residuals(sol.primaries(), sol.masses, [p])
    f1, f2 = eval_f1(sol, *p), eval_f2(sol, *p)
    scale = 1.0 + abs(x) + abs(y) + sum(sol.masses) * 1e6
    assert f1 == pytest.approx(-rx, abs=1e-12 * scale)
    assert f2 == pytest.approx(ry, abs=1e-12 * scale)


@settings(max_examples=200)
@given(solutions, coords, coords)
def test_q_identities(sol, x, y):
    p = _probe(x, y, sol)
    if p is None:
        return
    f1, f2 = eval_f1(sol, *p), eval_f2(sol, *p)
    q1, q2 = eval_q1(sol, *p), eval_q2(sol, *p)
    scale = 1e-11 * (1.0 + abs(q2) + abs(x * q1) + abs(f1))
    assert f2 == pytest.approx(y * q1, abs=1e-12 * (1 + abs(f2)))
    assert abs(f1 - (q2 - x * q1)) <= scale


def test_plus_sign_variant_is_wrong(es_2_1):
    # f1 = q2 - r4 q1; neither f1 = q2 + r4 q1 nor its negative holds
    x, y = 0.7, 1.9
    f1 = eval_f1(es_2_1, x, y)
    q1, q2 = eval_q1(es_2_1, x, y), eval_q2(es_2_1, x, y)
    assert f1 == pytest.approx(q2 - x * q1, rel=1e-12)
    assert abs(f1 - (q2 + x * q1)) > 0.1
    assert abs(f1 + (q2 + x * q1)) > 0.1


def test_collision_guard(es_2_1):
    with pytest.raises(Collision):
        eval_f1(es_2_1, 1.0, 0.0)
    with pytest.raises(Collision):
        eval_q3(es_2_1.r2, es_2_1.r3, -es_2_1.r3, 0.0)


# -- centre-fixed case -------------------------------------------------------------

def test_centerfixed_anchor_roots():
    assert g1(1.7576799791694) == pytest.approx(0.8, abs=1e-11)
    assert g2(0.4946664910173) == pytest.approx(0.8, abs=1e-11)
    assert axis_m3_centerfixed(1.1394282249562) == pytest.approx(0.8, abs=1e-12)


@given(st.floats(0.01, 0.99))
def test_centerfixed_reflection_symmetry(r):
    # ES(0, m3) is symmetric under r4 -> -r4
    assert g3(-r) == pytest.approx(g2(r), rel=1e-11, abs=1e-13)
    assert g4(-(1 + r)) == pytest.approx(g1(1 + r), rel=1e-11)


@settings(max_examples=60)
@given(st.floats(-3.0, 3.0).filter(lambda r: min(abs(r), abs(r - 1), abs(r + 1)) > 1e-3))
def test_centerfixed_branch_is_an_equilibrium(r4):
    m3 = collinear_m3_centerfixed(r4)
    if not 0.0 < m3 < 4.0:
        return
    sol = build_solution(0.0, m3)
    assert accel_residual(sol, r4, 0.0).max_residual <= 1e-11 * (1 + m3 / min(abs(r4), abs(r4 - 1), abs(r4 + 1)) ** 2)


def test_centerfixed_poles():
    for r in (-1.0, 0.0, 1.0):
        with pytest.raises(Pole):
            collinear_m3_centerfixed(r)


# -- general case -----------------------------------------------------------------

@pytest.mark.parametrize(
    "h, g, r4",
    [(h1, g4, -1.6), (h2, g3, -0.4), (h3, g2, 0.45), (h4, g1, 1.8)],
)
def test_general_branches_reduce_to_centerfixed(h, g, r4):
    r2 = 1e-8
    r3 = eval_f(r2)
    assert h(r2, r3, r4) == pytest.approx(g(r4), rel=1e-6)


@settings(max_examples=60)
@given(st.floats(0.05, 4.0), st.floats(-12.0, 12.0))
def test_general_branch_is_an_equilibrium(r2, r4):
    r3 = eval_f(r2)
    if min(abs(r4 - 1), abs(r4 + r2), abs(r4 + r3)) < 1e-2:
        return
    m3 = collinear_m3_general(r2, r3, r4)
    if not 0.0 < m3 < m3_max(r3):
        return
    sol = build_solution(r2, m3)
    assert abs(eval_f1(sol, r4, 0.0)) <= 1e-9 * (1 + max(sol.masses) * 1e4)


def test_general_pole_on_primary():
    with pytest.raises(Pole):
        h3(2.0, eval_f(2.0), 1.0)


# -- point finding -------------------------------------------------------------------

def test_centerfixed_points_reproduce_known_values():
    els = find_el_points(build_solution(0.0, 0.8))
    assert els[ELClass.COLLINEAR_OUTER_RIGHT].r4 == pytest.approx(1.7576799791694, abs=1e-12)
    assert els[ELClass.COLLINEAR_OUTER_LEFT].r4 == pytest.approx(-1.7576799791694, abs=1e-12)
    assert els[ELClass.COLLINEAR_INNER].r4 == pytest.approx(0.4946664910173, abs=1e-12)
    assert els[ELClass.COLLINEAR_MIDDLE].r4 == pytest.approx(-0.4946664910173, abs=1e-12)
    up = els[ELClass.TRIANGULAR_UPPER]
    assert (up.r4, up.r5) == pytest.approx((0.0, 1.1394282249562), abs=1e-12)


def test_es_2_1_points(el_2_1):
    expected = {
        ELClass.COLLINEAR_OUTER_LEFT: (-4.41675276, 0.0),
        ELClass.COLLINEAR_MIDDLE: (-3.22547886, 0.0),
        ELClass.COLLINEAR_INNER: (-0.77663926, 0.0),
        ELClass.COLLINEAR_OUTER_RIGHT: (3.54165744, 0.0),
        ELClass.TRIANGULAR_UPPER: (-0.62118237, 2.69216895),
        ELClass.TRIANGULAR_LOWER: (-0.62118237, -2.69216895),
    }
    assert [p.klass for p in el_2_1.points] == list(expected)
    for k, xy in expected.items():
        assert (el_2_1[k].r4, el_2_1[k].r5) == pytest.approx(xy, abs=1e-8)
    assert el_2_1.max_residual <= 1e-10


def test_points_are_ordered_between_primaries(el_2_1, es_2_1):
    a, b, c, d = (el_2_1[k].r4 for k in COLLINEAR)
    assert a < -es_2_1.r3 < b < -es_2_1.r2 < c < 1.0 < d
    for k, (lo, hi) in collinear_brackets(es_2_1.r2, es_2_1.r3).items():
        assert lo <= el_2_1[k].r4 <= hi


def test_triangular_point_solves_q3_q4(el_2_1, es_2_1):
    up = el_2_1[ELClass.TRIANGULAR_UPPER]
    args = (es_2_1.r2, es_2_1.r3, up.r4, up.r5)
    assert eval_q3(*args) == pytest.approx(1.0, abs=1e-9)
    assert eval_q4(*args) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([1e-4, 0.01, 0.3, 1.0, 5.0, 10.0]), st.floats(1e-6, 1 - 1e-6))
def test_gate_holds_across_the_family(r2, frac):
    sol = build_solution(r2, frac * m3_max(eval_f(r2)))
    els = find_el_points(sol)
    assert len(els.points) == 6
    for p in els.points:
        assert accel_residual(sol, p.r4, p.r5).max_residual <= 1e-10
    up, lo = els[ELClass.TRIANGULAR_UPPER], els[ELClass.TRIANGULAR_LOWER]
    assert up.r5 > 0 and (lo.r4, lo.r5) == (up.r4, -up.r5)


@pytest.mark.parametrize("m3", [0.0, m3_max(eval_f(2.0))])
def test_endpoint_masses_are_rejected(m3):
    with pytest.raises(MassOutOfRange):
        find_el_points(build_solution(2.0, m3))


def test_collapsing_points_follow_hill_scaling():
    """Near m3 = 0 two points straddle the vanishing body at distance ~ m3**(1/3)."""
    r3 = eval_f(2.0)
    d = []
    for eps in (1e-6, 1e-9):
        els = find_el_points(build_solution(2.0, eps))
        d.append(abs(els[ELClass.COLLINEAR_OUTER_LEFT].r4 + r3))
    assert d[0] / d[1] == pytest.approx(10.0, rel=0.05)


# -- locus -----------------------------------------------------------------------------

@pytest.fixture(scope="module")
def locus_2():
    return q3q4_locus(2.0)


def _polyline_distance(samples, q):
    P = np.array([(s.r4, s.r5) for s in samples])
    a, b = P[:-1], P[1:]
    ab = b - a
    t = np.clip(((q - a) * ab).sum(1) / (ab * ab).sum(1), 0.0, 1.0)
    return float(np.min(np.hypot(*(a + t[:, None] * ab - q).T)))


def test_locus_samples_lie_on_the_curve(locus_2):
    r3 = eval_f(2.0)
    assert len(locus_2) > 100
    for s in locus_2[::25]:
        assert abs(q3q4_field(2.0, r3, s.r4, s.r5)) <= 1e-10
    phys = [s for s in locus_2 if s.physical]
    assert phys and all(0.0 <= s.m3_common <= m3_max(r3) for s in phys)


@pytest.mark.parametrize("m3", [0.5, 1.0, 3.0, 10.0, 20.0])
def test_triangular_points_lie_on_locus(locus_2, m3):
    up = find_el_points(build_solution(2.0, m3))[ELClass.TRIANGULAR_UPPER]
    assert _polyline_distance(locus_2, np.array([up.r4, up.r5])) < 1e-4


def test_locus_passes_equilateral_points(locus_2):
    r3 = eval_f(2.0)
    for x, y in (L4(2.0), L4(r3)):
        assert _polyline_distance(locus_2, np.array([x, y])) < 1e-4
        assert _polyline_distance(locus_2, np.array([x, -y])) < 1e-4


def test_locus_rejects_centerfixed():
    with pytest.raises(MassOutOfRange):
        q3q4_locus(0.0)


@settings(max_examples=200)
@given(st.floats(0.01, 4.0), coords, coords)
def test_locus_field_is_the_cleared_difference(r2, x, y):
    from eulerlagrange.el_points import _cubed_distances, _q_parts

    r3 = eval_f(r2)
    if min(math.hypot(x - c, y) for c in (1.0, -r2, -r3)) < 1e-3:
        return
    num3, den3, num4, den4 = _q_parts(r2, r3, x, y)
    d1, d2, d3 = _cubed_distances(r2, r3, x, y)
    scaled = q3q4_field(r2, r3, x, y) * (1 / d1 + 1 / d2 + 1 / d3)
    assert abs(scaled - (num3 * den4 - num4 * den3)) <= 1e-12 * (abs(num3 * den4) + abs(num4 * den3))


def test_locus_crosses_the_primary_at_one():
    # the curve runs through (1, 0); the field stays finite next to it
    r3 = eval_f(2.0)
    assert abs(q3q4_field(2.0, r3, 1.0 + 1e-9, 0.0)) < 1.0
    for step in (0.01, 0.03, 0.05, 0.1):
        assert len(q3q4_locus(2.0, step)) > 50


def test_tiny_positive_r2_is_rejected():
    from eulerlagrange.errors import OutOfRange

    with pytest.raises(OutOfRange):
        find_el_points(build_solution(1e-9, 1.0))
    assert len(find_el_points(build_solution(1e-7, 1.0)).points) == 6


@pytest.mark.parametrize("eps", [1e-6, 1e-9])
def test_endpoint_limits_away_from_the_vanishing_body(eps):
    """Points not trapped next to the vanishing body converge to Lagrange points
    linearly in eps; the trapped pair sits ~eps**(1/3) from it."""
    from eulerlagrange.lagrange import L1, L2, L3, L5

    r2, r3 = 2.0, eval_f(2.0)
    low = find_el_points(build_solution(r2, eps))
    assert low[ELClass.COLLINEAR_INNER].r4 == pytest.approx(L1(r2), abs=eps)
    assert low[ELClass.COLLINEAR_OUTER_RIGHT].r4 == pytest.approx(L2(r2), abs=eps)
    up = low[ELClass.TRIANGULAR_UPPER]
    assert math.dist((up.r4, up.r5), L4(r2)) < eps
    for k in (ELClass.COLLINEAR_OUTER_LEFT, ELClass.COLLINEAR_MIDDLE):
        assert abs(low[k].r4 - L3(r2)) < 2 * r3 * eps ** (1 / 3)
    high = find_el_points(build_solution(r2, m3_max(r3) - eps))
    assert high[ELClass.COLLINEAR_OUTER_LEFT].r4 == pytest.approx(L3(r3), abs=eps)
    lo = high[ELClass.TRIANGULAR_LOWER]
    assert math.dist((lo.r4, lo.r5), L5(r3)) < eps


# -- documented closed-form values ------------------------------------------------

def test_h_branch_values():
    from eulerlagrange.lagrange import L1

    r2, r3 = 2.0, eval_f(2.0)
    assert h1(r2, r3, -eval_f(r3)) == pytest.approx((1 + r3) ** 2, abs=1e-6)
    # h1 -> 0 as r4 -> -r3 from the left; -r3 itself is a primary (pole)
    assert abs(h1(r2, r3, -r3 - 1e-7)) <= 1e-10
    with pytest.raises(Pole):
        h1(r2, r3, -r3)
    assert abs(h3(r2, r3, L1(r2))) <= 1e-6


def test_g_branch_endpoint_values():
    from eulerlagrange.el_points import g5

    assert g1(2.3968122) == pytest.approx(4.0, abs=1e-5)
    # the truncated abscissa 1.7576 sits 8e-5 left of the root, where g1' ~ 2.8
    assert g1(1.7576) == pytest.approx(0.8, abs=3e-4)
    assert g5(1.0) == 0.0
    assert g5(math.sqrt(3.0)) == pytest.approx(4.0, abs=1e-9)


def test_q3_q4_at_the_limiting_equilateral_points():
    r2, r3 = 2.0, eval_f(2.0)
    x, y = L4(r2)
    assert eval_q3(r2, r3, x, y) == pytest.approx(0.0, abs=1e-8)
    assert eval_q4(r2, r3, x, y) == pytest.approx(0.0, abs=1e-8)
    x, y = L4(r3)
    assert eval_q3(r2, r3, x, y) == pytest.approx((1 + r3) ** 2, abs=1e-6)
    assert eval_q4(r2, r3, x, y) == pytest.approx((1 + r3) ** 2, abs=1e-6)


@settings(max_examples=100)
@given(solutions, coords, st.floats(0.01, 8.0))
def test_parity_in_r5(sol, x, y):
    if _probe(x, y, sol) is None:
        return
    assert eval_f2(sol, x, -y) == -eval_f2(sol, x, y)
    assert eval_f1(sol, x, -y) == eval_f1(sol, x, y)
    assert eval_q1(sol, x, -y) == eval_q1(sol, x, y)
    assert eval_q2(sol, x, -y) == eval_q2(sol, x, y)
    assert eval_q3(sol.r2, sol.r3, x, -y) == eval_q3(sol.r2, sol.r3, x, y)
    if _probe(x, 0.0, sol) is not None:
        assert eval_f2(sol, x, 0.0) == 0.0


def test_centerfixed_pair_symmetry():
    els = find_el_points(build_solution(0.0, 2.5))
    assert els[ELClass.COLLINEAR_MIDDLE].r4 == pytest.approx(-els[ELClass.COLLINEAR_INNER].r4, abs=1e-12)
    assert els[ELClass.COLLINEAR_OUTER_LEFT].r4 == pytest.approx(-els[ELClass.COLLINEAR_OUTER_RIGHT].r4, abs=1e-12)


def test_top_end_outer_left_tends_to_f_of_r3():
    r3 = eval_f(2.0)
    els = find_el_points(build_solution(2.0, m3_max(r3) - 1e-6))
    assert els[ELClass.COLLINEAR_OUTER_LEFT].r4 == pytest.approx(-6.0305, abs=1e-4)


def test_off_equilibrium_reduced_residual_is_nonzero():
    assert abs(eval_f1(build_solution(0.0, 0.8), 3.0, 0.0)) > 1e-3


def test_m3_profile_is_recorded():
    from eulerlagrange.el_points import m3_profile_monotone

    r3 = eval_f(2.0)
    samples = q3q4_locus(2.0, resolution=0.02)
    assert m3_profile_monotone(samples, 2.0, r3) in (True, False)
    assert m3_profile_monotone(samples[:1], 2.0, r3) is None
