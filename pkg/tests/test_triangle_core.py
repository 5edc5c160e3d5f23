import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from triangle_ineq import triangle_core as tc
from triangle_ineq.errors import DomainError, InvalidTriangle
from triangle_ineq.triangle_core import Triangle


def test_rejects_degenerate_and_nonpositive():
    for sides in [(1, 1, 2), (1, 2, 4), (0, 1, 1), (-1, 1, 1), (math.nan, 1, 1), (math.inf, 1, 1)]:
        with pytest.raises(InvalidTriangle):
            Triangle(*sides)


def test_margin_validation():
    Triangle(1, 1, 1.999)
    with pytest.raises(InvalidTriangle):
        Triangle.with_margin(1, 1, 1.999, 0.01)


@pytest.mark.parametrize("sides,expected", [
    ((3, 4, 5), 6.0),
    ((1, 1, 1), math.sqrt(3) / 4),
    ((2, 2, 3), 0.75 * math.sqrt(7)),
])
def test_area(sides, expected):
    assert tc.area(Triangle(*sides)) == pytest.approx(expected, rel=1e-14)


def test_area_rejects_clearly_negative_radicand():
    with pytest.raises(DomainError):
        tc.area_abc(1.0, 1.0, 3.0)


def test_altitudes():
    assert tc.altitudes(Triangle(3, 4, 5)) == pytest.approx((4, 3, 2.4), rel=1e-14)
    assert tc.altitudes(Triangle(1, 1, 1)) == pytest.approx((math.sqrt(3) / 2,) * 3)
    assert tc.altitudes(Triangle(2, 2, 3)) == pytest.approx((1.9843135, 1.9843135, 1.3228757), abs=1e-7)


def test_medians():
    assert tc.medians(Triangle(3, 4, 5)) == pytest.approx((math.sqrt(73) / 2, math.sqrt(52) / 2, 2.5))
    assert tc.medians(Triangle(1, 1, 1)) == pytest.approx((math.sqrt(3) / 2,) * 3)
    assert tc.medians(Triangle(1, 1, 0.5)) == pytest.approx(
        (math.sqrt(1.5) / 2, math.sqrt(1.5) / 2, math.sqrt(3.75) / 2))


def test_medians_reject_corrupt_input():
    with pytest.raises(DomainError):
        tc.medians_abc(1.0, 1.0, 5.0)


def test_altitude_residual_examples():
    assert tc.altitude_residual(Triangle(1, 1, 1)) == pytest.approx(0, abs=1e-15)
    oracle = 36 - (math.sqrt(20) * 4 + math.sqrt(15) * 3 + math.sqrt(12) * 2.4)
    assert tc.altitude_residual(Triangle(3, 4, 5)) == pytest.approx(oracle, rel=1e-13)
    # The quoted reference value -1.8215 is rounded from 37.8215; the true sum is 37.82134.
    assert oracle == pytest.approx(-1.8215, abs=5e-4)
    for k in (1e-3, 7.0, 1e4):
        assert abs(tc.altitude_residual(Triangle(k, k, k))) <= 1e-12 * k * k


def test_median_residual_examples():
    import mpmath as mp
    mp.mp.dps = 40
    a, b, c = map(mp.mpf, (3, 4, 5))
    ma, mb, mc = (mp.sqrt(2 * y * y + 2 * z * z - x * x) / 2 for x, y, z in [(a, b, c), (b, a, c), (c, a, b)])
    oracle = (a - mp.sqrt(b * c)) * ma + (b - mp.sqrt(a * c)) * mb + (c - mp.sqrt(a * b)) * mc
    assert tc.median_residual(Triangle(3, 4, 5)) == pytest.approx(float(oracle), rel=1e-13)
    assert tc.median_residual(Triangle(1, 1, 1)) == pytest.approx(0, abs=1e-15)
    assert tc.median_residual(Triangle(1, 1, 0.5)) == pytest.approx(-0.1254, abs=1e-4)


def test_median_sum_residual_equals_regrouped_form():
    t = Triangle(3, 4, 5)
    assert tc.median_sum_residual(t) == pytest.approx(tc.median_residual(t), rel=1e-13)


def test_corollary_a():
    assert tc.corollary_a_residual(Triangle(1, 1, 1)) == pytest.approx(0, abs=1e-15)
    assert tc.corollary_a_residual(Triangle(3, 4, 5)) == pytest.approx(3 * math.sqrt(73) / 2 - 7.5)
    assert tc.corollary_a_residual(Triangle(1, 1, 0.5)) == pytest.approx(0.3559, abs=1e-4)


@pytest.mark.parametrize("sides,ratio,bound", [
    ((1, 1, 1), 1.0, 1.0),
    ((2, 1.5, 1), 0.4663, 0.9713),
    ((2, 1.1, 1), 0.2112, 0.9625),
])
def test_corollary_b(sides, ratio, bound):
    r, b, ok = tc.corollary_b_check(Triangle(*sides))
    assert r == pytest.approx(ratio, abs=1e-4)
    assert b == pytest.approx(bound, abs=1e-4)
    assert ok


def test_corollary_b_sorts_internally():
    assert tc.corollary_b_check(Triangle(1, 2, 1.5)) == tc.corollary_b_check(Triangle(2, 1.5, 1))


def test_derived_bundle():
    d = tc.derived(Triangle(3, 4, 5))
    assert (d.area, d.p) == (6.0, 6.0)
    assert (d.h_a, d.m_c) == pytest.approx((4.0, 2.5))


triangles = st.tuples(*(st.floats(0.01, 100) for _ in range(3))).filter(
    lambda s: bool(tc.is_triangle(*s, margin=1e-6 * max(s))))


@given(triangles)
def test_products_of_side_and_altitude_agree(s):
    t = Triangle(*s)
    two_s = 2 * tc.area(t)
    for side, h in zip(t.sides, tc.altitudes(t)):
        assert side * h == pytest.approx(two_s, rel=1e-12)


@given(triangles, st.floats(1e-3, 1e3))
def test_scale_covariance(s, lam):
    t = Triangle(*s)
    u = t.scaled(lam)
    for f in (tc.median_residual, tc.altitude_residual):
        r, ru = f(t), f(u)
        mag = lam * lam * t.scale ** 2
        assert abs(ru - lam * lam * r) <= 1e-10 * mag


def test_array_kernels_match_scalar():
    rng = np.random.default_rng(1)
    s = rng.uniform(0.5, 1.0, (3, 200))
    ok = tc.is_triangle(*s)
    a, b, c = s[:, ok]
    vec = tc.median_residual_abc(a, b, c)
    for i in range(len(a)):
        assert vec[i] == tc.median_residual(Triangle(a[i], b[i], c[i]))
