import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from triangle_ineq import reductions as red
from triangle_ineq import triangle_core as tc
from triangle_ineq.errors import DomainError, PreconditionError
from triangle_ineq.triangle_core import Triangle


def test_amgm_examples():
    assert red.amgm_gap([1, 1, 1]) == pytest.approx(0, abs=1e-15)
    assert red.amgm_gap([1, 2, 3]) == pytest.approx(2 - 6 ** (1 / 3), rel=1e-14)
    assert red.amgm_gap([0, 5]) == 2.5


def test_amgm_rejects_negative():
    with pytest.raises(DomainError):
        red.amgm_gap([1, -1])


@given(st.lists(st.floats(0, 1e6), min_size=2, max_size=8))
def test_amgm_nonnegative(v):
    assert red.amgm_gap(v) >= -1e-12 * max(1.0, max(v))


def test_lemma2_examples():
    assert red.lemma2_gap(1, 1, 1) == 0
    assert red.lemma2_gap(1, 2, 3) == 18
    assert red.lemma2_gap(-1, 1, 1) == 4
    with pytest.raises(PreconditionError):
        red.lemma2_gap(-1, -1, 1)


@given(st.floats(1e-6, 1e3))
def test_lemma2_vanishes_on_diagonal(x):
    assert abs(red.lemma2_gap(x, x, x)) <= 1e-12 * max(1.0, x) ** 3


@pytest.mark.parametrize("sides,triple", [
    ((1, 1, 1), (1, 1, 1)),
    ((3, 4, 5), (math.sqrt(20), math.sqrt(15), math.sqrt(12))),
    ((2, 2, 3), (math.sqrt(6), math.sqrt(6), 2)),
])
def test_reduce_inequality1_two_paths(sides, triple):
    t = Triangle(*sides)
    s = red.reduce_inequality1(t)
    assert (s.x, s.y, s.z) == pytest.approx(triple, rel=1e-15)
    direct = tc.altitude_residual(t)
    assert red.altitude_residual_via_lemma2(t) == pytest.approx(direct, rel=1e-10, abs=1e-14)


def test_lemma2_gap_value_for_345():
    s = red.reduce_inequality1(Triangle(3, 4, 5))
    assert red.lemma2_gap(s.x, s.y, s.z) == pytest.approx(9.107, abs=1e-3)


def test_isosceles_margin_examples():
    assert red.isosceles_margin(1, 0.5) == pytest.approx((0.35872, 0.48412), abs=1e-5)
    assert red.isosceles_margin(2, 1) == pytest.approx(((2 - math.sqrt(2)) * math.sqrt(6), 0.5 * math.sqrt(15)))
    lhs, rhs = red.isosceles_margin(1, 1 - 1e-6)
    assert lhs <= rhs and rhs < 1e-5
    with pytest.raises(PreconditionError):
        red.isosceles_margin(1, 1)


@given(st.floats(0.01, 0.999))
def test_isosceles_margin_sign_matches_median_residual(t):
    lhs, rhs = red.isosceles_margin(1.0, t)
    m = tc.median_residual(Triangle(1, 1, t))
    # Both encode the same inequality for the sides (1, 1, t).
    assert m == pytest.approx(lhs - rhs, abs=1e-13)
    assert lhs - rhs < 0 and m < 0


def test_quintic():
    assert red.quintic_eval(1) == 0
    assert red.quintic_eval(0) == -64
    assert red.quintic_eval(0.5) == -55.96875
    assert red.quartic_eval(0.5) == 111.9375


def test_quintic_factorization_exact():
    assert red.convolve(red.LINEAR_FACTOR, red.QUARTIC_FACTOR) == red.QUINTIC
    assert red.convolve(red.LINEAR_FACTOR, red.QUARTIC_FACTOR)[1] == 15 - 1
    assert red.quintic_factor_check() is True


@given(st.fractions(min_value=Fraction(-5), max_value=Fraction(5)))
def test_quintic_equals_product_exactly(t):
    lin = t - 1
    quart = sum(c * t ** (4 - i) for i, c in enumerate(red.QUARTIC_FACTOR))
    quint = sum(c * t ** (5 - i) for i, c in enumerate(red.QUINTIC))
    assert lin * quart == quint
