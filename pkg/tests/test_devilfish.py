import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from triangle_ineq import devilfish as df
from triangle_ineq import triangle_core as tc
from triangle_ineq.errors import DomainError

M1 = (0.92381274913245, 0.16601791015018)


def F_mp(x, y):
    x, y = mp.mpf(x), mp.mpf(y)
    return ((1 - mp.sqrt(x * y)) * mp.sqrt(2 * x * x + 2 * y * y - 1)
            + (x - mp.sqrt(y)) * mp.sqrt(2 + 2 * y * y - x * x)
            + (y - mp.sqrt(x)) * mp.sqrt(2 + 2 * x * x - y * y))


def random_M(n, seed=0, margin=1e-3):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.5, 1, 4 * n)
    y = rng.uniform(0, 1, 4 * n)
    ok = (y <= x - margin) & (x + y >= 1 + margin) & (x <= 1 - margin) & (y >= margin)
    return x[ok][:n], y[ok][:n]


def test_eval_F_reference_points():
    mp.mp.dps = 40
    assert df.eval_F(1, 1) == 0
    assert df.eval_F(1, 0) == 0
    assert df.eval_F(0.5, 0.5) == pytest.approx(float(F_mp(0.5, 0.5)), abs=1e-15)
    assert df.eval_F(0.5, 0.5) == pytest.approx(1.5 - 1.5 * math.sqrt(2), abs=1e-15)
    assert df.eval_F(*M1) == pytest.approx(float(F_mp(*M1)), abs=1e-14)


def test_eval_F_matches_mpmath_on_random_points():
    mp.mp.dps = 40
    x, y = random_M(200, seed=3)
    vals = df.eval_F(x, y)
    for xi, yi, v in zip(x, y, vals):
        assert v == pytest.approx(float(F_mp(xi, yi)), abs=1e-14)


def test_eval_F_outside_natural_domain():
    with pytest.raises(DomainError):
        df.eval_F(0.1, 0.1)


@given(st.floats(0.5, 1), st.floats(0.5, 1))
def test_symmetry(x, y):
    assert df.eval_F(x, y) == pytest.approx(df.eval_F(y, x), abs=1e-12)


def test_scaling_identity_two_paths():
    for sides in [(1, 1, 1), (3, 4, 5), (2, 1.9, 1.8)]:
        a, b, c = sorted(sides, reverse=True)
        lhs = tc.median_residual(tc.Triangle(a, b, c))
        rhs = 0.5 * a * a * df.eval_F(b / a, c / a)
        assert abs(lhs - rhs) <= 1e-10 * a * a


def test_grad_vanishes_at_M1():
    g = df.grad_F(*M1)
    assert max(map(abs, g)) < 1e-7


def test_grad_diagonal_symmetry():
    gx, gy = df.grad_F(0.8, 0.8)
    assert gx == pytest.approx(gy, abs=1e-14)


def test_grad_matches_finite_differences():
    h = 1e-6
    x, y = 0.8, 0.4
    fd = ((df.eval_F(x + h, y) - df.eval_F(x - h, y)) / (2 * h),
          (df.eval_F(x, y + h) - df.eval_F(x, y - h)) / (2 * h))
    assert df.grad_F(x, y) == pytest.approx(fd, abs=1e-6)


def test_grad_matches_mpmath_derivative():
    mp.mp.dps = 40
    x, y = random_M(50, seed=4)
    for xi, yi in zip(x, y):
        gx, gy = df.grad_F(xi, yi)
        assert gx == pytest.approx(float(mp.diff(lambda u: F_mp(u, yi), xi)), abs=1e-9)
        assert gy == pytest.approx(float(mp.diff(lambda v: F_mp(xi, v), yi)), abs=1e-9)


def test_grad_rejects_boundary():
    with pytest.raises(DomainError):
        df.grad_F(0.9, 0.0)


def test_hessian_at_corner():
    fxx, fxy, fyy = df.hessian_F(1, 1)
    assert fxx == pytest.approx(-3 * math.sqrt(3) / 2, abs=1e-4)
    assert fxx * fyy - fxy ** 2 == pytest.approx(81 / 16, abs=1e-3)


def test_hessian_symmetry():
    a = df.hessian_F(0.8, 0.6)
    b = df.hessian_F(0.6, 0.8)
    assert a[0] == pytest.approx(b[2], abs=1e-8)
    assert a[1] == pytest.approx(b[1], abs=1e-8)


def test_M1_is_a_saddle():
    mp.mp.dps = 40
    fxx, fxy, fyy = df.hessian_F(*M1)
    dxx = float(mp.diff(lambda u: F_mp(u, M1[1]), M1[0], 2))
    assert fxx == pytest.approx(dxx, abs=1e-4)
    assert fxx * fyy - fxy ** 2 < 0


def test_newton_from_M1_converges_immediately():
    r = df.newton_solve(M1)
    assert r.converged and r.iterations <= 3


def test_default_search_finds_two_clusters():
    points = df.find_critical_points()
    assert len(points) == 2
    m1 = min(points, key=lambda p: abs(p.point.x - M1[0]))
    assert abs(m1.point.x - M1[0]) < 1e-8 and abs(m1.point.y - M1[1]) < 1e-8
    assert m1.classification == "saddle"
    corner = [p for p in points if p.point == (1.0, 1.0)]
    assert corner and corner[0].value == 0 and corner[0].classification == "boundary-extremum"


def test_search_reports_nonconvergence_instead_of_raising():
    s = df.search_critical_points(seeds=[(0.7, 0.4)], tol=1e-300)
    assert s.failures and not s.points


def test_in_M():
    assert df.in_M(1, 1) and df.in_M(1, 0) and df.in_M(0.5, 0.5)
    assert not df.in_M(0.4, 0.5) and not df.in_M(0.6, 0.3)


def test_boundary_profiles():
    prof = df.boundary_profiles()
    assert set(prof) == {"x=1", "x=y", "x+y=1", "x=0"}
    assert prof["x=0"].vacuous and not prof["x=1"].vacuous
    assert prof["x=y"](1.0) == 0 and prof["x=1"](1.0) == 0
    for name in ("x=1", "x=y", "x+y=1"):
        s = np.linspace(prof[name].lo, prof[name].hi, 10 ** 6)
        v = prof[name](s)
        assert v.max() <= 1e-12
        s_best, v_best = prof[name].maximize()
        assert v_best == pytest.approx(0, abs=1e-12)
        assert (df.project_to_M(*prof[name].point(np.float64(s_best)))) in [(1.0, 1.0), (1.0, 0.0)]
