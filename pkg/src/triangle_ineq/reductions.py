"""Algebraic reductions behind the altitude inequality and the isosceles case of the median inequality.

The quintic identity is checked in exact integer arithmetic; everything else
is floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .triangle_core import Triangle, area_abc

QUINTIC = (1, 14, 73, -40, 16, -64)
LINEAR_FACTOR = (1, -1)
QUARTIC_FACTOR = (1, 15, 88, 48, 64)


@dataclass(frozen=True)
class SubstitutionTriple:
    """``(sqrt(bc), sqrt(ac), sqrt(ab))`` for a triangle with sides a, b, c."""

    x: float
    y: float
    z: float


def amgm_gap(values: Sequence[float]) -> float:
    """Arithmetic mean minus geometric mean of nonnegative values."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise PreconditionError("amgm_gap needs a nonempty 1-D sequence")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise DomainError("amgm_gap is defined for finite nonnegative values only")
    am = float(np.mean(v))
    if np.all(v > 0):
        gm = math.exp(float(np.mean(np.log(v))))
    else:
        gm = float(np.prod(v)) ** (1.0 / v.size)
    return am - gm


def lemma2_gap_abc(a, b, c):
    return a**3 + b**3 + c**3 - 3 * a * b * c


def lemma2_gap(a: float, b: float, c: float) -> float:
    """``a^3 + b^3 + c^3 - 3abc``, nonnegative whenever ``a + b + c > 0``."""
    if not a + b + c > 0:
        raise PreconditionError(f"lemma2_gap requires a + b + c > 0, got {a + b + c}")
    return float(lemma2_gap_abc(a, b, c))


def reduce_inequality1(t: Triangle) -> SubstitutionTriple:
    return SubstitutionTriple(
        math.sqrt(t.b * t.c), math.sqrt(t.a * t.c), math.sqrt(t.a * t.b)
    )


def altitude_residual_via_lemma2_abc(a, b, c):
    """Second route to the altitude residual: ``-2S * gap(x, y, z) / (abc)``."""
    x, y, z = np.sqrt(b * c), np.sqrt(a * c), np.sqrt(a * b)
    return -2 * area_abc(a, b, c) * lemma2_gap_abc(x, y, z) / (a * b * c)


def altitude_residual_via_lemma2(t: Triangle) -> float:
    return float(altitude_residual_via_lemma2_abc(t.a, t.b, t.c))


def altitude_residual_magnitude_abc(a, b, c):
    """Sum of absolute terms in the altitude residual; the scale its rounding error lives on."""
    s2 = 2 * area_abc(a, b, c)
    return s2 * (3 + np.sqrt(b * c) / a + np.sqrt(a * c) / b + np.sqrt(a * b) / c)


def isosceles_margin_ac(a, c):
    lhs = (a - np.sqrt(a * c)) * np.sqrt(a * a + 2 * c * c)
    rhs = (a - c) / 2 * np.sqrt(4 * a * a - c * c)
    return lhs, rhs


def isosceles_margin(a: float, c: float) -> tuple[float, float]:
    """Both sides of the isosceles median inequality for the isosceles triangle ``(a, a, c)``, ``a > c > 0``."""
    if not a > c > 0:
        raise PreconditionError(f"isosceles_margin requires a > c > 0, got a={a}, c={c}")
    lhs, rhs = isosceles_margin_ac(a, c)
    return float(lhs), float(rhs)


def presquare_quantity_ac(a, c):
    """``(c^3 + 9ac^2 - 4a^2c) / (4a^2 - c^2)``: the left side just before squaring.

    When it is negative, squaring the inequality is one-directional.
    """
    return (c**3 + 9 * a * c * c - 4 * a * a * c) / (4 * a * a - c * c)


def quintic_eval(t):
    """Horner evaluation of ``t^5 + 14t^4 + 73t^3 - 40t^2 + 16t - 64``."""
    acc = 0
    for coeff in QUINTIC:
        acc = acc * t + coeff
    return acc


def quartic_eval(t):
    acc = 0
    for coeff in QUARTIC_FACTOR:
        acc = acc * t + coeff
    return acc


def convolve(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Exact product of two integer coefficient lists, highest degree first."""
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return tuple(out)


def quintic_factor_check(samples: int = 1000) -> bool:
    """Exact check of ``(t - 1)(t^4 + 15t^3 + 88t^2 + 48t + 64)`` against the quintic.

    Also confirms the quartic factor is positive at ``samples`` rational points
    in ``(0, 1]`` (it has positive coefficients, so this is a sanity pass).
    """
    if convolve(LINEAR_FACTOR, QUARTIC_FACTOR) != QUINTIC:
        return False
    return all(quartic_eval(Fraction(k, samples)) > 0 for k in range(1, samples + 1))
