"""Triangle primitives and the unreduced residual forms of the inequalities.

Every quantity is available in two flavours: a function taking a
:class:`Triangle`, and an ``*_abc`` function taking raw side lengths as floats
or numpy arrays.  The Triangle versions are thin wrappers over the array
versions, so a batch evaluation in the fuzzer and a one-off evaluation of the
same triangle perform the same floating-point operations in the same order.

Sign conventions:

* ``altitude_residual``, ``median_residual`` and ``median_sum_residual`` are
  ``<= 0`` whenever the inequality holds.
* ``corollary_a_residual`` is ``>= 0`` whenever the corollary holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidTriangle

HERON_CLAMP = 1e-12
COROLLARY_B_TOL = 1e-12


def is_triangle(a, b, c, margin: float = 0.0):
    """Elementwise strict triangle test ``x + y > z + margin`` for all three pairings."""
    a, b, c = np.asarray(a, float), np.asarray(b, float), np.asarray(c, float)
    return (
        (a > 0) & (b > 0) & (c > 0)
        & (a + b > c + margin) & (b + c > a + margin) & (a + c > b + margin)
    )


def validate_sides(a: float, b: float, c: float, margin: float = 0.0) -> None:
    if margin < 0:
        raise ValueError(f"margin must be nonnegative, got {margin}")
    if not all(np.isfinite([a, b, c])):
        raise InvalidTriangle(f"non-finite side in ({a}, {b}, {c})")
    if not bool(is_triangle(a, b, c, margin)):
        raise InvalidTriangle(
            f"({a}, {b}, {c}) is not a triangle with strictness margin {margin}"
        )


@dataclass(frozen=True)
class Triangle:
    """Three side lengths of a nondegenerate triangle.

    Construction validates with margin 0; use :meth:`with_margin` to demand
    numerical headroom.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, float(getattr(self, name)))
        validate_sides(self.a, self.b, self.c)

    @classmethod
    def with_margin(cls, a: float, b: float, c: float, margin: float) -> "Triangle":
        validate_sides(float(a), float(b), float(c), margin)
        return cls(a, b, c)

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def scale(self) -> float:
        return max(self.a, self.b, self.c)

    def sorted_desc(self) -> "Triangle":
        return Triangle(*sorted(self.sides, reverse=True))

    def scaled(self, factor: float) -> "Triangle":
        return Triangle(factor * self.a, factor * self.b, factor * self.c)


@dataclass(frozen=True)
class TriangleDerived:
    area: float
    h_a: float
    h_b: float
    h_c: float
    m_a: float
    m_b: float
    m_c: float
    p: float


# -- array kernels ----------------------------------------------------------


def semiperimeter_abc(a, b, c):
    return (a + b + c) / 2


def area_abc(a, b, c):
    """Heron's formula with a small clamp for thin triangles."""
    p = semiperimeter_abc(a, b, c)
    radicand = p * (p - a) * (p - b) * (p - c)
    floor = -HERON_CLAMP * p**4
    if np.any(radicand < floor):
        raise DomainError("Heron radicand negative: sides do not form a triangle")
    return np.sqrt(np.maximum(radicand, 0.0))


def altitudes_abc(a, b, c):
    twice_area = 2 * area_abc(a, b, c)
    return twice_area / a, twice_area / b, twice_area / c


def _median(x, y, z):
    radicand = 2 * y * y + 2 * z * z - x * x
    if np.any(radicand <= 0):
        raise DomainError("median radicand nonpositive: corrupted side lengths")
    return np.sqrt(radicand) / 2


def medians_abc(a, b, c):
    return _median(a, b, c), _median(b, c, a), _median(c, a, b)


def altitude_residual_abc(a, b, c):
    h_a, h_b, h_c = altitudes_abc(a, b, c)
    lhs = a * h_a + b * h_b + c * h_c
    rhs = np.sqrt(b * c) * h_a + np.sqrt(a * c) * h_b + np.sqrt(a * b) * h_c
    return lhs - rhs


def median_residual_abc(a, b, c):
    m_a, m_b, m_c = medians_abc(a, b, c)
    return (
        (a - np.sqrt(b * c)) * m_a
        + (b - np.sqrt(a * c)) * m_b
        + (c - np.sqrt(a * b)) * m_c
    )


def median_sum_residual_abc(a, b, c):
    """Median inequality in its original form: left sum minus right sum, before regrouping."""
    m_a, m_b, m_c = medians_abc(a, b, c)
    lhs = a * m_a + b * m_b + c * m_c
    rhs = np.sqrt(b * c) * m_a + np.sqrt(a * c) * m_b + np.sqrt(a * b) * m_c
    return lhs - rhs


def corollary_a_residual_abc(a, b, c):
    m_a, m_b, m_c = medians_abc(a, b, c)
    two_p = a + b + c
    return (two_p - 3 * a) * m_a + (two_p - 3 * b) * m_b + (two_p - 3 * c) * m_c


def sort_desc_abc(a, b, c):
    s = np.sort(np.stack(np.broadcast_arrays(a, b, c)), axis=0)
    return s[2], s[1], s[0]


def corollary_b_abc(a, b, c):
    """Return ``(m_a / m_c, middle bound)`` after sorting sides descending."""
    a, b, c = sort_desc_abc(a, b, c)
    m_a, _, m_c = medians_abc(a, b, c)
    ratio = m_a / m_c
    bound = (np.sqrt(a * b) + np.sqrt(a * c) + np.sqrt(b * c)) / (a + b + c)
    return ratio, bound


# -- Triangle API -------------------------------------------------------------


def area(t: Triangle) -> float:
    return float(area_abc(t.a, t.b, t.c))


def altitudes(t: Triangle) -> tuple[float, float, float]:
    return tuple(float(h) for h in altitudes_abc(t.a, t.b, t.c))


def medians(t: Triangle) -> tuple[float, float, float]:
    return tuple(float(m) for m in medians_abc(t.a, t.b, t.c))


def derived(t: Triangle) -> TriangleDerived:
    h = altitudes(t)
    m = medians(t)
    return TriangleDerived(area(t), *h, *m, float(semiperimeter_abc(t.a, t.b, t.c)))


def altitude_residual(t: Triangle) -> float:
    """Altitude inequality residual; ``<= 0`` when it holds."""
    return float(altitude_residual_abc(t.a, t.b, t.c))


def median_residual(t: Triangle) -> float:
    """Regrouped median inequality, ``sum (a - sqrt(bc)) m_a``; ``<= 0`` when it holds."""
    return float(median_residual_abc(t.a, t.b, t.c))


def median_sum_residual(t: Triangle) -> float:
    return float(median_sum_residual_abc(t.a, t.b, t.c))


def corollary_a_residual(t: Triangle) -> float:
    """``sum (2p - 3a) m_a``; ``>= 0`` when the weighted median bound holds."""
    return float(corollary_a_residual_abc(t.a, t.b, t.c))


def corollary_b_check(t: Triangle, tol: float = COROLLARY_B_TOL) -> tuple[float, float, bool]:
    """Check ``m_a/m_c <= (sqrt(ab)+sqrt(ac)+sqrt(bc))/(a+b+c) <= 1`` for sorted sides.

    Returns the ratio, the middle bound and whether the chain holds up to
    ``tol``.  The chain is tested empirically; a ``False`` flag is a finding,
    not an error.
    """
    ratio, bound = corollary_b_abc(t.a, t.b, t.c)
    ratio, bound = float(ratio), float(bound)
    ok = bound - ratio >= -tol and 1.0 - bound >= -tol
    return ratio, bound, ok
