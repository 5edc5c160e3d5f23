"""Closed real intervals with outward one-ulp widening.

Endpoints may be Python floats or numpy arrays of equal shape; every
operation is elementwise, which lets branch-and-bound evaluate a whole level
of boxes at once.  After each primitive both endpoints are pushed one unit in
the last place outward with ``nextafter``.  Since the underlying IEEE
operations (``+ - * /`` and ``sqrt``) are correctly rounded, the widened
result encloses the exact real result.

Infinite endpoints are allowed.  In products the indeterminate ``0 * inf`` is
taken as 0, the usual convention for closed intervals of reals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SQRT_CLAMP = 1e-12


def down(v):
    return np.nextafter(v, -np.inf)


def up(v):
    return np.nextafter(v, np.inf)


def _arr(v):
    return np.asarray(v, dtype=float)


@dataclass(frozen=True)
class Interval:
    lo: np.ndarray | float
    hi: np.ndarray | float

    @classmethod
    def point(cls, v) -> "Interval":
        v = _arr(v)
        return cls(v, v)

    @staticmethod
    def coerce(v) -> "Interval":
        return v if isinstance(v, Interval) else Interval.point(v)

    @property
    def width(self):
        return _arr(self.hi) - _arr(self.lo)

    @property
    def mid(self):
        lo, hi = _arr(self.lo), _arr(self.hi)
        return lo + (hi - lo) / 2

    def contains(self, v, slack: float = 0.0):
        return (_arr(self.lo) - slack <= v) & (v <= _arr(self.hi) + slack)

    def __neg__(self) -> "Interval":
        return Interval(-_arr(self.hi), -_arr(self.lo))

    def __add__(self, other) -> "Interval":
        o = Interval.coerce(other)
        return Interval(down(_arr(self.lo) + o.lo), up(_arr(self.hi) + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = Interval.coerce(other)
        return Interval(down(_arr(self.lo) - o.hi), up(_arr(self.hi) - o.lo))

    def __rsub__(self, other) -> "Interval":
        return Interval.coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = Interval.coerce(other)
        a, b, c, d = _arr(self.lo), _arr(self.hi), _arr(o.lo), _arr(o.hi)
        with np.errstate(invalid="ignore"):
            p = np.stack(np.broadcast_arrays(a * c, a * d, b * c, b * d))
        p = np.where(np.isnan(p), 0.0, p)
        return Interval(down(p.min(axis=0)), up(p.max(axis=0)))

    __rmul__ = __mul__

    def recip_nonneg(self) -> "Interval":
        """``1 / self`` for a quantity known to be nonnegative; ``1/0`` becomes ``+inf``.

        Outward widening can push a true 0 a few ulps below zero; anything
        down to ``-1e-12`` is read as 0.
        """
        lo, hi = _arr(self.lo), _arr(self.hi)
        if np.any(lo < -SQRT_CLAMP):
            raise DomainError("reciprocal of an interval reaching below zero")
        lo, hi = np.maximum(lo, 0.0), np.maximum(hi, 0.0)
        with np.errstate(divide="ignore"):
            return Interval(down(1.0 / hi), up(1.0 / lo))

    def __truediv__(self, other) -> "Interval":
        o = Interval.coerce(other)
        c, d = _arr(o.lo), _arr(o.hi)
        if np.any((c <= 0) & (d >= 0)):
            raise DomainError("division by an interval containing zero")
        a, b = _arr(self.lo), _arr(self.hi)
        q = np.stack(np.broadcast_arrays(a / c, a / d, b / c, b / d))
        return Interval(down(q.min(axis=0)), up(q.max(axis=0)))

    def sqr(self) -> "Interval":
        lo, hi = _arr(self.lo), _arr(self.hi)
        l2, h2 = lo * lo, hi * hi
        straddles = (lo < 0) & (hi > 0)
        new_lo = np.where(straddles, 0.0, np.minimum(l2, h2))
        return Interval(np.where(straddles, 0.0, down(new_lo)), up(np.maximum(l2, h2)))

    def sqrt(self) -> "Interval":
        """Square root over the nonnegative part of the interval.

        Raises when the whole interval lies below ``-1e-12``; otherwise the
        lower endpoint is clamped to 0, so the result encloses the square root
        of every nonnegative member.
        """
        lo, hi = _arr(self.lo), _arr(self.hi)
        if np.any(hi < -SQRT_CLAMP):
            raise DomainError("square root of an interval below zero")
        lo_c = np.maximum(lo, 0.0)
        hi_c = np.maximum(hi, 0.0)
        return Interval(np.maximum(down(np.sqrt(lo_c)), 0.0), up(np.sqrt(hi_c)))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def __getitem__(self, idx) -> "Interval":
        return Interval(_arr(self.lo)[idx], _arr(self.hi)[idx])

    def as_floats(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)


@dataclass(frozen=True)
class Box:
    x: Interval
    y: Interval

    @classmethod
    def from_bounds(cls, x_lo, x_hi, y_lo, y_hi) -> "Box":
        return cls(Interval(_arr(x_lo), _arr(x_hi)), Interval(_arr(y_lo), _arr(y_hi)))

    @property
    def width(self):
        return np.maximum(self.x.width, self.y.width)

    def bisect(self) -> tuple["Box", "Box"]:
        """Split the wider side at its midpoint; ties split x."""
        if float(self.x.width) >= float(self.y.width):
            m = float(self.x.mid)
            return (
                Box(Interval(self.x.lo, m), self.y),
                Box(Interval(m, self.x.hi), self.y),
            )
        m = float(self.y.mid)
        return (
            Box(self.x, Interval(self.y.lo, m)),
            Box(self.x, Interval(m, self.y.hi)),
        )
