"""The normalized median objective F on the side-ratio domain.

With sides sorted ``a >= b >= c`` and ``x = b/a``, ``y = c/a``::

    F(x, y) = (1 - sqrt(xy)) sqrt(2x^2 + 2y^2 - 1)
            + (x - sqrt(y))  sqrt(2 + 2y^2 - x^2)
            + (y - sqrt(x))  sqrt(2 + 2x^2 - y^2)

and ``median_residual(a, b, c) = a^2 F(x, y) / 2``.  The admissible region is
``M = {0 <= y <= x <= 1, x + y >= 1}``, the triangle with corners
``(1/2, 1/2)``, ``(1, 0)`` and ``(1, 1)``.

F is symmetric, so the gradient is computed from a single partial derivative
evaluated at swapped arguments.  The gradient was derived by hand and is
checked against finite differences in the test suite; the Hessian is a
central difference of that gradient.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError

log = logging.getLogger(__name__)

RADICAND_CLAMP = 1e-12
DENOMINATOR_FLOOR = 1e-12
HESSIAN_STEP = 1e-5
DEDUP_RADIUS = 1e-6
CLASSIFY_EPS = 1e-9
EDGE_MARGIN = 1e-3

M1_REFERENCE_POINT = (0.9238127491, 0.1660179102)
M1_VALUE_REFERENCE = -0.4280657968
M2 = (1.0, 1.0)


class DomainPoint(NamedTuple):
    x: float
    y: float

    def in_M(self, tol: float = 0.0) -> bool:
        return in_M(self.x, self.y, tol)


def in_M(x, y, tol: float = 0.0):
    return (y >= -tol) & (y <= x + tol) & (x <= 1 + tol) & (x + y >= 1 - tol)


def distance_to_boundary(x: float, y: float) -> float:
    """Euclidean distance from a point of M to the nearest edge of M."""
    return min(1 - x, (x - y) / math.sqrt(2), (x + y - 1) / math.sqrt(2))


def project_to_M(x: float, y: float) -> DomainPoint:
    if y > x:
        x, y = y, x
    x = min(x, 1.0)
    y = min(max(y, 0.0), x)
    if x + y < 1:
        shift = (1 - x - y) / 2
        x, y = min(x + shift, 1.0), y + shift
        y = min(y, x)
    return DomainPoint(x, y)


def _checked_sqrt(radicand):
    r = np.asarray(radicand, dtype=float)
    if np.any(r < -RADICAND_CLAMP) or np.any(np.isnan(r)):
        raise DomainError("point outside the natural domain of F")
    return np.sqrt(np.maximum(r, 0.0))


def eval_F(x, y):
    """Evaluate F on floats or arrays.  Radicands within 1e-12 below zero are clamped."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r1 = _checked_sqrt(2 * x * x + 2 * y * y - 1)
    r2 = _checked_sqrt(2 + 2 * y * y - x * x)
    r3 = _checked_sqrt(2 + 2 * x * x - y * y)
    sx, sy = _checked_sqrt(x), _checked_sqrt(y)
    value = (1 - _checked_sqrt(x * y)) * r1 + (x - sy) * r2 + (y - sx) * r3
    return float(value) if value.ndim == 0 else value


def _partial_x(x, y):
    r1 = np.sqrt(2 * x * x + 2 * y * y - 1)
    r2 = np.sqrt(2 + 2 * y * y - x * x)
    r3 = np.sqrt(2 + 2 * x * x - y * y)
    sx, sy = np.sqrt(x), np.sqrt(y)
    return (
        -sy / (2 * sx) * r1
        + 2 * x * (1 - np.sqrt(x * y)) / r1
        + r2
        - x * (x - sy) / r2
        - r3 / (2 * sx)
        + 2 * x * (y - sx) / r3
    )


def _check_gradient_domain(x, y) -> None:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for name, v in (
        ("x", x),
        ("y", y),
        ("2x^2+2y^2-1", 2 * x * x + 2 * y * y - 1),
        ("2+2y^2-x^2", 2 + 2 * y * y - x * x),
        ("2+2x^2-y^2", 2 + 2 * x * x - y * y),
    ):
        if np.any(~(v > DENOMINATOR_FLOOR)):
            raise DomainError(f"gradient undefined: {name} <= {DENOMINATOR_FLOOR}")


def grad_F(x, y):
    """Analytic ``(dF/dx, dF/dy)``; requires x, y and all radicands above 1e-12."""
    _check_gradient_domain(x, y)
    gx, gy = _partial_x(x, y), _partial_x(y, x)
    if np.ndim(gx) == 0:
        return float(gx), float(gy)
    return gx, gy


def hessian_F(x: float, y: float, h: float = HESSIAN_STEP) -> tuple[float, float, float]:
    """``(F_xx, F_xy, F_yy)`` by central differences of :func:`grad_F` with step ``h``."""
    _check_gradient_domain([x - h, x + h], [y - h, y + h])
    f_xx = (_partial_x(x + h, y) - _partial_x(x - h, y)) / (2 * h)
    f_yy = (_partial_x(y + h, x) - _partial_x(y - h, x)) / (2 * h)
    f_xy = (_partial_x(x, y + h) - _partial_x(x, y - h)) / (2 * h)
    return float(f_xx), float(f_xy), float(f_yy)


# -- critical points ----------------------------------------------------------


@dataclass(frozen=True)
class CriticalPointReport:
    point: DomainPoint
    value: float
    grad_norm: float
    f_xx: float
    f_xy: float
    f_yy: float
    classification: str

    @property
    def determinant(self) -> float:
        return self.f_xx * self.f_yy - self.f_xy**2

    def to_dict(self) -> dict:
        return {
            "x": self.point.x,
            "y": self.point.y,
            "F": self.value,
            "grad_max_norm": self.grad_norm,
            "F_xx": self.f_xx,
            "F_xy": self.f_xy,
            "F_yy": self.f_yy,
            "det": self.determinant,
            "classification": self.classification,
        }


@dataclass(frozen=True)
class NewtonResult:
    seed: DomainPoint
    point: DomainPoint
    iterations: int
    converged: bool
    grad_norm: float
    reason: str = ""


@dataclass
class CriticalPointSearch:
    points: list[CriticalPointReport]
    failures: list[NewtonResult] = field(default_factory=list)
    seeds: int = 0


def _grad_or_none(x: float, y: float):
    try:
        gx, gy = grad_F(x, y)
    except DomainError:
        return None
    if not (math.isfinite(gx) and math.isfinite(gy)):
        return None
    return gx, gy


def newton_solve(
    seed: tuple[float, float],
    tol: float = 1e-10,
    max_iter: int = 200,
    max_halvings: int = 30,
) -> NewtonResult:
    """Damped Newton iteration on ``grad F = 0`` over F's natural domain.

    Each step is halved until the gradient max-norm decreases; a step whose
    every halving leaves the natural domain keeps the last valid iterate and
    ends the run.
    """
    seed = DomainPoint(float(seed[0]), float(seed[1]))
    x, y = seed
    g = _grad_or_none(x, y)
    if g is None:
        return NewtonResult(seed, seed, 0, False, math.inf, "seed outside gradient domain")
    norm = max(abs(g[0]), abs(g[1]))
    for it in range(max_iter + 1):
        if norm < tol:
            return NewtonResult(seed, DomainPoint(x, y), it, True, norm)
        if it == max_iter:
            break
        try:
            f_xx, f_xy, f_yy = hessian_F(x, y)
        except DomainError:
            return NewtonResult(seed, DomainPoint(x, y), it, False, norm, "Hessian stencil left domain")
        det = f_xx * f_yy - f_xy * f_xy
        if det == 0 or not math.isfinite(det):
            return NewtonResult(seed, DomainPoint(x, y), it, False, norm, "singular Hessian")
        dx = (f_yy * g[0] - f_xy * g[1]) / det
        dy = (f_xx * g[1] - f_xy * g[0]) / det
        t = 1.0
        for _ in range(max_halvings + 1):
            xn, yn = x - t * dx, y - t * dy
            gn = _grad_or_none(xn, yn)
            if gn is not None and max(abs(gn[0]), abs(gn[1])) < norm:
                break
            t /= 2
        else:
            return NewtonResult(seed, DomainPoint(x, y), it, False, norm, "damping exhausted")
        x, y, g = xn, yn, gn
        norm = max(abs(g[0]), abs(g[1]))
    return NewtonResult(seed, DomainPoint(x, y), max_iter, False, norm, "iteration limit")


def default_seeds(grid: int = 32, margin: float = EDGE_MARGIN) -> list[DomainPoint]:
    """Uniform grid over M's bounding box, keeping points at least ``margin`` inside M."""
    seeds = []
    for y in np.linspace(0.0, 1.0, grid):
        for x in np.linspace(0.5, 1.0, grid):
            x, y = float(x), float(y)
            if in_M(x, y) and y >= margin and distance_to_boundary(x, y) >= margin:
                seeds.append(DomainPoint(x, y))
    return seeds


def classify(f_xx: float, f_xy: float, f_yy: float, on_boundary: bool) -> str:
    if on_boundary:
        return "boundary-extremum"
    det = f_xx * f_yy - f_xy * f_xy
    if det > CLASSIFY_EPS and f_xx > CLASSIFY_EPS:
        return "local-min"
    if det > CLASSIFY_EPS and f_xx < -CLASSIFY_EPS:
        return "local-max"
    if det < -CLASSIFY_EPS:
        return "saddle"
    return "unclassified"


def report_at(x: float, y: float, on_boundary: bool) -> CriticalPointReport:
    gx, gy = _partial_x(x, y), _partial_x(y, x)
    f_xx, f_xy, f_yy = hessian_F(x, y)
    return CriticalPointReport(
        point=DomainPoint(x, y),
        value=eval_F(x, y),
        grad_norm=float(max(abs(gx), abs(gy))),
        f_xx=f_xx,
        f_xy=f_xy,
        f_yy=f_yy,
        classification=classify(f_xx, f_xy, f_yy, on_boundary),
    )


def search_critical_points(
    grid: int = 32,
    tol: float = 1e-10,
    seeds: list[tuple[float, float]] | None = None,
) -> CriticalPointSearch:
    """Run Newton from every seed and merge the converged points.

    Roots found with ``y > x`` are folded into M through the symmetry of F.
    Roots that land on the edge of M (in practice the corner (1, 1), which
    Newton may approach from outside) are projected onto M and reported as
    boundary extrema.  Seeds that do not converge are returned as failures.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    seed_list = [DomainPoint(*s) for s in seeds] if seeds is not None else default_seeds(grid)
    roots: list[tuple[float, float, float]] = []
    failures: list[NewtonResult] = []
    for seed in seed_list:
        res = newton_solve(seed, tol=tol)
        if not res.converged:
            failures.append(res)
            continue
        x, y = res.point
        if y > x:
            x, y = y, x
        if not in_M(x, y, DEDUP_RADIUS):
            failures.append(NewtonResult(seed, res.point, res.iterations, False, res.grad_norm, "root outside M"))
            continue
        roots.append((x, y, res.grad_norm))

    roots.sort()
    clusters: list[list[tuple[float, float, float]]] = []
    for r in roots:
        for cl in clusters:
            head = cl[0]
            if max(abs(r[0] - head[0]), abs(r[1] - head[1])) <= DEDUP_RADIUS:
                cl.append(r)
                break
        else:
            clusters.append([r])

    reports = []
    for cl in clusters:
        x, y, _ = min(cl, key=lambda r: (r[2], r[0], r[1]))
        on_boundary = not in_M(x, y) or distance_to_boundary(x, y) <= DEDUP_RADIUS
        if on_boundary:
            x, y = project_to_M(x, y)
        reports.append(report_at(x, y, on_boundary))
    if failures:
        log.info("%d of %d seeds did not converge", len(failures), len(seed_list))
    return CriticalPointSearch(reports, failures, len(seed_list))


def find_critical_points(grid: int = 32, tol: float = 1e-10) -> list[CriticalPointReport]:
    return search_critical_points(grid, tol).points


# -- boundary profiles --------------------------------------------------------


@dataclass(frozen=True)
class EdgeProfile:
    """Restriction of F to a segment, parametrized by ``s`` in ``[lo, hi]``.

    ``vacuous`` marks a profile whose segment does not meet M.
    """

    name: str
    lo: float
    hi: float
    point: Callable[[float], tuple[float, float]]
    vacuous: bool = False

    def __call__(self, s):
        x, y = self.point(np.asarray(s, dtype=float))
        return eval_F(x, y)

    def maximize(self, samples: int = 100_000) -> tuple[float, float]:
        """Dense sampling followed by bounded refinement around the best sample."""
        s = np.linspace(self.lo, self.hi, samples)
        values = self(s)
        i = int(np.argmax(values))
        best_s, best_v = float(s[i]), float(values[i])
        left, right = float(s[max(i - 1, 0)]), float(s[min(i + 1, samples - 1)])
        if right > left:
            res = minimize_scalar(
                lambda u: -float(self(u)), bounds=(left, right), method="bounded",
                options={"xatol": 1e-12},
            )
            if -res.fun > best_v:
                best_s, best_v = float(res.x), float(-res.fun)
        return best_s, best_v


def boundary_profiles() -> dict[str, EdgeProfile]:
    """The three edges of M, plus the vacuous ``{x = 0}`` segment kept for completeness."""
    return {
        "x=1": EdgeProfile("x=1", 0.0, 1.0, lambda s: (np.ones_like(s), s)),
        "x=y": EdgeProfile("x=y", 0.5, 1.0, lambda s: (s, s)),
        "x+y=1": EdgeProfile("x+y=1", 0.5, 1.0, lambda s: (s, 1 - s)),
        # Disjoint from M (x >= 1/2 there); evaluated on F's natural domain only.
        "x=0": EdgeProfile("x=0", math.sqrt(0.5), 1.0, lambda s: (np.zeros_like(s), s), vacuous=True),
    }
