"""Interval branch-and-bound certificate that F is nonpositive on M.

The supremum of F over M is exactly 0 and is attained at two corners: at
``(1, 1)`` (the equilateral triangle) and at ``(1, 0)`` (the degenerate
isosceles limit ``a = b``, ``c -> 0``, where the three terms are 1, 1 and -2).
No sound enclosure can prove ``F <= 0`` on a box touching either corner, so
the certificate states: ``F <= tau`` on all of M, and ``F <= 0`` outside the
listed residual boxes.  The residual boxes all sit at those two corners, where
``F = 0`` holds exactly.

Enclosures
----------
``interval_F`` is the plain natural interval extension.  Its overestimate is
linear in the box width, which near the corners leaves bounds around
``1e-4`` on boxes of width ``1e-4``, too coarse for ``tau = 1e-6``.
Branch-and-bound therefore uses :func:`enclose_F`, which intersects the
natural extension with two refinements built from an interval gradient:

* monotonicity: if a partial derivative has constant sign on the box, the
  maximum lies on one face and that coordinate collapses to an endpoint;
* mean-value form on the reduced box, ``F(c) + G . (X - c)``, whose
  overestimate is quadratic in the width where the gradient vanishes.

Before enclosing, each box is contracted to the bounding box of its
intersection with M.  Every step is sound on ``box ∩ M``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError
from .intervals import Box, Interval, down, up

CERTIFICATE_VERSION = 1
EQUALITY_POINTS = ((1.0, 1.0), (1.0, 0.0))
M_BOUNDS = (0.5, 1.0, 0.0, 1.0)
M_DESCRIPTION = "0 <= y <= x <= 1, x + y >= 1"


# -- enclosures ---------------------------------------------------------------


def _radicands(X: Interval, Y: Interval):
    x2, y2 = X.sqr(), Y.sqr()
    return 2 * x2 + 2 * y2 - 1, 2 + 2 * y2 - x2, 2 + 2 * x2 - y2


def natural_F(X: Interval, Y: Interval) -> Interval:
    q1, q2, q3 = _radicands(X, Y)
    r1, r2, r3 = q1.sqrt(), q2.sqrt(), q3.sqrt()
    return (1 - (X * Y).sqrt()) * r1 + (X - Y.sqrt()) * r2 + (Y - X.sqrt()) * r3


def _partial_x(X: Interval, Y: Interval) -> Interval:
    """Interval extension of dF/dx; call with arguments swapped for dF/dy."""
    q1, q2, q3 = _radicands(X, Y)
    r1, r2, r3 = q1.sqrt(), q2.sqrt(), q3.sqrt()
    sx, sy = X.sqrt(), Y.sqrt()
    inv_2sx = (2 * sx).recip_nonneg()
    return (
        -(sy * inv_2sx * r1)
        + 2 * X * (1 - (X * Y).sqrt()) * r1.recip_nonneg()
        + r2
        - X * (X - sy) * r2.recip_nonneg()
        - r3 * inv_2sx
        + 2 * X * (Y - sx) * r3.recip_nonneg()
    )


def grad_interval(X: Interval, Y: Interval):
    """Interval gradient and a mask of boxes on which F is smooth.

    The mask requires every radicand to stay positive and ``x > 0``; ``y``
    may touch 0, where dF/dy diverges to ``-inf`` and is represented as such.
    """
    q1, q2, q3 = _radicands(X, Y)
    valid = (q1.lo > 0) & (q2.lo > 0) & (q3.lo > 0) & (np.asarray(X.lo) > 0) & (np.asarray(Y.lo) >= 0)
    with np.errstate(invalid="ignore", over="ignore"):
        gx, gy = _partial_x(X, Y), _partial_x(Y, X)
    for g in (gx, gy):
        valid &= ~(np.isnan(g.lo) | np.isnan(g.hi))
    return gx, gy, valid


def _face(I: Interval, g: Interval, toward_max: bool) -> Interval:
    lo, hi = np.asarray(I.lo), np.asarray(I.hi)
    rising = np.asarray(g.lo) >= 0
    falling = np.asarray(g.hi) <= 0
    if toward_max:
        new_lo = np.where(rising, hi, lo)
        new_hi = np.where(falling, lo, hi)
    else:
        new_lo = np.where(falling, hi, lo)
        new_hi = np.where(rising, lo, hi)
    return Interval(new_lo, new_hi)


def _slope_term(g: Interval, I: Interval, c: Interval) -> Interval:
    # A collapsed coordinate contributes exactly 0, even where g is infinite.
    with np.errstate(invalid="ignore", over="ignore"):
        t = g * (I - c)
    flat = np.asarray(I.lo) == np.asarray(I.hi)
    return Interval(np.where(flat, 0.0, t.lo), np.where(flat, 0.0, t.hi))


def _mean_value(X: Interval, Y: Interval) -> Interval:
    cx, cy = Interval.point(X.mid), Interval.point(Y.mid)
    gx, gy, valid = grad_interval(X, Y)
    with np.errstate(invalid="ignore", over="ignore"):
        mv = natural_F(cx, cy) + _slope_term(gx, X, cx) + _slope_term(gy, Y, cy)
    lo = np.where(valid & ~np.isnan(mv.lo), mv.lo, -np.inf)
    hi = np.where(valid & ~np.isnan(mv.hi), mv.hi, np.inf)
    return Interval(lo, hi)


def enclose_F(X: Interval, Y: Interval, tighten: bool = True) -> Interval:
    """Enclosure of F over the box ``X x Y`` intersected with F's natural domain."""
    nat = natural_F(X, Y)
    if not tighten:
        return nat
    lo, hi = np.asarray(nat.lo, float), np.asarray(nat.hi, float)
    gx, gy, valid = grad_interval(X, Y)
    if np.any(valid):
        for toward_max in (True, False):
            Xr, Yr = _face(X, gx, toward_max), _face(Y, gy, toward_max)
            Xr = Interval(np.where(valid, Xr.lo, X.lo), np.where(valid, Xr.hi, X.hi))
            Yr = Interval(np.where(valid, Yr.lo, Y.lo), np.where(valid, Yr.hi, Y.hi))
            reduced = natural_F(Xr, Yr)
            mv = _mean_value(Xr, Yr)
            if toward_max:
                hi = np.minimum(hi, np.where(valid, np.minimum(reduced.hi, mv.hi), hi))
            else:
                lo = np.maximum(lo, np.where(valid, np.maximum(reduced.lo, mv.lo), lo))
    return Interval(lo, hi)


def interval_F(box: Box) -> Interval:
    """Natural interval extension of F over a single box."""
    res = natural_F(box.x, box.y)
    return Interval(float(res.lo), float(res.hi))


def contract_to_M(x_lo, x_hi, y_lo, y_hi, x_max: float = 1.0):
    """Bounding box of ``box ∩ M ∩ {x <= x_max}``, with a mask of possibly nonempty results.

    Bounds from ``x + y >= 1`` are rounded outward, so the mask never drops a
    box that meets M.
    """
    x_lo, x_hi, y_lo, y_hi = (np.asarray(v, dtype=float) for v in (x_lo, x_hi, y_lo, y_hi))
    for _ in range(2):
        nx_lo = np.maximum.reduce([x_lo, y_lo, down(1.0 - y_hi)])
        nx_hi = np.minimum(x_hi, x_max)
        ny_lo = np.maximum.reduce([y_lo, np.zeros_like(y_lo), down(1.0 - x_hi)])
        ny_hi = np.minimum(y_hi, x_hi)
        x_lo, x_hi, y_lo, y_hi = nx_lo, nx_hi, ny_lo, ny_hi
    nonempty = (x_lo <= x_hi) & (y_lo <= y_hi)
    return x_lo, x_hi, y_lo, y_hi, nonempty


def box_upper_bounds(x_lo, x_hi, y_lo, y_hi, x_max: float = 1.0, tighten: bool = True):
    """Upper bound of F over each ``box ∩ M``; ``-inf`` for boxes missing M."""
    cx_lo, cx_hi, cy_lo, cy_hi, nonempty = contract_to_M(x_lo, x_hi, y_lo, y_hi, x_max)
    upper = np.full(nonempty.shape, -np.inf)
    if np.any(nonempty):
        X = Interval(cx_lo[nonempty], cx_hi[nonempty])
        Y = Interval(cy_lo[nonempty], cy_hi[nonempty])
        upper[nonempty] = enclose_F(X, Y, tighten).hi
    return upper


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ResidualBox:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    upper: float

    @property
    def width(self) -> float:
        return max(self.x_hi - self.x_lo, self.y_hi - self.y_lo)

    def distance_to(self, px: float, py: float) -> float:
        """Euclidean distance from the box to a point."""
        dx = max(self.x_lo - px, 0.0, px - self.x_hi)
        dy = max(self.y_lo - py, 0.0, py - self.y_hi)
        return math.hypot(dx, dy)

    def max_norm_distance_to(self, px: float, py: float) -> float:
        dx = max(self.x_lo - px, 0.0, px - self.x_hi)
        dy = max(self.y_lo - py, 0.0, py - self.y_hi)
        return max(dx, dy)


@dataclass(frozen=True, order=True)
class ResidualInterval:
    lo: float
    hi: float
    upper: float


@dataclass(frozen=True)
class EdgeCertificate:
    edge: str
    param_lo: float
    param_hi: float
    tau: float
    conclusion: str
    intervals_processed: int
    residuals: tuple[ResidualInterval, ...]
    max_residual_width: float


@dataclass(frozen=True)
class Certificate:
    tau: float
    conclusion: str
    boxes_processed: int
    residual_boxes: tuple[ResidualBox, ...]
    max_residual_width: float
    min_width: float
    max_boxes: int
    x_max: float = 1.0
    enclosure: str = "tight"
    edges: tuple[EdgeCertificate, ...] = ()
    version: int = CERTIFICATE_VERSION

    @property
    def certified(self) -> bool:
        return self.conclusion == "certified" and all(e.conclusion == "certified" for e in self.edges)


def certify_nonpositive(
    tau: float = 1e-6,
    max_boxes: int = 10**7,
    min_width: float = 1e-4,
    x_max: float = 1.0,
    tighten: bool = True,
) -> Certificate:
    """Branch-and-bound over M: prune boxes whose enclosure is ``<= 0``.

    Levels are processed breadth first, in FIFO order within a level, and the
    whole level is enclosed in one vectorized pass.  Boxes that cannot be
    pruned are bisected along their wider side (x on ties) until their width
    reaches ``min_width``, at which point they are kept as residuals.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    if not min_width > 0:
        raise ValueError("min_width must be positive")
    x_lo0, x_hi0, y_lo0, y_hi0 = M_BOUNDS
    level = np.array([[x_lo0, min(x_hi0, x_max), y_lo0, y_hi0]])
    processed = 0
    residual_rows: list[np.ndarray] = []
    exhausted = False
    while len(level):
        if processed + len(level) > max_boxes:
            exhausted = True
            residual_rows.append(np.column_stack([level, np.full(len(level), np.inf)]))
            break
        processed += len(level)
        upper = box_upper_bounds(*level.T, x_max=x_max, tighten=tighten)
        keep = upper > 0
        level, upper = level[keep], upper[keep]
        wx, wy = level[:, 1] - level[:, 0], level[:, 3] - level[:, 2]
        done = np.maximum(wx, wy) <= min_width
        if np.any(done):
            residual_rows.append(np.column_stack([level[done], upper[done]]))
        level, wx, wy = level[~done], wx[~done], wy[~done]
        split_x = wx >= wy
        mid_x = level[:, 0] + wx / 2
        mid_y = level[:, 2] + wy / 2
        left, right = level.copy(), level.copy()
        left[split_x, 1] = mid_x[split_x]
        right[split_x, 0] = mid_x[split_x]
        left[~split_x, 3] = mid_y[~split_x]
        right[~split_x, 2] = mid_y[~split_x]
        level = np.stack([left, right], axis=1).reshape(-1, 4)

    rows = np.concatenate(residual_rows) if residual_rows else np.empty((0, 5))
    residuals = tuple(sorted(ResidualBox(*map(float, r)) for r in rows))
    all_below = all(r.upper <= tau for r in residuals)
    conclusion = "certified" if (not exhausted and all_below) else "inconclusive"
    return Certificate(
        tau=float(tau),
        conclusion=conclusion,
        boxes_processed=processed,
        residual_boxes=residuals,
        max_residual_width=max((r.width for r in residuals), default=0.0),
        min_width=float(min_width),
        max_boxes=int(max_boxes),
        x_max=float(x_max),
        enclosure="tight" if tighten else "natural",
    )


EDGE_PARAMS = {"x=1": (0.0, 1.0), "x=y": (0.5, 1.0), "x+y=1": (0.5, 1.0)}


def edge_cover(edge: str, s_lo, s_hi):
    """Boxes covering the edge segment for parameters in ``[s_lo, s_hi]``."""
    s_lo, s_hi = np.asarray(s_lo, dtype=float), np.asarray(s_hi, dtype=float)
    if edge == "x=1":
        one = np.ones_like(s_lo)
        return one, one, s_lo, s_hi
    if edge == "x=y":
        return s_lo, s_hi, s_lo, s_hi
    if edge == "x+y=1":
        return s_lo, s_hi, down(1.0 - s_hi), up(1.0 - s_lo)
    raise ValueError(f"unknown edge {edge!r}")


def edge_upper_bounds(edge: str, s_lo, s_hi, tighten: bool = True):
    return box_upper_bounds(*edge_cover(edge, s_lo, s_hi), tighten=tighten)


def certify_edge(
    edge: str,
    tau: float = 1e-6,
    min_width: float = 1e-6,
    max_intervals: int = 10**6,
    tighten: bool = True,
) -> EdgeCertificate:
    """1-D branch-and-bound of F along one edge of M."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    lo0, hi0 = EDGE_PARAMS[edge]
    level = np.array([[lo0, hi0]])
    processed = 0
    residual_rows: list[np.ndarray] = []
    exhausted = False
    while len(level):
        if processed + len(level) > max_intervals:
            exhausted = True
            residual_rows.append(np.column_stack([level, np.full(len(level), np.inf)]))
            break
        processed += len(level)
        upper = edge_upper_bounds(edge, level[:, 0], level[:, 1], tighten)
        keep = upper > 0
        level, upper = level[keep], upper[keep]
        done = level[:, 1] - level[:, 0] <= min_width
        if np.any(done):
            residual_rows.append(np.column_stack([level[done], upper[done]]))
        level = level[~done]
        mid = level[:, 0] + (level[:, 1] - level[:, 0]) / 2
        level = np.stack(
            [np.column_stack([level[:, 0], mid]), np.column_stack([mid, level[:, 1]])], axis=1
        ).reshape(-1, 2)
    rows = np.concatenate(residual_rows) if residual_rows else np.empty((0, 3))
    residuals = tuple(sorted(ResidualInterval(*map(float, r)) for r in rows))
    ok = not exhausted and all(r.upper <= tau for r in residuals)
    return EdgeCertificate(
        edge=edge,
        param_lo=lo0,
        param_hi=hi0,
        tau=float(tau),
        conclusion="certified" if ok else "inconclusive",
        intervals_processed=processed,
        residuals=residuals,
        max_residual_width=max((r.hi - r.lo for r in residuals), default=0.0),
    )


def certify_edges(tau: float = 1e-6, min_width: float = 1e-6, max_intervals: int = 10**6) -> tuple[EdgeCertificate, ...]:
    return tuple(certify_edge(e, tau, min_width, max_intervals) for e in EDGE_PARAMS)


# -- serialization ------------------------------------------------------------


def _f(v: float) -> str:
    return repr(float(v))


def certificate_to_dict(c: Certificate) -> dict:
    return {
        "version": c.version,
        "domain": {"description": M_DESCRIPTION, "x_max": _f(c.x_max)},
        "tau": _f(c.tau),
        "min_width": _f(c.min_width),
        "max_boxes": c.max_boxes,
        "enclosure": c.enclosure,
        "conclusion": c.conclusion,
        "boxes_processed": c.boxes_processed,
        "residual_boxes": [
            {"x": [_f(r.x_lo), _f(r.x_hi)], "y": [_f(r.y_lo), _f(r.y_hi)], "upper": _f(r.upper)}
            for r in c.residual_boxes
        ],
        "max_residual_width": _f(c.max_residual_width),
        "edges": [
            {
                "edge": e.edge,
                "param": [_f(e.param_lo), _f(e.param_hi)],
                "tau": _f(e.tau),
                "conclusion": e.conclusion,
                "intervals_processed": e.intervals_processed,
                "residuals": [
                    {"s": [_f(r.lo), _f(r.hi)], "upper": _f(r.upper)} for r in e.residuals
                ],
                "max_residual_width": _f(e.max_residual_width),
            }
            for e in c.edges
        ],
    }


def certificate_from_dict(d: dict) -> Certificate:
    if d.get("version") != CERTIFICATE_VERSION:
        raise ValueError(f"unsupported certificate version {d.get('version')!r}")
    edges = tuple(
        EdgeCertificate(
            edge=e["edge"],
            param_lo=float(e["param"][0]),
            param_hi=float(e["param"][1]),
            tau=float(e["tau"]),
            conclusion=e["conclusion"],
            intervals_processed=int(e["intervals_processed"]),
            residuals=tuple(
                ResidualInterval(float(r["s"][0]), float(r["s"][1]), float(r["upper"]))
                for r in e["residuals"]
            ),
            max_residual_width=float(e["max_residual_width"]),
        )
        for e in d.get("edges", [])
    )
    return Certificate(
        tau=float(d["tau"]),
        conclusion=d["conclusion"],
        boxes_processed=int(d["boxes_processed"]),
        residual_boxes=tuple(
            ResidualBox(float(r["x"][0]), float(r["x"][1]), float(r["y"][0]), float(r["y"][1]), float(r["upper"]))
            for r in d["residual_boxes"]
        ),
        max_residual_width=float(d["max_residual_width"]),
        min_width=float(d["min_width"]),
        max_boxes=int(d["max_boxes"]),
        x_max=float(d["domain"]["x_max"]),
        enclosure=d["enclosure"],
        edges=edges,
        version=int(d["version"]),
    )


def dumps_certificate(c: Certificate) -> str:
    return json.dumps(certificate_to_dict(c), indent=2, sort_keys=True) + "\n"


def loads_certificate(text: str) -> Certificate:
    return certificate_from_dict(json.loads(text))


def export_certificate(c: Certificate, path) -> None:
    Path(path).write_text(dumps_certificate(c), encoding="utf-8", newline="\n")


def load_certificate(path) -> Certificate:
    return loads_certificate(Path(path).read_text(encoding="utf-8"))


# -- verification -------------------------------------------------------------


@dataclass
class Verification:
    sound: bool
    problems: list[str] = field(default_factory=list)
    checked_boxes: int = 0
    localized: bool = True


def verify_certificate(c: Certificate) -> Verification:
    """Re-derive every residual bound from the certificate alone.

    ``sound`` requires a ``certified`` claim whose residual boxes and edge
    intervals all re-enclose to ``<= tau`` and respect the recorded maximum
    width.  ``localized`` additionally reports whether every residual box lies
    within ``max_residual_width`` (max-norm) of an exact zero of F; it is
    informational and does not affect soundness.
    """
    problems: list[str] = []
    localized = True
    tighten = c.enclosure == "tight"
    if c.conclusion != "certified":
        problems.append(f"main conclusion is {c.conclusion!r}")
    if c.residual_boxes:
        rb = np.array([[r.x_lo, r.x_hi, r.y_lo, r.y_hi] for r in c.residual_boxes])
        if np.any(rb[:, 0] > rb[:, 1]) or np.any(rb[:, 2] > rb[:, 3]):
            problems.append("residual box with inverted bounds")
        else:
            fresh = box_upper_bounds(*rb.T, x_max=c.x_max, tighten=tighten)
            for r, u in zip(c.residual_boxes, fresh):
                if not u <= c.tau:
                    problems.append(f"residual box {r} re-encloses to {u!r} > tau")
                if r.width > c.max_residual_width:
                    problems.append(f"residual box {r} wider than max_residual_width")
                near = min(r.max_norm_distance_to(*p) for p in EQUALITY_POINTS)
                localized &= near <= c.max_residual_width
    for e in c.edges:
        if e.conclusion != "certified":
            problems.append(f"edge {e.edge} conclusion is {e.conclusion!r}")
        if not e.residuals:
            continue
        s = np.array([[r.lo, r.hi] for r in e.residuals])
        fresh = edge_upper_bounds(e.edge, s[:, 0], s[:, 1], tighten)
        for r, u in zip(e.residuals, fresh):
            if not u <= e.tau:
                problems.append(f"edge {e.edge} residual {r} re-encloses to {u!r} > tau")
    n = len(c.residual_boxes) + sum(len(e.residuals) for e in c.edges)
    return Verification(not problems, problems, n, localized)


def residual_anchor(r: ResidualBox) -> tuple[float, float]:
    """The exact zero of F closest to a residual box."""
    return min(EQUALITY_POINTS, key=lambda p: r.distance_to(*p))


def point_enclosure(x: float, y: float) -> Interval:
    """Natural enclosure at a single point; raises outside F's natural domain."""
    if x < 0 or y < 0:
        raise DomainError("negative coordinate")
    return interval_F(Box.from_bounds(x, x, y, y))
