"""Plot-ready samples of F over M, for contour or 3-D plots."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .devilfish import eval_F, in_M

X_RANGE = (0.5, 1.0)
Y_RANGE = (0.0, 1.0)


@dataclass(frozen=True)
class SurfaceGrid:
    nx: int
    ny: int
    full_grid: bool
    rows: tuple[tuple[float, float, float | None], ...]

    def values(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows if r[2] is not None], dtype=float)

    def argmin(self) -> tuple[float, float, float]:
        return min((r for r in self.rows if r[2] is not None), key=lambda r: r[2])

    def argmax(self) -> tuple[float, float, float]:
        return max((r for r in self.rows if r[2] is not None), key=lambda r: r[2])


def surface_grid(nx: int = 200, ny: int = 200, full_grid: bool = False) -> SurfaceGrid:
    """Sample F on an ``nx x ny`` grid over M's bounding box ``[1/2, 1] x [0, 1]``.

    Rows are ordered by y, then x.  Points outside M are dropped, or kept with
    a missing value when ``full_grid`` is set.
    """
    if nx < 2 or ny < 2:
        raise ValueError("surface grid needs at least 2 points per axis")
    xs = np.linspace(*X_RANGE, nx)
    ys = np.linspace(*Y_RANGE, ny)
    X, Y = np.meshgrid(xs, ys)
    inside = in_M(X, Y)
    F = np.full(X.shape, np.nan)
    F[inside] = eval_F(X[inside], Y[inside])
    rows = []
    for j in range(ny):
        for i in range(nx):
            if inside[j, i]:
                rows.append((float(X[j, i]), float(Y[j, i]), float(F[j, i])))
            elif full_grid:
                rows.append((float(X[j, i]), float(Y[j, i]), None))
    return SurfaceGrid(nx, ny, full_grid, tuple(rows))


def _num(v: float | None) -> str:
    return "" if v is None else repr(v)


def to_csv(grid: SurfaceGrid) -> str:
    """Header ``x,y,F``, LF line endings, shortest round-trip decimals; missing values empty."""
    buf = io.StringIO()
    buf.write("x,y,F\n")
    for x, y, f in grid.rows:
        buf.write(f"{_num(x)},{_num(y)},{_num(f)}\n")
    return buf.getvalue()


def to_json(grid: SurfaceGrid) -> str:
    doc = {
        "nx": grid.nx,
        "ny": grid.ny,
        "full_grid": grid.full_grid,
        "columns": ["x", "y", "F"],
        "rows": [list(r) for r in grid.rows],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"
