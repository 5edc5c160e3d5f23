import json

import numpy as np

from triangle_ineq import surface
from triangle_ineq.devilfish import eval_F


def test_grid_values_and_order():
    g = surface.surface_grid(20, 30)
    ys = [r[1] for r in g.rows]
    assert ys == sorted(ys)
    for x, y, f in g.rows:
        assert f == eval_F(x, y)
    assert g.values().max() <= 1e-12


def test_full_grid_keeps_every_node():
    g = surface.surface_grid(10, 10, full_grid=True)
    assert len(g.rows) == 100
    assert any(r[2] is None for r in g.rows)
    line = [l for l in surface.to_csv(g).splitlines()[1:] if l.endswith(",")]
    assert line


def test_csv_format():
    text = surface.to_csv(surface.surface_grid(5, 5))
    assert text.startswith("x,y,F\n") and "\r" not in text
    for line in text.splitlines()[1:]:
        x, y, f = line.split(",")
        assert float(f) == eval_F(float(x), float(y))
        assert repr(float(f)) == f


def test_json_and_byte_stability():
    a = surface.to_json(surface.surface_grid(8, 9))
    b = surface.to_json(surface.surface_grid(8, 9))
    assert a == b
    doc = json.loads(a)
    assert doc["columns"] == ["x", "y", "F"] and doc["nx"] == 8


def test_minimum_near_lower_corner():
    g = surface.surface_grid(200, 200)
    x, y, f = g.argmin()
    assert np.hypot(x - 0.5, y - 0.5) < 0.01
    assert g.argmax()[2] <= 1e-12
