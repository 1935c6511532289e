import csv
import io
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from circlestab import BumpPsi, CircleField, find_fixed_points, render_portrait
from circlestab.field import E_INV
from circlestab.portrait import flow_arrows, portrait_csv

from exemplars import shifted_field, sin2_field, sin3_field, sin_field

NS = {"s": "http://www.w3.org/2000/svg"}


def _svg(field, resolution=512):
    svg, text = render_portrait(field, find_fixed_points(field), resolution)
    return ET.fromstring(svg.split("\n", 1)[1]), text


def _by_class(root, cls):
    return [e for e in root.iter() if e.get("class") == cls]


def _rows(text):
    return [(float(r["x"]), float(r["f"]), float(r["df"])) for r in csv.DictReader(io.StringIO(text))]


def test_sin_markers_and_arrows():
    root, _ = _svg(sin_field())
    markers = _by_class(root, "marker")
    assert sorted(m.get("data-style") for m in markers) == ["filled", "hollow"]
    assert sorted(round(float(m.get("data-x")), 9) for m in markers) == [0.0, 0.5]
    arrows = _by_class(root, "arrow")
    dirs = [(float(a.get("data-x")), a.get("data-direction")) for a in arrows]
    assert {d for x, d in dirs if x < 0.5} == {"right"}
    assert {d for x, d in dirs if x > 0.5} == {"left"}


def test_arrows_follow_sign_of_field():
    f = CircleField(sin_field().atoms + sin3_field().atoms)
    for a in flow_arrows(f, 96):
        assert (a.direction == "right") == (f(a.x) > 0)


def test_shifted_has_no_markers_one_direction():
    root, _ = _svg(shifted_field())
    assert _by_class(root, "marker") == []
    assert {a.get("data-direction") for a in _by_class(root, "arrow")} == {"right"}


def test_nonhyperbolic_markers_are_half_filled():
    root, _ = _svg(sin2_field())
    assert {m.get("data-style") for m in _by_class(root, "marker")} == {"half"}


def test_graph_parts_present():
    root, _ = _svg(sin_field())
    ids = {e.get("id") for e in root.iter()}
    assert {"graph", "zero-axis", "curve", "circle", "phase-line"} <= ids
    curve = root.find(".//s:polyline[@id='curve']", NS)
    assert len(curve.get("points").split()) == 513


def test_markers_equal_fixed_points():
    fps = find_fixed_points(sin3_field())
    svg, _ = render_portrait(sin3_field(), fps)
    root = ET.fromstring(svg.split("\n", 1)[1])
    xs = sorted(float(m.get("data-x")) for m in _by_class(root, "marker"))
    assert xs == sorted(fps.locations.tolist())


def test_csv_rows_and_periodicity():
    rows = _rows(portrait_csv(sin_field(), 256))
    assert len(rows) == 257
    assert rows[0][0] == 0.0 and rows[-1][0] == 1.0
    assert rows[0][1] == pytest.approx(rows[-1][1], abs=1e-12)
    assert rows[0][2] == pytest.approx(rows[-1][2], abs=1e-12)
    x, f, df = rows[64]
    assert f == pytest.approx(math.sin(2 * math.pi * x), abs=1e-15)


def test_csv_resolution_floor():
    with pytest.raises(ValueError):
        portrait_csv(sin_field(), 32)


def test_bump_bell_shape():
    # the interval bump on (-1, 1), drawn on the circle as the arc (0, 1) after a linear rescale
    _, text = _svg(CircleField((BumpPsi(0.0, 1.0),)), 1024)
    rows = _rows(text)
    fs = np.array([f for _, f, _ in rows])
    assert fs.max() == pytest.approx(E_INV, abs=1e-12)
    assert rows[int(np.argmax(fs))][0] == 0.5
    assert fs[0] == 0.0 and fs[-1] == 0.0 and np.all(fs >= 0)
    left = fs[:513]
    assert np.all(np.diff(left) >= 0)
    assert np.allclose(fs, fs[::-1], atol=1e-15)


def test_version_comment_no_timestamp():
    svg, _ = render_portrait(sin_field(), find_fixed_points(sin_field()), version="9.9")
    assert "<!-- circlestab 9.9 -->" in svg
    again, _ = render_portrait(sin_field(), find_fixed_points(sin_field()), version="9.9")
    assert svg == again
