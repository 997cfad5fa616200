import re

import numpy as np
import pytest

from normedvol import bodies
from normedvol.extremal import max_inscribed_polytope
from normedvol.plotting import UnsupportedPlotError, emit_svg, profile_figure, save_svg
from normedvol.shadow import projection_cascade


def test_overlay_svg(tmp_path):
    H = bodies.regular_ngon(6)
    Q = max_inscribed_polytope(H, 4).object
    p = tmp_path / "a.svg"
    emit_svg([H, Q], p, labels=["body", "witness"])
    text = p.read_text()
    for gid in ("body", "witness"):
        group = re.search(rf'<g id="{gid}">\s*<path d="([^"]*)"', text)
        assert group and group.group(1).rstrip().endswith("z")


def test_svg_byte_stable(tmp_path):
    H = bodies.regular_ngon(6)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_svg([H], a)
    emit_svg([H], b)
    assert a.read_bytes() == b.read_bytes()


def test_constant_profile_horizontal(tmp_path):
    p = tmp_path / "p.svg"
    emit_svg((np.linspace(0, 1, 5), np.ones(5)), p, kind="profile")
    assert 'id="profile"' in p.read_text()


def test_cascade_trace_plot(tmp_path):
    res = projection_cascade([[1, 0], [0, 1], [1, 1]], [[1.0, 2.0], [3.0, -1.0], [0.5, 0.5]], 1e-9)
    assert all(b < a for a, b in zip(res.trace, res.trace[1:]))
    save_svg(profile_figure(range(len(res.trace)), res.trace, gid="trace"), tmp_path / "c.svg")
    assert 'id="trace"' in (tmp_path / "c.svg").read_text()


def test_non_planar_rejected(tmp_path):
    with pytest.raises(UnsupportedPlotError):
        emit_svg([bodies.cube(3)], tmp_path / "x.svg")
