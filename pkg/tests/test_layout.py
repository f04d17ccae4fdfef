import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings, strategies as st

from fanplanar.drawing import Crossing, make_drawing
from fanplanar.engine import normalize, pick_adjacent_crossing, build_conflict_sequence
from fanplanar.generators import CANONICAL_NAMES, FuzzParams, canonical, fuzz
from fanplanar.layout import geometric_recheck, layout, render_svg

SVG = "{http://www.w3.org/2000/svg}"


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def test_triangle_points_are_not_collinear():
    d = make_drawing(["a", "b", "c"], {"e1": ("a", "b"), "e2": ("b", "c"), "e3": ("a", "c")})
    lay = layout(d)
    a, b, c = (lay.coordinates[("v", v)] for v in "abc")
    assert abs(_orient(a, b, c)) > 1e-6


@pytest.mark.parametrize("name", CANONICAL_NAMES)
def test_canonical_recheck(name):
    d = canonical(name)
    rep = geometric_recheck(d, layout(d))
    assert rep.ok, rep.mismatches


def test_fig4_multi_crossings_recovered():
    d = canonical("fig4_multi")
    rep = geometric_recheck(d, layout(d))
    assert len(rep.crossings) == 3 and rep.ok


def test_oracle_catches_a_sign_flip():
    d = canonical("fig4_multi")
    lay = layout(d)
    cr = d.crossings["y"]
    xs = dict(d.crossings)
    xs["y"] = Crossing("y", cr.first, cr.second, -cr.sign)
    wrong = type(d)(d.graph, xs, d.seq, d.rot)
    rep = geometric_recheck(wrong, lay)
    assert not rep.ok and any("sign" in m for m in rep.mismatches)


def test_oracle_catches_a_missing_crossing():
    d = canonical("fig1a_fan")
    lay = layout(d)
    # reroute e far outside the picture: its crossings vanish geometrically
    u, v = (lay.coordinates[("v", w)] for w in d.edge("e").ends)
    lay.polylines["e"] = [u, (u[0], -5.0), (v[0], -5.0), v]
    assert not geometric_recheck(d, lay).ok


def test_svg_planar_k4():
    d = canonical("planar_k4")
    root = ET.fromstring(render_svg(d, layout(d)))
    assert len(root.findall(f".//{SVG}path")) == 6
    assert len(root.findall(f".//{SVG}circle")) == 4


def test_svg_fig_sequence_paths():
    d = canonical("fig_sequence")
    n, cert, _ = normalize(d)
    w = build_conflict_sequence(n, cert, *pick_adjacent_crossing(n))
    svg = render_svg(d, layout(d))
    assert len(re.findall(r"<path ", svg)) == w.k + 3


def test_svg_empty_and_deterministic():
    empty = make_drawing([], {})
    root = ET.fromstring(render_svg(empty, layout(empty)))
    assert root.tag == f"{SVG}svg"
    d = canonical("fig3b_spiral")
    assert render_svg(d, layout(d)) == render_svg(d, layout(d))


def test_disconnected_components_are_tiled():
    d = make_drawing(["a", "b", "c", "d"], {"e": ("a", "b"), "f": ("c", "d")})
    lay = layout(d)
    xs = sorted(lay.coordinates[("v", v)][0] for v in "abcd")
    assert xs[1] < 0.5 < xs[2]
    assert geometric_recheck(d, lay).ok


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_fuzz_recheck(seed):
    d = fuzz(FuzzParams(seed=seed, n=9, moves=5))
    rep = geometric_recheck(d, layout(d))
    assert rep.ok, rep.mismatches
