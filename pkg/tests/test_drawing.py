import pytest
from hypothesis import given, settings, strategies as st

from fanplanar.drawing import (
    DrawingError,
    Planarization,
    crossing_count,
    crossing_sign,
    detect_configurations,
    is_simple,
    make_drawing,
    natural_key,
    require_valid,
    sorted_ids,
    validate_drawing,
)
from fanplanar.generators import FuzzParams, canonical, fuzz


def test_natural_sort():
    assert sorted_ids(["e10", "e2", "e1", "a"]) == ["a", "e1", "e2", "e10"]
    assert natural_key("x2") < natural_key("x10")


def test_planar_k4_is_valid_with_four_faces():
    d = canonical("planar_k4")
    assert validate_drawing(d).ok
    assert len(Planarization(d).faces) == 4
    assert crossing_count(d) == 0


def test_bad_rotation_is_rejected():
    d = make_drawing(["a", "b"], {"e": ("a", "b")}, rot={"a": ["e"], "b": []})
    rep = validate_drawing(d)
    assert not rep.ok
    with pytest.raises(DrawingError):
        require_valid(d)


def test_crossing_missing_from_one_sequence_is_rejected():
    d = canonical("fig1a_fan")
    c = sorted_ids(d.crossings)[0]
    cr = d.crossings[c]
    seq = dict(d.seq)
    seq[cr.second] = tuple(x for x in seq[cr.second] if x != c)
    bad = type(d)(d.graph, d.crossings, seq, d.rot)
    assert not validate_drawing(bad).ok


def test_configurations_on_figures():
    assert is_simple(canonical("fig1a_fan"))
    rep = detect_configurations(canonical("fig1c"))
    assert rep.s2 and not rep.sf2
    rep = detect_configurations(canonical("fig1b"))
    assert rep.sf1
    rep = detect_configurations(canonical("fig1d"))
    assert rep.s2 and not rep.s1


def test_crossing_sign_reverses_with_orientation():
    d = canonical("fig1a_fan")
    for c, cr in d.crossings.items():
        f = d.edge(cr.second)
        s = crossing_sign(d, c, cr.first, f.v)
        assert crossing_sign(d, c, cr.first, f.u) == -s


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_fuzzed_drawings_are_valid(seed):
    d = fuzz(FuzzParams(seed=seed, n=7, moves=3))
    assert validate_drawing(d).ok
    assert d.without_edge(sorted_ids(d.graph.edges)[0]).graph.vertices == d.graph.vertices
    # restricting to all edges only drops isolated vertices
    r = d.restrict(d.graph.edges)
    assert r.crossings == d.crossings and dict(r.seq) == dict(d.seq)
