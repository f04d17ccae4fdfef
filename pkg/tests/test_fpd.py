import pytest
from hypothesis import given, settings, strategies as st

from fanplanar.drawing import Crossing, DrawingError, make_drawing
from fanplanar.fpd import FpdSemanticError, FpdSyntaxError, dump, load, parse, serialize
from fanplanar.generators import CANONICAL_NAMES, FuzzParams, canonical, fuzz

K4 = """fpd 1
# planar K4
v a
v b
v c
v d
e e1 a b
e e2 a c
e e3 a d
e e4 b c
e e5 b d
e e6 c d
rot a: e1 e3 e2
rot b: e1 e4 e5
rot c: e2 e6 e4
rot d: e3 e5 e6
"""


def test_planar_k4_text_is_frozen():
    assert serialize(canonical("planar_k4")) == K4.replace("# planar K4\n", "")


@pytest.mark.parametrize("name", CANONICAL_NAMES)
def test_round_trip_fixtures(name):
    d = canonical(name)
    text = serialize(d)
    assert parse(text) == d
    assert serialize(parse(text)) == text


def test_labels_and_comments():
    d = parse("fpd 1\nv a the apex  # note\nv b\ne e a b\nrot a: e\nrot b: e\n")
    assert d.graph.vertices["a"] == "the apex"
    assert parse(serialize(d)) == d


def test_sign_matters():
    d = canonical("fig1a_fan")
    c = sorted(d.crossings)[0]
    cr = d.crossings[c]
    xs = dict(d.crossings)
    xs[c] = Crossing(c, cr.first, cr.second, -cr.sign)
    other = type(d)(d.graph, xs, d.seq, d.rot)
    assert other != d


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("fpd 2\n", 1),
        ("fpd 1\nq x\n", 2),
        ("fpd 1\nv a\ne e1 a\n", 3),
        ("fpd 1\nv a\nv b\ne e1 a b\ne e2 a b\nx c e1 0 e2 1 +\n", 6),
        ("fpd 1\nv a\nv b\ne e1 a b\ne e2 a b\nx c e1 1 e2 1 *\n", 6),
        ("fpd 1\nv a!\n", 2),
    ],
)
def test_syntax_errors_carry_position(text, line):
    with pytest.raises(FpdSyntaxError) as info:
        parse(text)
    assert info.value.line == line and info.value.col >= 1


@pytest.mark.parametrize(
    "text",
    [
        "fpd 1\nv a\nv a\n",
        "fpd 1\nv a\nv b\ne e1 a b\nx c e1 1 e9 1 +\n",
        "fpd 1\nv a\nv b\ne e1 a b\ne e2 a b\nx c e1 2 e2 1 +\n",
        "fpd 1\nv a\nrot z: e1\n",
        "fpd 1\nv a\nv b\ne e1 a b\nrot a:\nrot b: e1\n",
    ],
)
def test_semantic_errors(text):
    with pytest.raises(FpdSemanticError):
        parse(text)


def test_unrepresentable_ids():
    d = make_drawing(["a b", "c"], {"e": ("a b", "c")})
    with pytest.raises(DrawingError):
        serialize(d)


def test_load_dump(tmp_path):
    d = canonical("fig4_multi")
    dump(d, tmp_path / "x.fpd")
    assert load(tmp_path / "x.fpd") == d


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_round_trip_fuzz(seed):
    d = fuzz(FuzzParams(seed=seed, n=9, moves=5))
    text = serialize(d)
    assert parse(text) == d and serialize(parse(text)) == text
