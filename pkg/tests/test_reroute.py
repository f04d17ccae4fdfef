import pytest
from hypothesis import given, settings, strategies as st

from fanplanar.drawing import sorted_ids, validate_drawing
from fanplanar.engine import simplify
from fanplanar.generators import FuzzParams, canonical, fuzz
from fanplanar.reroute import RerouteError, RouteSpec, Shadow, Tail, V, X, apply_route, fresh_ids


def test_identity_tail_on_uncrossed_edge():
    d = canonical("planar_k4")
    for e in sorted_ids(d.graph.edges):
        edge = d.edge(e)
        res = apply_route(d, RouteSpec(e, (Tail(V(edge.u), V(edge.v)),)))
        assert res.drawing == d and not res.added and not res.removed


def test_malformed_routes():
    d = canonical("fig_lemma1")
    with pytest.raises(RerouteError):
        apply_route(d, RouteSpec("nope", (Tail(V("B"), V("C")),)))
    with pytest.raises(RerouteError):
        apply_route(d, RouteSpec("b", ()))
    with pytest.raises(RerouteError):
        # a shadow must follow an edge through anchors that lie on it
        apply_route(d, RouteSpec("b", (Shadow("g", X("y"), V("W")),)))


def test_fresh_ids_avoid_existing():
    d = canonical("fig_sequence")
    ids = fresh_ids(d, 3)
    assert len(set(ids)) == 3 and not set(ids) & set(d.crossings)


def test_route_str():
    spec = RouteSpec("b", (Shadow("g", V("B"), X("x")), Tail(X("x"), V("W"))), frozenset({"x"}))
    assert str(spec) == "b: Shadow(g, B->x) + Tail(x->W) removed={x}"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_replayed_steps_are_local(seed):
    # every step redraws only its target: the rest of the drawing is untouched
    d = fuzz(FuzzParams(seed=seed, n=8, moves=5))
    res = simplify(d)
    cur = d
    for step in res.trace:
        out = apply_route(cur, step.route).drawing
        assert validate_drawing(out).ok
        assert out.without_edge(step.target) == cur.without_edge(step.target)
        assert out.graph.same_as(cur.graph)
        cur = out
    assert cur == res.drawing
