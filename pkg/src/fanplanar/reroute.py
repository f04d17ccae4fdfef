"""Edge redrawing by declarative routes.

A route rebuilds one edge (the *target*) out of two kinds of pieces:

``Tail(a, b)``
    the target's old curve between anchors ``a`` and ``b``, keeping every
    crossing strictly inside;
``Shadow(f, a, b)``
    a new arc in a thin corridor beside edge ``f`` between two of its
    anchors, crossing every edge that crosses ``f`` strictly inside the span
    right next to that crossing, with the same sign and in the same order.

Anchors are vertices ``V(id)`` or crossings ``X(id)``.  At a junction between
a tail and a shadow the crossing of the target with the followed edge is kept
(the new curve crosses there and then turns) unless it is listed in
``removed`` (the new curve turns without crossing).  Corridor sides are forced
by the junctions and computed; a side given explicitly is checked.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .drawing import Crossing, Drawing, Graph, crossing_sign, validate_drawing

Anchor = Tuple[str, str]


def V(ident: str) -> Anchor:
    return ("v", ident)


def X(ident: str) -> Anchor:
    return ("x", ident)


class RerouteError(ValueError):
    code = "malformed-route"


class PostValidationFailure(RerouteError):
    """The assembled drawing is not a valid spherical drawing."""

    code = "post-validation-failure"


@dataclass(frozen=True)
class Tail:
    start: Anchor
    end: Anchor

    def __str__(self) -> str:
        return f"Tail({self.start[1]}->{self.end[1]})"


@dataclass(frozen=True)
class Shadow:
    edge: str
    start: Anchor
    end: Anchor
    side: Optional[str] = None  # "left" / "right" of the direction of travel

    def __str__(self) -> str:
        side = f", {self.side}" if self.side else ""
        return f"Shadow({self.edge}, {self.start[1]}->{self.end[1]}{side})"


Segment = Union[Tail, Shadow]


@dataclass(frozen=True)
class RouteSpec:
    target: str
    segments: Tuple[Segment, ...]
    removed: FrozenSet[str] = frozenset()

    def __str__(self) -> str:
        body = " + ".join(str(s) for s in self.segments)
        rm = f" removed={{{', '.join(sorted(self.removed))}}}" if self.removed else ""
        return f"{self.target}: {body}{rm}"


@dataclass
class RerouteResult:
    drawing: Drawing
    removed: List[str]  # old crossings of the target that disappeared
    added: List[str]  # new crossing ids
    kept: List[str]


_CNUM = re.compile(r"^c(\d+)$")


def fresh_ids(d: Drawing, count: int) -> List[str]:
    top = 0
    for k in d.crossings:
        m = _CNUM.match(k)
        if m:
            top = max(top, int(m.group(1)))
    return [f"c{top + i}" for i in range(1, count + 1)]


def _path(d: Drawing, e: str) -> List[Anchor]:
    edge = d.edge(e)
    return [V(edge.u)] + [X(c) for c in d.seq[e]] + [V(edge.v)]


def _index(d: Drawing, e: str, a: Anchor) -> int:
    path = _path(d, e)
    try:
        return path.index(a)
    except ValueError:
        raise RerouteError(f"anchor {a[1]} is not on edge {e}") from None


def _side_toward(d: Drawing, c: str, f: str, toward: str) -> str:
    """Side of ``f`` (reference orientation) holding the part of the other
    edge at ``c`` that leads to its endpoint ``toward``."""
    return "R" if crossing_sign(d, c, f, toward) > 0 else "L"


def _flip(side: str) -> str:
    return {"L": "R", "R": "L"}[side]


def _ray_end(d: Drawing, e: str, c: str, other: Anchor) -> str:
    """Endpoint of ``e`` reached from crossing ``c`` by moving toward anchor ``other``."""
    edge = d.edge(e)
    return edge.u if _index(d, e, other) < _index(d, e, X(c)) else edge.v


def reroute_edge(d: Drawing, spec: RouteSpec) -> Drawing:
    return apply_route(d, spec).drawing


def apply_route(d: Drawing, spec: RouteSpec) -> RerouteResult:
    t = spec.target
    if t not in d.graph.edges:
        raise RerouteError(f"unknown target {t}")
    segs = list(spec.segments)
    if not segs:
        raise RerouteError("empty route")
    tedge = d.edge(t)
    for a, b in zip(segs, segs[1:]):
        if a.end != b.start:
            raise RerouteError(f"segments do not join: {a} / {b}")
    start, end = segs[0].start, segs[-1].end
    if {start, end} != {V(tedge.u), V(tedge.v)}:
        raise RerouteError("route must run between the target's endpoints")
    route_dir = 1 if start == V(tedge.u) else -1
    for s in segs:
        if isinstance(s, Shadow) and s.edge == t:
            raise RerouteError("a shadow cannot follow the target itself")
        if isinstance(s, Shadow) and s.edge not in d.graph.edges:
            raise RerouteError(f"unknown followed edge {s.edge}")

    old = d.seq[t]
    tpath = _path(d, t)
    # crossings of the target that survive
    kept: List[str] = []
    tail_dirs: Dict[str, int] = {}
    for i, s in enumerate(segs):
        if isinstance(s, Tail):
            ia, ib = _index(d, t, s.start), _index(d, t, s.end)
            if ia == ib:
                raise RerouteError(f"degenerate tail {s}")
            step = 1 if ib > ia else -1
            for k in range(ia + step, ib, step):
                kept.append(tpath[k][1])
                tail_dirs[tpath[k][1]] = step
    for i in range(len(segs) - 1):
        a, b = segs[i], segs[i + 1]
        j = a.end
        if j[0] != "x":
            raise RerouteError("segments may only join at crossings")
        if isinstance(a, Tail) or isinstance(b, Tail):
            if j[1] not in old:
                raise RerouteError(f"junction {j[1]} is not a crossing of {t}")
            if j[1] not in spec.removed:
                kept.append(j[1])
                tl = a if isinstance(a, Tail) else b
                ia, ib = _index(d, t, tl.start), _index(d, t, tl.end)
                tail_dirs[j[1]] = 1 if ib > ia else -1
    if len(set(kept)) != len(kept):
        raise RerouteError("route reuses part of the old curve twice")
    keep_set = set(kept)
    if not spec.removed <= set(old) - keep_set:
        raise RerouteError("removed crossings must be old crossings left out of the route")

    # corridor sides, relative to the followed edge's reference orientation
    sides: List[Optional[str]] = []
    for i, s in enumerate(segs):
        if isinstance(s, Tail):
            sides.append(None)
            continue
        f = s.edge
        ia, ib = _index(d, f, s.start), _index(d, f, s.end)
        if ia == ib:
            raise RerouteError(f"degenerate shadow {s}")
        need = set()
        for j_anchor, nb, at_start in ((s.start, segs[i - 1] if i else None, True),
                                       (s.end, segs[i + 1] if i + 1 < len(segs) else None, False)):
            if nb is None:
                continue
            c = j_anchor[1]
            cross = d.crossings[c]
            if isinstance(nb, Tail):
                # the target's old piece on the far side of the junction
                far = nb.start if at_start else nb.end
                part = _side_toward(d, c, f, _ray_end(d, t, c, far))
                if c in spec.removed:
                    need.add(part)
                else:
                    need.add(_flip(part))
            else:
                g = nb.edge
                if cross.other(f) != g:
                    raise RerouteError(f"junction {c} is not a crossing of {f} and {g}")
                far = nb.end if not at_start else nb.start
                # corridor hugs the quadrant toward the other shadow's span
                need.add(_side_toward(d, c, f, _ray_end(d, g, c, far)))
        if s.side is not None:
            direction = 1 if ib > ia else -1
            given = {"left": "L", "right": "R"}[s.side]
            need.add(given if direction > 0 else _flip(given))
        if len(need) > 1:
            raise RerouteError(f"impossible side assignment for {s}")
        if not need:
            raise RerouteError(f"side of {s} is not determined; give it explicitly")
        sides.append(need.pop())

    # assemble the new crossing sequence in route order
    items: List[tuple] = []  # ("keep", id) | ("new", h, anchor_crossing, before, sign)
    for i, s in enumerate(segs):
        if i > 0 and segs[i - 1].end[1] in keep_set and (
            isinstance(s, Tail) or isinstance(segs[i - 1], Tail)
        ):
            items.append(("keep", segs[i - 1].end[1]))
        if isinstance(s, Tail):
            ia, ib = _index(d, t, s.start), _index(d, t, s.end)
            step = 1 if ib > ia else -1
            for k in range(ia + step, ib, step):
                items.append(("keep", tpath[k][1]))
            continue
        f = s.edge
        fpath = _path(d, f)
        ia, ib = _index(d, f, s.start), _index(d, f, s.end)
        step = 1 if ib > ia else -1
        side = sides[i]
        for k in range(ia + step, ib, step):
            c = fpath[k][1]
            h = d.crossings[c].other(f)
            if h == t:
                if c in keep_set:
                    raise RerouteError(f"shadow along {f} would cross the kept curve at {c}")
                continue
            hedge = d.edge(h)
            before = _side_toward(d, c, f, hedge.u) == side
            sigma = crossing_sign(d, c, f, hedge.v)
            items.append(("new", h, c, before, sigma * route_dir * step))

    removed = [c for c in old if c not in keep_set]
    new_ids = fresh_ids(d, sum(1 for it in items if it[0] == "new"))
    crossings = {k: c for k, c in d.crossings.items() if k not in removed}
    seq = {e: [c for c in cs if c not in removed] for e, cs in d.seq.items()}
    new_seq: List[str] = []
    added: List[str] = []
    it_ids = iter(new_ids)
    for item in items:
        if item[0] == "keep":
            c = item[1]
            flip = route_dir * tail_dirs[c]
            if flip < 0:
                old_c = crossings[c]
                crossings[c] = Crossing(c, old_c.first, old_c.second, -old_c.sign)
            new_seq.append(c)
            continue
        _, h, anchor, before, sign = item
        nid = next(it_ids)
        crossings[nid] = Crossing(nid, t, h, sign)
        hs = seq[h]
        k = hs.index(anchor)
        hs.insert(k if before else k + 1, nid)
        new_seq.append(nid)
        added.append(nid)
    if route_dir < 0:
        new_seq.reverse()
    seq[t] = new_seq

    rot = {v: list(r) for v, r in d.rot.items()}
    for vert, idx in ((start[1], 0), (end[1], len(segs) - 1)):
        seg = segs[idx]
        if isinstance(seg, Tail):
            continue
        f = seg.edge
        outward_left = (sides[idx] == "L") == (vert == d.edge(f).u)
        r = [e for e in rot[vert] if e != t]
        k = r.index(f)
        r.insert(k + 1 if outward_left else k, t)
        rot[vert] = r

    out = Drawing(
        Graph(dict(d.graph.vertices), dict(d.graph.edges)),
        crossings,
        {e: tuple(cs) for e, cs in seq.items()},
        {v: tuple(r) for v, r in rot.items()},
    )
    report = validate_drawing(out)
    if not report.ok:
        raise PostValidationFailure(
            f"route {spec} produced an invalid drawing: {'; '.join(report.violations)}"
        )
    return RerouteResult(out, removed, added, kept)
