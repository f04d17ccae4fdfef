"""Combinatorial model of topological drawings on the oriented sphere.

A drawing is stored as its planarization: every edge carries the ordered
sequence of crossings met when walking it from its first endpoint, every
vertex carries the counterclockwise cyclic order of its incident edges, and
every crossing carries a sign.  Rotations at crossings are never stored; they
are derived from the signs.

Sign convention: a crossing with ``first=e1, second=e2, sign=+1`` means that
``e2`` crosses ``e1`` from left to right when both are walked in their
reference orientation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple


class DrawingError(ValueError):
    """Raised when an operation receives a drawing that violates its invariants."""

    code = "invalid-drawing"


_NUM = re.compile(r"(\d+)")


def natural_key(ident: str) -> tuple:
    """Sort key ordering ``e2`` before ``e10``."""
    return tuple(int(t) if t.isdigit() else t for t in _NUM.split(ident))


def sorted_ids(ids: Iterable[str]) -> List[str]:
    return sorted(ids, key=natural_key)


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str

    @property
    def ends(self) -> Tuple[str, str]:
        return (self.u, self.v)

    def other(self, w: str) -> str:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise KeyError(f"{w} is not an endpoint of {self.id}")

    def shares_endpoint(self, other: "Edge") -> Optional[str]:
        common = set(self.ends) & set(other.ends)
        return min(common, key=natural_key) if common else None


@dataclass(frozen=True)
class Graph:
    vertices: Mapping[str, Optional[str]]
    edges: Mapping[str, Edge]

    def incident(self, v: str) -> List[str]:
        return sorted_ids(e.id for e in self.edges.values() if v in e.ends)

    def edge_between(self, a: str, b: str) -> Optional[str]:
        for e in self.edges.values():
            if {e.u, e.v} == {a, b}:
                return e.id
        return None

    def same_as(self, other: "Graph") -> bool:
        return dict(self.vertices) == dict(other.vertices) and dict(self.edges) == dict(
            other.edges
        )


@dataclass(frozen=True)
class Crossing:
    id: str
    first: str
    second: str
    sign: int

    @property
    def edges(self) -> Tuple[str, str]:
        return (self.first, self.second)

    def other(self, e: str) -> str:
        if e == self.first:
            return self.second
        if e == self.second:
            return self.first
        raise KeyError(f"edge {e} is not in crossing {self.id}")


def _canonical_cycle(seq: Sequence[str]) -> Tuple[str, ...]:
    if not seq:
        return ()
    i = min(range(len(seq)), key=lambda k: natural_key(seq[k]))
    return tuple(seq[i:]) + tuple(seq[:i])


@dataclass(frozen=True, eq=False)
class Drawing:
    """Immutable planarized drawing; treat every mapping as read-only."""

    graph: Graph
    crossings: Mapping[str, Crossing]
    seq: Mapping[str, Tuple[str, ...]]
    rot: Mapping[str, Tuple[str, ...]]
    _pos: Dict[Tuple[str, str], int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        for e, cs in self.seq.items():
            for i, c in enumerate(cs, start=1):
                self._pos.setdefault((c, e), i)

    # -- structural queries -------------------------------------------------
    def edge(self, e: str) -> Edge:
        return self.graph.edges[e]

    def position(self, c: str, e: str) -> int:
        """1-based index of crossing ``c`` along ``e`` in reference orientation."""
        return self._pos[(c, e)]

    def crossings_between(self, e: str, f: str) -> List[str]:
        """Crossings of ``e`` with ``f`` in order along ``e``."""
        return [c for c in self.seq[e] if self.crossings[c].other(e) == f]

    def crossing_edges(self, e: str) -> List[str]:
        """Edges crossing ``e`` in order along ``e`` (with multiplicity)."""
        return [self.crossings[c].other(e) for c in self.seq[e]]

    def adjacent(self, e: str, f: str) -> bool:
        return self.edge(e).shares_endpoint(self.edge(f)) is not None

    def key(self) -> tuple:
        return (
            tuple(sorted((k, v) for k, v in self.graph.vertices.items())),
            tuple(sorted((k, (e.u, e.v)) for k, e in self.graph.edges.items())),
            tuple(sorted((k, (c.first, c.second, c.sign)) for k, c in self.crossings.items())),
            tuple(sorted((k, tuple(v)) for k, v in self.seq.items())),
            tuple(sorted((k, _canonical_cycle(v)) for k, v in self.rot.items())),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Drawing):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def restrict(self, edges: Iterable[str]) -> "Drawing":
        """The subdrawing induced by ``edges`` (and their endpoints)."""
        keep = set(edges)
        verts = {w for e in keep for w in self.edge(e).ends}
        graph = Graph(
            {v: self.graph.vertices[v] for v in sorted_ids(verts)},
            {e: self.edge(e) for e in sorted_ids(keep)},
        )
        crossings = {
            k: c for k, c in self.crossings.items() if c.first in keep and c.second in keep
        }
        seq = {e: tuple(c for c in self.seq[e] if c in crossings) for e in graph.edges}
        rot = {v: tuple(e for e in self.rot[v] if e in keep) for v in graph.vertices}
        return Drawing(graph, crossings, seq, rot)

    def without_edge(self, e: str) -> "Drawing":
        """Delete edge ``e`` and its crossings; vertices are kept."""
        keep = [f for f in self.graph.edges if f != e]
        graph = Graph(dict(self.graph.vertices), {f: self.edge(f) for f in keep})
        crossings = {k: c for k, c in self.crossings.items() if e not in c.edges}
        seq = {f: tuple(c for c in self.seq[f] if c in crossings) for f in keep}
        rot = {v: tuple(f for f in r if f != e) for v, r in self.rot.items()}
        return Drawing(graph, crossings, seq, rot)


def make_drawing(
    vertices: Iterable[str] | Mapping[str, Optional[str]],
    edges: Mapping[str, Tuple[str, str]],
    crossings: Mapping[str, Tuple[str, str, int]] = (),
    seq: Mapping[str, Sequence[str]] | None = None,
    rot: Mapping[str, Sequence[str]] | None = None,
) -> Drawing:
    """Convenience constructor from plain tuples and lists."""
    if isinstance(vertices, Mapping):
        verts = dict(vertices)
    else:
        verts = {v: None for v in vertices}
    es = {k: Edge(k, u, v) for k, (u, v) in edges.items()}
    xs = {k: Crossing(k, a, b, int(s)) for k, (a, b, s) in dict(crossings).items()}
    seq = {e: tuple((seq or {}).get(e, ())) for e in es}
    if rot is None:
        rot = {v: tuple(e for e in sorted_ids(es) if v in es[e].ends) for v in verts}
    rot = {v: tuple(rot.get(v, ())) for v in verts}
    return Drawing(Graph(verts, es), xs, seq, rot)


# -- planarization ----------------------------------------------------------

Dart = Tuple[str, int, int]  # (edge, arc index, +1 forward / -1 backward)


class Planarization:
    """Plane multigraph obtained by turning every crossing into a degree-4 node.

    Nodes are ``("v", id)`` for vertices and ``("x", id)`` for crossings.  The
    arcs of edge ``e`` are numbered ``0..k`` from its first endpoint; a dart
    is ``(e, i, +1)`` for the forward direction of arc ``i`` and ``(e, i, -1)``
    for the backward one.  Faces are traced with the face on the left.
    """

    def __init__(self, d: Drawing) -> None:
        self.drawing = d
        self.path: Dict[str, List[tuple]] = {}
        for e, edge in d.graph.edges.items():
            self.path[e] = [("v", edge.u)] + [("x", c) for c in d.seq[e]] + [("v", edge.v)]
        self.out: Dict[tuple, List[Dart]] = {}
        for v, r in d.rot.items():
            self.out[("v", v)] = [self._vertex_dart(e, v) for e in r]
        for c in d.crossings.values():
            p1, p2 = d.position(c.id, c.first), d.position(c.id, c.second)
            f1, b1 = (c.first, p1, 1), (c.first, p1 - 1, -1)
            f2, b2 = (c.second, p2, 1), (c.second, p2 - 1, -1)
            if c.sign > 0:
                self.out[("x", c.id)] = [f1, b2, b1, f2]
            else:
                self.out[("x", c.id)] = [f1, f2, b1, b2]
        self._rot_index = {
            dart: (node, i) for node, ds in self.out.items() for i, dart in enumerate(ds)
        }
        self._faces: Optional[List[List[Dart]]] = None
        self._face_of: Dict[Dart, int] = {}

    def _vertex_dart(self, e: str, v: str) -> Dart:
        edge = self.drawing.edge(e)
        k = len(self.drawing.seq[e])
        return (e, 0, 1) if v == edge.u else (e, k, -1)

    def tail(self, dart: Dart) -> tuple:
        e, i, s = dart
        return self.path[e][i] if s > 0 else self.path[e][i + 1]

    def head(self, dart: Dart) -> tuple:
        e, i, s = dart
        return self.path[e][i + 1] if s > 0 else self.path[e][i]

    @staticmethod
    def twin(dart: Dart) -> Dart:
        return (dart[0], dart[1], -dart[2])

    def darts(self) -> List[Dart]:
        return [d for ds in self.out.values() for d in ds]

    def next_in_face(self, dart: Dart) -> Dart:
        node, i = self._rot_index[self.twin(dart)]
        ring = self.out[node]
        return ring[(i - 1) % len(ring)]

    def rotation_neighbor(self, dart: Dart, step: int) -> Dart:
        node, i = self._rot_index[dart]
        ring = self.out[node]
        return ring[(i + step) % len(ring)]

    @property
    def faces(self) -> List[List[Dart]]:
        if self._faces is None:
            faces: List[List[Dart]] = []
            for start in self.darts():
                if start in self._face_of:
                    continue
                walk = []
                dart = start
                while dart not in self._face_of:
                    self._face_of[dart] = len(faces)
                    walk.append(dart)
                    dart = self.next_in_face(dart)
                faces.append(walk)
            self._faces = faces
        return self._faces

    def face_of(self, dart: Dart) -> int:
        self.faces
        return self._face_of[dart]

    def components(self) -> List[set]:
        adj: Dict[tuple, set] = {n: set() for n in self.out}
        for dart in self.darts():
            adj[self.tail(dart)].add(self.head(dart))
        seen: set = set()
        comps = []
        for n in sorted(adj, key=lambda t: (t[0], natural_key(t[1]))):
            if n in seen:
                continue
            comp = {n}
            stack = [n]
            while stack:
                m = stack.pop()
                for w in adj[m]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(comp)
        return comps

    def euler_defects(self) -> List[Tuple[set, int]]:
        """Components whose Euler characteristic differs from 2, with the value."""
        self.faces
        bad = []
        for comp in self.components():
            v = len(comp)
            darts = [d for n in comp for d in self.out[n]]
            e = len(darts) // 2
            f = len({self._face_of[d] for d in darts}) if darts else 1
            if v - e + f != 2:
                bad.append((comp, v - e + f))
        return bad


@dataclass(frozen=True)
class FaceSet:
    faces: Tuple[Tuple[Dart, ...], ...]
    incidence: Mapping[Dart, int]


@dataclass
class ValidationReport:
    ok: bool
    violations: List[str]

    def __bool__(self) -> bool:
        return self.ok


def validate_drawing(d: Drawing) -> ValidationReport:
    """Check every structural invariant; violations are returned, not raised."""
    out: List[str] = []
    g = d.graph
    pairs: Dict[frozenset, str] = {}
    for k, e in g.edges.items():
        if e.id != k:
            out.append(f"edge record mismatch: {k}")
        if e.u == e.v:
            out.append(f"self-loop: edge {k}")
        for w in e.ends:
            if w not in g.vertices:
                out.append(f"unknown endpoint: edge {k} uses vertex {w}")
        key = frozenset(e.ends)
        if key in pairs:
            out.append(f"parallel edges: {pairs[key]} and {k}")
        pairs[key] = k
    for k, c in d.crossings.items():
        if c.id != k:
            out.append(f"crossing record mismatch: {k}")
        if c.sign not in (1, -1):
            out.append(f"bad sign: crossing {k}")
        for e in c.edges:
            if e not in g.edges:
                out.append(f"unknown edge: crossing {k} names edge {e}")
        if c.first == c.second:
            out.append(f"self-crossing: crossing {k} on edge {c.first}")
    if set(d.seq) != set(g.edges):
        out.append("sequence map does not cover exactly the edges")
    seen: Dict[str, List[str]] = {}
    for e, cs in d.seq.items():
        for c in cs:
            seen.setdefault(c, []).append(e)
    for c, es in seen.items():
        if c not in d.crossings:
            out.append(f"unknown crossing: {c} on edge(s) {', '.join(es)}")
    for k, c in d.crossings.items():
        es = seen.get(k, [])
        want = sorted([c.first, c.second])
        if sorted(es) != want:
            if len(es) < 2:
                out.append(f"dangling crossing: {k} listed on {es or 'no edge'}")
            else:
                out.append(f"misplaced crossing: {k} listed on {es}, expected {want}")
    if set(d.rot) != set(g.vertices):
        out.append("rotation map does not cover exactly the vertices")
    for v in g.vertices:
        r = list(d.rot.get(v, ()))
        inc = g.incident(v)
        if sorted_ids(r) != inc:
            out.append(f"bad rotation: vertex {v} lists {r}, incident edges {inc}")
    if out:
        return ValidationReport(False, out)
    for comp, chi in Planarization(d).euler_defects():
        names = sorted_ids(n[1] for n in comp if n[0] == "v") or sorted_ids(n[1] for n in comp)
        out.append(f"genus violation: component of {names[0]} has Euler characteristic {chi}")
    return ValidationReport(not out, out)


def require_valid(d: Drawing) -> None:
    report = validate_drawing(d)
    if not report.ok:
        raise DrawingError("; ".join(report.violations))


def trace_faces(d: Drawing) -> FaceSet:
    require_valid(d)
    p = Planarization(d)
    faces = tuple(tuple(f) for f in p.faces)
    return FaceSet(faces, {dart: i for i, f in enumerate(faces) for dart in f})


def crossing_sign(d: Drawing, c: Crossing | str, base: str, toward: str) -> int:
    """Sign of crossing ``c`` with ``base`` in reference orientation and the
    other edge oriented toward vertex ``toward``: +1 when the other edge crosses
    ``base`` from left to right."""
    if isinstance(c, str):
        c = d.crossings[c]
    if base not in c.edges:
        raise KeyError(f"edge-not-in-crossing: {base} not in {c.id}")
    other = c.other(base)
    edge = d.edge(other)
    if toward not in edge.ends:
        raise KeyError(f"not-an-endpoint: {toward} is not an endpoint of {other}")
    along = 1 if toward == edge.v else -1
    return c.sign * along if base == c.first else -c.sign * along


def crossing_count(d: Drawing) -> int:
    return len(d.crossings)


@dataclass
class ConfigReport:
    s1: List[Tuple[str, str, str]]
    s2: List[Tuple[str, str]]
    sf1: List[Tuple[str, str, str]]
    sf2: List[Tuple[str, str, str]]


def detect_configurations(d: Drawing) -> ConfigReport:
    require_valid(d)
    s1: List[Tuple[str, str, str]] = []
    counts: Dict[Tuple[str, str], int] = {}
    for k in sorted_ids(d.crossings):
        c = d.crossings[k]
        a, b = sorted_ids(c.edges)
        if d.adjacent(a, b):
            s1.append((a, b, k))
        counts[(a, b)] = counts.get((a, b), 0) + 1
    s2 = sorted((p for p, n in counts.items() if n >= 2), key=lambda p: tuple(map(natural_key, p)))
    sf1: List[Tuple[str, str, str]] = []
    sf2: List[Tuple[str, str, str]] = []
    for a in sorted_ids(d.graph.edges):
        crossers = sorted_ids(set(d.crossing_edges(a)))
        for i, c1 in enumerate(crossers):
            for c2 in crossers[i + 1 :]:
                shared = d.edge(c1).shares_endpoint(d.edge(c2))
                if shared is None:
                    sf1.append((a, c1, c2))
                    continue
                signs = {
                    crossing_sign(d, x, a, shared)
                    for x in d.seq[a]
                    if d.crossings[x].other(a) in (c1, c2)
                }
                if len(signs) > 1:
                    sf2.append((a, c1, c2))
    return ConfigReport(s1, s2, sf1, sf2)


def is_simple(d: Drawing) -> bool:
    report = detect_configurations(d)
    return not report.s1 and not report.s2
