"""Plane polyline drawings and their conversion to combinatorial drawings."""
from __future__ import annotations

import math

import numpy as np
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .drawing import Crossing, Drawing, Edge, Graph, sorted_ids

Point = Tuple[float, float]

EPS = 1e-9


def cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def segment_intersection(p: Point, q: Point, r: Point, s: Point) -> Optional[Tuple[float, float]]:
    """Parameters ``(t, u)`` of the proper intersection of ``pq`` and ``rs``.

    Returns ``None`` for disjoint or parallel segments.  Parameters are not
    clipped away from the endpoints; callers decide how to treat touching.
    """
    dx, dy = q[0] - p[0], q[1] - p[1]
    ex, ey = s[0] - r[0], s[1] - r[1]
    den = cross(dx, dy, ex, ey)
    if abs(den) < 1e-15:
        return None
    wx, wy = r[0] - p[0], r[1] - p[1]
    t = cross(wx, wy, ex, ey) / den
    u = cross(wx, wy, dx, dy) / den
    if -EPS <= t <= 1 + EPS and -EPS <= u <= 1 + EPS:
        return t, u
    return None


def _hits(names, polys, edges) -> List[Tuple[str, float, str, float, int]]:
    """All proper crossings between polylines, vectorised over segment pairs."""
    owner, index, starts, ends = [], [], [], []
    for k, e in enumerate(names):
        poly = polys[e]
        for a in range(len(poly) - 1):
            owner.append(k)
            index.append(a)
            starts.append(poly[a])
            ends.append(poly[a + 1])
    if not owner:
        return []
    owner_a, index_a = np.array(owner), np.array(index)
    P, Q = np.array(starts, dtype=float), np.array(ends, dtype=float)
    lo, hi = np.minimum(P, Q) - EPS, np.maximum(P, Q) + EPS
    i, j = np.nonzero(
        (lo[:, None, 0] <= hi[None, :, 0])
        & (lo[None, :, 0] <= hi[:, None, 0])
        & (lo[:, None, 1] <= hi[None, :, 1])
        & (lo[None, :, 1] <= hi[:, None, 1])
        & np.triu(np.ones((len(owner), len(owner)), dtype=bool), 1)
    )
    same = owner_a[i] == owner_a[j]
    keep = ~same | (index_a[j] - index_a[i] >= 2)
    i, j = i[keep], j[keep]
    hits = []
    for a, b in zip(i.tolist(), j.tolist()):
        hit = segment_intersection(starts[a], ends[a], starts[b], ends[b])
        if hit is None:
            continue
        e1, e2 = names[owner[a]], names[owner[b]]
        if e1 == e2:
            raise ValueError(f"edge {e1} intersects itself")
        t, u = hit
        n1, n2 = len(polys[e1]) - 1, len(polys[e2]) - 1
        pos1, pos2 = index[a] + t, index[b] + u
        at_end1 = pos1 < EPS or pos1 > n1 - EPS
        at_end2 = pos2 < EPS or pos2 > n2 - EPS
        if at_end1 and at_end2 and set(edges[e1][:2]) & set(edges[e2][:2]):
            continue
        if min(t, 1 - t, u, 1 - u) < 1e-7:
            raise ValueError(f"degenerate contact between {e1} and {e2}")
        p, q, r, s_ = starts[a], ends[a], starts[b], ends[b]
        d1 = (q[0] - p[0], q[1] - p[1])
        d2 = (s_[0] - r[0], s_[1] - r[1])
        sign = 1 if cross(*d1, *d2) < 0 else -1
        hits.append((e1, pos1, e2, pos2, sign))
    return hits


def drawing_from_polylines(
    points: Mapping[str, Point],
    edges: Mapping[str, Tuple[str, str, Sequence[Point]]],
    labels: Optional[Mapping[str, Optional[str]]] = None,
) -> Drawing:
    """Build the combinatorial drawing of a plane polyline drawing.

    ``edges`` maps an edge id to ``(u, v, bends)``; the polyline runs from
    ``points[u]`` through ``bends`` to ``points[v]``.  Crossings must be proper
    (no touching, no shared points other than common endpoints).
    """
    polys: Dict[str, List[Point]] = {}
    for e, (u, v, bends) in edges.items():
        polys[e] = [tuple(points[u])] + [tuple(b) for b in bends] + [tuple(points[v])]
    names = sorted_ids(edges)
    hits = _hits(names, polys, edges)
    hits.sort(key=lambda h: (h[1], h[3]))
    crossings: Dict[str, Crossing] = {}
    along: Dict[str, List[Tuple[float, str]]] = {e: [] for e in edges}
    for k, (e1, p1, e2, p2, sign) in enumerate(sorted(hits, key=lambda h: (names.index(h[0]), h[1])), 1):
        cid = f"c{k}"
        crossings[cid] = Crossing(cid, e1, e2, sign)
        along[e1].append((p1, cid))
        along[e2].append((p2, cid))
    seq = {e: tuple(c for _, c in sorted(along[e])) for e in edges}
    rot: Dict[str, Tuple[str, ...]] = {}
    for v, (x, y) in points.items():
        ang = []
        for e, poly in polys.items():
            if edges[e][0] == v:
                nx, ny = poly[1]
            elif edges[e][1] == v:
                nx, ny = poly[-2]
            else:
                continue
            ang.append((math.atan2(ny - y, nx - x), e))
        rot[v] = tuple(e for _, e in sorted(ang))
    verts = {v: (labels or {}).get(v) for v in sorted_ids(points)}
    graph = Graph(verts, {e: Edge(e, u, v) for e, (u, v, _) in edges.items()})
    return Drawing(graph, crossings, seq, rot)
