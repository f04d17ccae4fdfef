"""Straight-line layouts of planarizations, SVG output and a geometric re-check.

The planarization is padded into a triangulation (a midpoint on every arc,
a ring of helper nodes inside every face and a hub joined to the ring),
which is 3-connected, so a barycentric placement with a fixed outer
triangle is a plane straight-line drawing.  Edges are then polylines through
their crossing nodes and arc midpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.sparse import lil_matrix
from scipy.sparse.linalg import spsolve

from .drawing import Drawing, Planarization, natural_key, require_valid, sorted_ids

Point = Tuple[float, float]
TOL = 1e-9


class LayoutError(RuntimeError):
    code = "degenerate-layout"


@dataclass
class LayoutResult:
    coordinates: Dict[tuple, Point]  # planarization node -> point
    polylines: Dict[str, List[Point]]  # per edge, from its first endpoint
    outer: List[int] = field(default_factory=list)  # chosen outer face per component


def _dart_key(dart) -> tuple:
    return (natural_key(dart[0]), dart[1], dart[2])


def _outer_order(faces: List[List[tuple]], ids: Sequence[int]) -> List[int]:
    """Faces ranked for the outer-face choice: larger first, then smallest dart."""
    return sorted(ids, key=lambda f: (-len(faces[f]), min(_dart_key(d) for d in faces[f])))


def _tutte(p: Planarization, comp: set, face_ids: List[int], outer: int) -> Dict[tuple, Point]:
    faces = p.faces
    adj: Dict[tuple, set] = {}

    def link(a, b):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    darts = [d for d in p.darts() if p.tail(d) in comp]
    for d in darts:
        if d[2] > 0:
            m = ("m", d[0], d[1])
            link(m, p.tail(d))
            link(m, p.head(d))
    for f in face_ids:
        ring = []
        walk = faces[f]
        for j, d in enumerate(walk):
            ring += [("p", f, j), ("s", f, j)]
        hub = ("h", f)
        for j, d in enumerate(walk):
            pj, sj = ("p", f, j), ("s", f, j)
            m = ("m", d[0], d[1])
            link(pj, p.tail(d))
            link(sj, m)
            link(pj, m)
            link(sj, p.head(d))
        for a, b in zip(ring, ring[1:] + ring[:1]):
            link(a, b)
        for r in ring:
            link(hub, r)
    fixed = {("h", outer): (0.0, 0.0), ("p", outer, 0): (1.0, 0.0), ("s", outer, 0): (0.5, math.sqrt(3) / 2)}
    nodes = sorted(adj, key=lambda n: tuple(str(x) for x in n))
    free = [n for n in nodes if n not in fixed]
    index = {n: i for i, n in enumerate(free)}
    A = lil_matrix((len(free), len(free)))
    bx = np.zeros(len(free))
    by = np.zeros(len(free))
    for n in free:
        i = index[n]
        A[i, i] = len(adj[n])
        for w in adj[n]:
            if w in fixed:
                bx[i] += fixed[w][0]
                by[i] += fixed[w][1]
            else:
                A[i, index[w]] -= 1
    A = A.tocsc()
    xs, ys = spsolve(A, bx), spsolve(A, by)
    pos = dict(fixed)
    for n in free:
        pos[n] = (float(xs[index[n]]), float(ys[index[n]]))
    # faces lie to the left of their darts; mirror if the solve came out clockwise
    d0 = faces[face_ids[0]][0]
    a, b, c = pos[p.tail(d0)], pos[("m", d0[0], d0[1])], pos[("p", face_ids[0], 0)]
    if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0:
        pos = {n: (-x, y) for n, (x, y) in pos.items()}
    return pos


def _normalize(points: Dict[tuple, Point]) -> Dict[tuple, Point]:
    xs = [q[0] for q in points.values()]
    ys = [q[1] for q in points.values()]
    w = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    return {n: ((q[0] - min(xs)) / w, (q[1] - min(ys)) / w) for n, q in points.items()}


def _degenerate(points: Dict[tuple, Point]) -> bool:
    arr = np.array(list(points.values()))
    if len(arr) < 2:
        return False
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    arr = arr[order]
    for i in range(len(arr)):
        j = i + 1
        while j < len(arr) and arr[j, 0] - arr[i, 0] < TOL:
            if abs(arr[j, 1] - arr[i, 1]) < TOL:
                return True
            j += 1
    return False


def layout(d: Drawing, max_tries: int = 12) -> LayoutResult:
    require_valid(d)
    p = Planarization(d)
    faces = p.faces
    comps = sorted(p.components(), key=lambda c: min((n[0], natural_key(n[1])) for n in c))
    placed: List[Dict[tuple, Point]] = []
    outers = []
    for comp in comps:
        face_ids = sorted({p.face_of(dart) for n in comp for dart in p.out[n]})
        if not face_ids:
            placed.append({n: (0.5, 0.5) for n in comp})
            outers.append(-1)
            continue
        for outer in _outer_order(faces, face_ids)[:max_tries]:
            pos = _normalize(_tutte(p, comp, face_ids, outer))
            used = {n: q for n, q in pos.items() if n[0] in ("v", "x", "m")}
            if not _degenerate(used):
                placed.append(used)
                outers.append(outer)
                break
        else:
            raise LayoutError("degenerate-layout: no outer face gives separated points")
    # tile components left to right inside the unit square
    k = max(1, len(placed))
    coords: Dict[tuple, Point] = {}
    for i, pos in enumerate(placed):
        for n, (x, y) in pos.items():
            coords[n] = ((i + 0.05 + 0.9 * x) / k, (0.05 + 0.9 * y) / k)
    polylines = {}
    for e in d.graph.edges:
        path = p.path[e]
        pts = [coords[path[0]]]
        for i in range(len(path) - 1):
            pts.append(coords[("m", e, i)])
            pts.append(coords[path[i + 1]])
        polylines[e] = pts
    out = {n: q for n, q in coords.items() if n[0] in ("v", "x")}
    return LayoutResult(out, polylines, outers)


# -- SVG --------------------------------------------------------------------------

def render_svg(d: Drawing, lay: LayoutResult, size: int = 600) -> str:
    def fmt(q: Point) -> str:
        return f"{q[0] * size:.3f},{(1 - q[1]) * size:.3f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<g fill="none" stroke="black" stroke-width="1.5">',
    ]
    for e in sorted_ids(d.graph.edges):
        pts = lay.polylines[e]
        path = "M " + " L ".join(fmt(q) for q in pts)
        out.append(f'<path id="edge-{e}" d="{path}"/>')
    out.append("</g>")
    out.append('<g font-family="sans-serif" font-size="10" text-anchor="middle">')
    for v in sorted_ids(d.graph.vertices):
        x, y = fmt(lay.coordinates[("v", v)]).split(",")
        label = d.graph.vertices[v] or v
        label = label.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        out.append(f'<circle id="vertex-{v}" cx="{x}" cy="{y}" r="6" fill="white" stroke="black"/>')
        out.append(f'<text x="{x}" y="{float(y) + 3.5:.3f}">{label}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- geometric oracle ----------------------------------------------------------

@dataclass
class RecheckReport:
    ok: bool
    mismatches: List[str]
    crossings: List[Tuple[str, str, int]]  # (first, second, sign) per geometric crossing
    orders: Dict[str, List[Tuple[str, ...]]]
    fan_planar: bool


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _angle(o: Point, q: Point) -> float:
    return math.atan2(q[1] - o[1], q[0] - o[0])


def _ccw_between(a: float, b: float, t: float) -> bool:
    """Is direction ``t`` strictly inside the counterclockwise sweep from ``a`` to ``b``?"""
    return 0 < (t - a) % (2 * math.pi) < (b - a) % (2 * math.pi)


def _events(pa: List[Point], pb: List[Point], shared_ends: set) -> List[Tuple[float, float, int]]:
    """Crossings of polylines ``pa``, ``pb`` as ``(param_a, param_b, sign)``;
    sign +1 when ``pb`` passes ``pa`` from left to right."""
    out = []
    na, nb = len(pa) - 1, len(pb) - 1
    for i in range(na):
        p, q = pa[i], pa[i + 1]
        for j in range(nb):
            r, s = pb[j], pb[j + 1]
            if max(p[0], q[0]) < min(r[0], s[0]) - TOL or max(r[0], s[0]) < min(p[0], q[0]) - TOL:
                continue
            if max(p[1], q[1]) < min(r[1], s[1]) - TOL or max(r[1], s[1]) < min(p[1], q[1]) - TOL:
                continue
            o1, o2 = _orient(p, q, r), _orient(p, q, s)
            o3, o4 = _orient(r, s, p), _orient(r, s, q)
            if o1 * o2 < 0 and o3 * o4 < 0:
                t = o3 / (o3 - o4)
                u = o1 / (o1 - o2)
                sign = 1 if o1 > 0 else -1  # pb starts on the left of pa
                out.append((i + t, j + u, sign))
    # crossings through points that are vertices of both polylines
    idx_b = {q: j for j, q in enumerate(pb)}
    for i, q in enumerate(pa):
        j = idx_b.get(q)
        if j is None:
            continue
        end_a, end_b = i in (0, na), j in (0, nb)
        if end_a or end_b:
            if q in shared_ends and end_a and end_b:
                continue
            raise LayoutError("polylines touch at an endpoint")
        a_out, a_in = _angle(q, pa[i + 1]), _angle(q, pa[i - 1])
        b_out, b_in = _angle(q, pb[j + 1]), _angle(q, pb[j - 1])
        in_left = _ccw_between(a_out, a_in, b_in)
        out_left = _ccw_between(a_out, a_in, b_out)
        if in_left == out_left:
            raise LayoutError("polylines touch without crossing")
        out.append((float(i), float(j), 1 if in_left else -1))
    return out


def geometric_recheck(d: Drawing, lay: LayoutResult) -> RecheckReport:
    names = sorted_ids(d.graph.edges)
    vpos = {v: lay.coordinates[("v", v)] for v in d.graph.vertices}
    along: Dict[str, List[Tuple[float, str, int]]] = {e: [] for e in names}
    found: List[Tuple[str, str, int, float, float]] = []
    mismatches: List[str] = []
    for a_i, e in enumerate(names):
        for f in names[a_i + 1 :]:
            shared = {vpos[w] for w in set(d.edge(e).ends) & set(d.edge(f).ends)}
            try:
                evs = _events(lay.polylines[e], lay.polylines[f], shared)
            except LayoutError as exc:
                mismatches.append(f"{e}/{f}: {exc}")
                continue
            for ta, tb, sign in evs:
                k = len(found)
                found.append((e, f, sign, ta, tb))
                along[e].append((ta, f, k))
                along[f].append((tb, e, k))
    # match geometric crossings to combinatorial ones through their ranks on both edges
    rank = {}
    for e in names:
        along[e].sort()
        for i, (_, _, k) in enumerate(along[e], start=1):
            rank[(k, e)] = i
    geo = {}
    for k, (e, f, sign, _, _) in enumerate(found):
        geo[(e, rank[(k, e)], f, rank[(k, f)])] = sign
    comb = {}
    for c in d.crossings.values():
        e, f = sorted_ids(c.edges)
        sign = c.sign if c.first == e else -c.sign
        comb[(e, d.position(c.id, e), f, d.position(c.id, f))] = sign
    for key in sorted(set(geo) | set(comb), key=lambda t: (natural_key(t[0]), t[1], natural_key(t[2]), t[3])):
        if key not in geo:
            mismatches.append(f"crossing {key} missing geometrically")
        elif key not in comb:
            mismatches.append(f"extra geometric crossing {key}")
        elif geo[key] != comb[key]:
            mismatches.append(f"sign of crossing {key} differs")
    orders = {e: [(x[1],) for x in along[e]] for e in names}
    fan = _geometric_fan(d, lay, found, along)
    from .fan import is_fan_planar

    if fan != is_fan_planar(d):
        mismatches.append(f"fan-planarity verdicts differ (geometric {fan})")
    return RecheckReport(not mismatches, mismatches, [(e, f, s) for e, f, s, _, _ in found], orders, fan)


def _geometric_fan(d: Drawing, lay: LayoutResult, found, along) -> bool:
    """Brute-force fan test from coordinates: every edge's crossers share an
    endpoint lying on one common side of the edge."""
    for e in d.graph.edges:
        crossers = {f for _, f, _ in along[e]}
        if not crossers:
            continue
        common = set.intersection(*(set(d.edge(f).ends) for f in crossers))
        good = False
        for w in common:
            sides = set()
            for _, f, k in along[e]:
                first, _, sign, _, _ = found[k]
                # sign is +1 when the later-named polyline passes the earlier one
                # from left to right, i.e. it enters from the left
                s = sign if first == e else -sign
                toward_end = w == d.edge(f).v
                sides.add(s if toward_end else -s)
            if len(sides) == 1:
                good = True
                break
        if not good:
            return False
    return True
