"""Random and hand-built fan-planar drawings.

The fuzzer works on plane polylines (:class:`Sketch`) and converts to a
combinatorial drawing after every move, so crossing orders, signs and
rotations always come from an actual plane picture.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .drawing import Crossing, Drawing, natural_key, sorted_ids
from .fan import FanCertificate, fan_certificate
from .geometry import Point, drawing_from_polylines

TAU = 2 * math.pi


@dataclass
class Sketch:
    """Vertices as points and edges as polylines ``(u, v, bends)``."""

    points: Dict[str, Point]
    edges: Dict[str, Tuple[str, str, List[Point]]]

    def copy(self) -> "Sketch":
        return Sketch(dict(self.points), {e: (u, v, list(b)) for e, (u, v, b) in self.edges.items()})

    def polyline(self, e: str) -> List[Point]:
        u, v, bends = self.edges[e]
        return [self.points[u]] + list(bends) + [self.points[v]]

    def to_drawing(self) -> Drawing:
        return drawing_from_polylines(self.points, self.edges)


@dataclass(frozen=True)
class FuzzParams:
    seed: int = 0
    n: int = 8
    moves: int = 5
    spiral: float = 1.0
    lollipop: float = 1.0
    max_crossings: int = 40
    keep_edges: float = 0.8  # probability of keeping each non-boundary edge
    base: Optional[str] = None  # "sequence" starts from the conflict-sequence picture

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if self.moves < 0:
            raise ValueError("moves must be non-negative")


def planar_seed(rng: random.Random, n: int, keep: float = 1.0) -> Sketch:
    """Straight-line triangulation grown by splitting faces of a triangle,
    then thinned by deleting interior edges."""
    pts: Dict[str, Point] = {"v1": (0.0, 0.0), "v2": (1000.0, 0.0), "v3": (500.0, 866.0)}
    tris = [("v1", "v2", "v3")]
    pairs = {("v1", "v2"), ("v2", "v3"), ("v1", "v3")}
    for i in range(4, n + 1):
        a, b, c = tris.pop(rng.randrange(len(tris)))
        w = [rng.uniform(0.2, 1.0) for _ in range(3)]
        s = sum(w)
        p = tuple(sum(wk * pts[q][j] for wk, q in zip(w, (a, b, c))) / s for j in range(2))
        v = f"v{i}"
        pts[v] = p
        tris += [(a, b, v), (b, c, v), (a, c, v)]
        pairs |= {(a, v), (b, v), (c, v)}
    boundary = {("v1", "v2"), ("v2", "v3"), ("v1", "v3")}
    ordered = sorted(pairs, key=lambda t: (natural_key(t[0]), natural_key(t[1])))
    edges = {}
    for u, v in ordered:
        if (u, v) in boundary or rng.random() < keep:
            edges[f"e{len(edges) + 1}"] = (u, v, [])
    return Sketch(pts, edges)


def _dist_point_segment(p: Point, a: Point, b: Point) -> float:
    ax, ay = b[0] - a[0], b[1] - a[1]
    L = ax * ax + ay * ay
    t = 0.0 if L == 0 else max(0.0, min(1.0, ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / L))
    return math.hypot(p[0] - a[0] - t * ax, p[1] - a[1] - t * ay)


def _clearance(sk: Sketch, v: str, skip: Sequence[str] = ()) -> float:
    """Distance from ``v`` to everything not ending at ``v``."""
    p = sk.points[v]
    best = math.inf
    for w, q in sk.points.items():
        if w != v:
            best = min(best, math.dist(p, q))
    for e, (a, b, _) in sk.edges.items():
        if e in skip:
            continue
        poly = sk.polyline(e)
        segs = list(zip(poly, poly[1:]))
        if a == v:
            segs = segs[1:]
        if b == v:
            segs = segs[:-1]
        for s, t in segs:
            best = min(best, _dist_point_segment(p, s, t))
    return best


def _first_leg(sk: Sketch, e: str, v: str) -> List[Point]:
    poly = sk.polyline(e)
    return poly if sk.edges[e][0] == v else poly[::-1]


def spiral(sk: Sketch, g: str, at: str, slot: int, turn: int = 1, per_turn: int = 24) -> Optional[Sketch]:
    """Wind the start of ``g`` around its endpoint ``at``.

    ``slot`` counts the angular gaps swept (one more than the rays crossed on
    the first pass); ``turn`` is +1 for counterclockwise, -1 for clockwise.
    """
    u, v, _ = sk.edges[g]
    if at not in (u, v):
        return None
    A = sk.points[at]
    leg = _first_leg(sk, g, at)
    theta_g = math.atan2(leg[1][1] - A[1], leg[1][0] - A[0])
    rays = []
    for e, (a, b, _) in sk.edges.items():
        if e != g and at in (a, b):
            q = _first_leg(sk, e, at)[1]
            rays.append(math.atan2(q[1] - A[1], q[0] - A[0]))
    # angular distances swept backward from theta_g, against the winding
    back = sorted(((theta_g - r) * turn) % TAU for r in rays)
    marks = sorted([x + TAU * k for x in back for k in range(3)] + [TAU * k for k in range(3)])
    if slot < 1 or slot >= len(marks):
        return None
    span = (marks[slot - 1] + marks[slot]) / 2
    gap = marks[slot] - marks[slot - 1]
    if span < 0.3 or gap < 1e-3:
        return None
    r_max = 0.4 * min(_clearance(sk, at, skip=(g,)), math.dist(A, leg[1]))
    for e, (a, b, _) in sk.edges.items():
        if e != g and at in (a, b):
            r_max = min(r_max, 0.5 * math.dist(A, _first_leg(sk, e, at)[1]))
    if r_max < 1e-3:
        return None
    steps = max(3, int(per_turn * span / TAU) + 2)
    theta0 = theta_g - turn * span
    coil = []
    # the first point stays inside the starting gap so no ray is skipped
    phis = [gap / 4] + [span * k / steps for k in range(1, steps + 1) if span * k / steps > gap / 4]
    for phi in phis:
        r = r_max * (0.15 + 0.85 * phi / span)
        ang = theta0 + turn * phi
        coil.append((A[0] + r * math.cos(ang), A[1] + r * math.sin(ang)))
    rest = leg[1:-1]
    bends = coil + rest
    out = sk.copy()
    if at == u:
        out.edges[g] = (u, v, bends)
    else:
        out.edges[g] = (u, v, bends[::-1])
    return out


def lollipop(sk: Sketch, g: str, seg: int, around: str, per_turn: int = 24) -> Optional[Sketch]:
    """Detour segment ``seg`` of ``g`` once around vertex ``around``."""
    u, v, bends = sk.edges[g]
    if around in (u, v):
        return None
    poly = sk.polyline(g)
    if not 0 <= seg < len(poly) - 1:
        return None
    p, q = poly[seg], poly[seg + 1]
    R = sk.points[around]
    P = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    L = math.dist(p, q)
    dist = math.dist(P, R)
    if L < 1e-6 or dist < 1e-6:
        return None
    psi = math.atan2(P[1] - R[1], P[0] - R[0])
    r = 0.4 * min(_clearance(sk, around), dist)
    for e, (a, b, _) in sk.edges.items():
        if around in (a, b):
            r = min(r, 0.5 * math.dist(R, _first_leg(sk, e, around)[1]))
    if r < 1e-3:
        return None
    eps = min(0.1 * L, 0.1 * r)
    dx, dy = (q[0] - p[0]) / L, (q[1] - p[1]) / L
    P1 = (P[0] - eps * dx, P[1] - eps * dy)
    P2 = (P[0] + eps * dx, P[1] + eps * dy)
    delta = 0.5 * eps / dist
    for e, (a, b, _) in sk.edges.items():
        if around in (a, b):
            w = _first_leg(sk, e, around)[1]
            ang = math.atan2(w[1] - R[1], w[0] - R[0])
            if abs((ang - psi + math.pi) % TAU - math.pi) < 3 * delta:
                return None
    # P1 lies on the side of the line R-P with positive or negative angle
    side = (P[0] - R[0]) * (P1[1] - R[1]) - (P[1] - R[1]) * (P1[0] - R[0])
    start = psi + delta if side > 0 else psi - delta
    turn = 1 if side > 0 else -1
    sweep = TAU - 2 * delta
    steps = per_turn
    ring = []
    for k in range(steps + 1):
        ang = start + turn * sweep * k / steps
        ring.append((R[0] + r * math.cos(ang), R[1] + r * math.sin(ang)))
    new_poly = poly[: seg + 1] + [P1] + ring + [P2] + poly[seg + 1 :]
    out = sk.copy()
    out.edges[g] = (u, v, new_poly[1:-1])
    return out


@dataclass
class FuzzResult:
    drawing: Drawing
    sketch: Sketch
    moves: List[str] = field(default_factory=list)


def _try(sk: Sketch, limit: int) -> Optional[Drawing]:
    try:
        d = sk.to_drawing()
    except ValueError:
        return None
    if len(d.crossings) > limit or not isinstance(fan_certificate(d), FanCertificate):
        return None
    return d


def desimplify(
    sk: Sketch,
    kind: str,
    rng: random.Random,
    max_crossings: int = 40,
    attempts: int = 30,
    before: Optional[int] = None,
) -> Optional[Tuple[Sketch, Drawing, str]]:
    """One crossing-adding detour that keeps the drawing fan-planar.

    ``kind`` is ``"spiral"`` (an edge winds around its own endpoint, crossing
    adjacent edges and, past a full turn, crossing them twice) or
    ``"lollipop"`` (an edge loops around a vertex off the edge).  Returns
    ``None`` when no attempt succeeds.
    """
    edges = sorted_ids(sk.edges)
    verts = sorted_ids(sk.points)
    for _ in range(attempts):
        g = rng.choice(edges)
        if kind == "spiral":
            at = rng.choice(sk.edges[g][:2])
            deg = sum(1 for a, b, _ in sk.edges.values() if at in (a, b))
            slot = rng.randint(1, max(1, 2 * deg))
            turn = rng.choice((1, -1))
            cand = spiral(sk, g, at, slot, turn)
            label = f"spiral {g} at {at} slot {slot} turn {turn:+d}"
        elif kind == "lollipop":
            seg = rng.randrange(len(sk.edges[g][2]) + 1)
            around = rng.choice(verts)
            cand = lollipop(sk, g, seg, around)
            label = f"lollipop {g} seg {seg} around {around}"
        else:
            raise ValueError(f"unknown move kind {kind}")
        if cand is None:
            continue
        d = _try(cand, max_crossings)
        if d is None:
            continue
        if before is None:
            before = len(sk.to_drawing().crossings)
        if len(d.crossings) <= before:
            continue
        return cand, d, label
    return None


def fuzz_full(p: FuzzParams) -> FuzzResult:
    rng = random.Random(p.seed)
    if p.base == "sequence":
        sk = sequence_sketch()
    elif p.base is None:
        sk = planar_seed(rng, rng.randint(3, p.n), p.keep_edges)
    else:
        raise ValueError(f"unknown base {p.base}")
    d = sk.to_drawing()
    log = []
    kinds, weights = ("spiral", "lollipop"), (p.spiral, p.lollipop)
    for _ in range(p.moves):
        if sum(weights) <= 0:
            break
        kind = rng.choices(kinds, weights)[0]
        step = desimplify(sk, kind, rng, p.max_crossings, before=len(d.crossings))
        if step is None:
            continue
        sk, d, label = step
        log.append(label)
    return FuzzResult(d, sk, log)


def fuzz(p: FuzzParams) -> Drawing:
    return fuzz_full(p).drawing


# -- canonical instances --------------------------------------------------------

CANONICAL_NAMES = (
    "planar_k4",
    "fig_lemma1",
    "fig1a_fan",
    "fig1b",
    "fig1c",
    "fig1d",
    "fig3a_k3",
    "fig3b_spiral",
    "fig4_multi",
    "fig_sequence",
    "ku_counterexample",
)


class UnknownName(KeyError):
    code = "unknown-name"


def relabel_crossings(d: Drawing, names: Mapping[str, str]) -> Drawing:
    """Rename crossings; ids missing from ``names`` are kept."""
    ren = lambda c: names.get(c, c)  # noqa: E731
    if len({ren(c) for c in d.crossings}) != len(d.crossings):
        raise ValueError("crossing renaming is not injective")
    crossings = {ren(k): Crossing(ren(k), c.first, c.second, c.sign) for k, c in d.crossings.items()}
    seq = {e: tuple(ren(c) for c in cs) for e, cs in d.seq.items()}
    return Drawing(d.graph, crossings, seq, d.rot)


def _planar_k4() -> Drawing:
    pts = {"a": (0, 0), "b": (10, 0), "c": (5, 8), "d": (5, 3)}
    pairs = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]
    return drawing_from_polylines(pts, {f"e{i}": (u, v, []) for i, (u, v) in enumerate(pairs, 1)})


def _fig_lemma1() -> Drawing:
    # b is crossed only by edges at its own endpoint B
    pts = {"B": (0, 0), "C": (4, 0), "W": (2, -2), "Z": (3, -2)}
    edges = {
        "b": ("B", "C", []),
        "g": ("B", "W", [(-0.5, 1), (2, 1)]),
        "h": ("B", "Z", [(-1, 1.5), (3, 1.5)]),
    }
    return relabel_crossings(drawing_from_polylines(pts, edges), {"c1": "x", "c2": "y"})


def _fig1a() -> Drawing:
    pts = {"a": (0, 0), "b": (10, 0), "c": (5, 5), "d1": (2, -5), "d2": (5, -5), "d3": (8, -5)}
    edges = {"e": ("a", "b", []), "f1": ("c", "d1", []), "f2": ("c", "d2", []), "f3": ("c", "d3", [])}
    return drawing_from_polylines(pts, edges)


def _fig1b() -> Drawing:
    pts = {"a": (0, 0), "b": (10, 0), "c1": (3, 5), "d1": (3, -5), "c2": (7, 5), "d2": (7, -5)}
    edges = {"e": ("a", "b", []), "f1": ("c1", "d1", []), "f2": ("c2", "d2", [])}
    return drawing_from_polylines(pts, edges)


def _fig1c() -> Drawing:
    # f crosses e twice, both times in the same direction
    pts = {"a": (0, 0), "b": (10, 0), "c": (5, 5), "d": (8, -1)}
    edges = {"e": ("a", "b", []), "f": ("c", "d", [(2, -3), (12, -3), (12, 2), (8, 2)])}
    return drawing_from_polylines(pts, edges)


def _fig1d() -> Drawing:
    # f crosses e down and back up: the two crossings disagree
    pts = {"a": (0, 0), "b": (10, 0), "c": (2, 3), "d": (8, 3)}
    edges = {"e": ("a", "b", []), "f": ("c", "d", [(3, -2), (7, -2)])}
    return drawing_from_polylines(pts, edges)


def _fig3a_k3() -> Drawing:
    from .fan import is_3quasiplanar

    for seed in range(10_000):
        d = fuzz(FuzzParams(seed=seed, n=3, moves=4, keep_edges=1.0))
        if d.crossings and not is_3quasiplanar(d)[0]:
            return d
    raise RuntimeError("no K3 drawing with three mutually crossing edges found")


def _fig3b_spiral() -> Drawing:
    # f crosses e at x1, winds around b and crosses e again at x2 in the same
    # sense; h crosses e between x1 and x2 and k crosses f, so shadowing f
    # along e (the usual S2 untangling) makes f cross the independent h and k
    pts = {"a": (-10.0, 0.0), "b": (10.0, 0.0), "d": (-6.0, 5.0), "F": (4.0, -1.0),
           "q": (0.0, 5.0), "s": (-4.0, 6.0)}
    edges = {
        "e": ("a", "b", []),
        "f": ("d", "F", [(-6.0, -2.0), (12.0, -2.0), (12.0, 2.0), (4.0, 2.0)]),
        "h": ("F", "q", [(0.0, -1.0)]),
        "k": ("a", "s", [(-4.0, 3.0)]),
    }
    d = drawing_from_polylines(pts, edges)
    return relabel_crossings(d, {"c1": "x1", "c2": "y", "c3": "x2", "c4": "z"})


def _fig4_multi() -> Drawing:
    pts = {"U": (0, 0), "V": (10, 0), "B": (5, 5), "W": (8, -1), "Q": (5, -1)}
    edges = {
        "b": ("U", "V", []),
        "g": ("B", "W", [(2, -3), (12, -3), (12, 2), (8, 2)]),
        "p": ("B", "Q", []),
    }
    d = drawing_from_polylines(pts, edges)
    return relabel_crossings(d, {"c1": "x", "c2": "z", "c3": "y"})


def sequence_sketch() -> Sketch:
    """Plane picture of a conflict sequence b, g, r0, b1, r2 around R and B."""
    pts = {
        "R": (0.0, 0.0),
        "B": (10.0, 0.0),
        "G": (8.0, -2.0),
        "Y0": (2.0, 2.0),
        "Y1": (-0.5, -4.0),
        "Y2": (-0.6, -1.0),
    }
    edges = {
        "b": ("G", "R", [(8.0, 4.0), (0.0, 4.0)]),
        "g": ("R", "B", []),
        "r0": ("B", "Y0", [(10.0, -3.0), (-1.0, -3.0), (-1.0, 2.0)]),
        "b1": ("R", "Y1", []),
        "r2": ("B", "Y2", [(8.5, -1.0)]),
    }
    return Sketch(pts, edges)


def _fig_sequence() -> Drawing:
    d = sequence_sketch().to_drawing()
    return relabel_crossings(d, {"c1": "w", "c2": "x", "c3": "x0", "c4": "x2", "c5": "x1"})


def _ku_counterexample() -> Drawing:
    return _fig_sequence().without_edge("g")


BUILDERS = {
    "planar_k4": _planar_k4,
    "fig_lemma1": _fig_lemma1,
    "fig1a_fan": _fig1a,
    "fig1b": _fig1b,
    "fig1c": _fig1c,
    "fig1d": _fig1d,
    "fig3a_k3": _fig3a_k3,
    "fig3b_spiral": _fig3b_spiral,
    "fig4_multi": _fig4_multi,
    "fig_sequence": _fig_sequence,
    "ku_counterexample": _ku_counterexample,
}

FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


def build_canonical(name: str) -> Drawing:
    """Construct a canonical instance from scratch (what the fixtures freeze)."""
    if name not in BUILDERS:
        raise UnknownName(name)
    return BUILDERS[name]()


def canonical(name: str) -> Drawing:
    """Canonical instance, read from its frozen fixture."""
    if name not in BUILDERS:
        raise UnknownName(name)
    from .fpd import load

    path = FIXTURE_DIR / f"{name}.fpd"
    if path.exists():
        return load(path)
    return build_canonical(name)


def write_fixtures(directory: Optional[Path] = None) -> List[Path]:
    from .fpd import serialize

    directory = Path(directory or FIXTURE_DIR)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in CANONICAL_NAMES:
        path = directory / f"{name}.fpd"
        path.write_text(serialize(build_canonical(name)), encoding="utf-8")
        out.append(path)
    return out
