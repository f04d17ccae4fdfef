"""Redrawing steps that turn a fan-planar drawing into a simple one.

Every step redraws exactly one edge through :func:`reroute.apply_route`, and
every step strictly lowers the number of crossings.  Branches that the
underlying proofs rule out raise :class:`InternalContradiction` instead of
being papered over.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .drawing import Drawing, Planarization, detect_configurations, require_valid, sorted_ids
from .fan import (
    FanCertificate,
    FanViolation,
    fan_certificate,
    normalize_special_vertices,
)
from .reroute import RouteSpec, Shadow, Tail, V, X, apply_route


class EngineError(RuntimeError):
    code = "engine-error"


class InternalContradiction(EngineError):
    code = "internal-contradiction"


class PreconditionViolation(EngineError):
    code = "precondition-violation"


class DanglingReference(EngineError):
    code = "dangling-reference"


class NotFanPlanar(EngineError):
    code = "not-fan-planar"

    def __init__(self, violation: FanViolation) -> None:
        super().__init__(f"drawing is not fan-planar: {violation}")
        self.violation = violation


@dataclass(frozen=True)
class StepRecord:
    rule: str  # "Lemma1" | "Lemma2" | "Lemma4-redraw" | "Lemma5"
    target: str
    touched: Tuple[str, ...]
    route: RouteSpec
    before: int
    after: int
    new_crossed: Tuple[str, ...] = ()
    replaced_crossed: Tuple[str, ...] = ()

    def line(self) -> str:
        return f"{self.rule}\t{self.target}\t{self.before}\t{self.after}\t{self.route}"


@dataclass
class Trace:
    steps: List[StepRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def extend(self, other: "Trace") -> None:
        self.steps.extend(other.steps)

    def lines(self) -> List[str]:
        return [s.line() for s in self.steps]

    def strictly_decreasing(self) -> bool:
        ok = all(s.after < s.before for s in self.steps)
        return ok and all(a.after == b.before for a, b in zip(self.steps, self.steps[1:]))


def _certify(d: Drawing) -> FanCertificate:
    cert = fan_certificate(d)
    if isinstance(cert, FanViolation):
        raise NotFanPlanar(cert)
    return cert


def _run(d: Drawing, rule: str, spec: RouteSpec, touched) -> Tuple[Drawing, StepRecord]:
    res = apply_route(d, spec)
    out = res.drawing
    new_crossed = tuple(out.crossings[c].other(spec.target) for c in res.added)
    replaced = tuple(d.crossings[c].other(spec.target) for c in res.removed)
    rec = StepRecord(
        rule,
        spec.target,
        tuple(touched),
        spec,
        len(d.crossings),
        len(out.crossings),
        new_crossed,
        replaced,
    )
    if rec.after >= rec.before:
        raise InternalContradiction(f"{rule} on {spec.target} did not remove a crossing")
    after = fan_certificate(out)
    if isinstance(after, FanViolation):
        raise InternalContradiction(f"{rule} on {spec.target} broke fan-planarity: {after}")
    return out, rec


def _first_from(d: Drawing, e: str, w: str) -> Optional[str]:
    xs = d.seq[e]
    if not xs:
        return None
    return xs[0] if w == d.edge(e).u else xs[-1]


def _between(d: Drawing, e: str, w: str, c: str) -> List[str]:
    """Crossings of ``e`` strictly between its endpoint ``w`` and crossing ``c``,
    ordered from ``w``."""
    xs = list(d.seq[e])
    if w != d.edge(e).u:
        xs.reverse()
    return xs[: xs.index(c)]


# -- removal of crossings on edges incident to their special vertex ---------

def lemma1_route(d: Drawing, cert: FanCertificate) -> Optional[Tuple[RouteSpec, Tuple[str, ...]]]:
    for b in sorted_ids(d.graph.edges):
        B = cert.special[b]
        if B not in d.edge(b).ends or not d.seq[b]:
            continue
        x = _first_from(d, b, B)
        g = d.crossings[x].other(b)
        if B not in d.edge(g).ends:
            raise InternalContradiction(f"edge {g} crosses {b} but misses its special vertex {B}")
        W = d.edge(g).other(B)
        spec = RouteSpec(g, (Shadow(b, V(B), X(x)), Tail(X(x), V(W))), frozenset({x}))
        return spec, (b, g)
    return None


def lemma1_step(d: Drawing, cert: FanCertificate) -> Optional[Tuple[Drawing, StepRecord]]:
    found = lemma1_route(d, cert)
    if found is None:
        return None
    spec, touched = found
    return _run(d, "Lemma1", spec, touched)


# -- removal of multiple crossings ------------------------------------------

def _rank_from(d: Drawing, g: str, b: str, B: str) -> Dict[str, int]:
    xs = d.crossings_between(g, b)
    if B != d.edge(g).u:
        xs = xs[::-1]
    return {c: i for i, c in enumerate(xs, start=1)}


def lemma2_route(d: Drawing, cert: FanCertificate) -> Optional[Tuple[RouteSpec, Tuple[str, ...]]]:
    for b in sorted_ids(d.graph.edges):
        B = cert.special[b]
        if B in d.edge(b).ends:
            continue
        counts = Counter(d.crossing_edges(b))
        if not counts or max(counts.values()) < 2:
            continue
        for order in (list(d.seq[b]), list(d.seq[b])[::-1]):
            seen = set()
            for k, y in enumerate(order):
                g = d.crossings[y].other(b)
                rank = _rank_from(d, g, b, B)
                seen.add(y)
                if rank[y] != 2:
                    continue
                x = next(c for c, i in rank.items() if i == 1)
                if x not in seen:
                    continue
                z = order[k - 1]
                p = d.crossings[z].other(b)
                if B not in d.edge(g).ends or B not in d.edge(p).ends:
                    raise InternalContradiction(f"edges crossing {b} miss its special vertex {B}")
                W = d.edge(g).other(B)
                if p == g:
                    if z != x:
                        raise InternalContradiction(
                            f"crossing {z} next to {y} on {b} is a later crossing of {g}"
                        )
                    segs = (Tail(V(W), X(y)), Shadow(b, X(y), X(x)), Tail(X(x), V(B)))
                else:
                    if _rank_from(d, p, b, B)[z] != 1:
                        raise InternalContradiction(f"{z} is not the first crossing of {p} with {b}")
                    segs = (Tail(V(W), X(y)), Shadow(b, X(y), X(z)), Shadow(p, X(z), V(B)))
                return RouteSpec(g, segs, frozenset({x})), (b, g, p)
        raise InternalContradiction(f"no edge crossing {b} twice found by the traversal")
    return None


def lemma2_step(d: Drawing, cert: FanCertificate) -> Optional[Tuple[Drawing, StepRecord]]:
    found = lemma2_route(d, cert)
    if found is None:
        return None
    spec, touched = found
    out, rec = _run(d, "Lemma2", spec, touched)
    if Counter(rec.new_crossed) - Counter(rec.replaced_crossed):
        raise InternalContradiction(f"Lemma2 on {spec.target}: new crossings are not injected")
    return out, rec


def normalize(d: Drawing) -> Tuple[Drawing, FanCertificate, Trace]:
    """Exhaustively remove crossings on edges incident to their special vertex
    and multiple crossings; afterwards no pair crosses twice and no crossed
    edge has an incident special vertex."""
    trace = Trace()
    while True:
        cert = _certify(d)
        step = lemma1_step(d, cert) or lemma2_step(d, cert)
        if step is None:
            return d, normalize_special_vertices(d, cert), trace
        d, rec = step
        trace.steps.append(rec)


def normalized(d: Drawing, cert: FanCertificate) -> List[str]:
    """Violations of the normalized state (empty when it holds)."""
    problems = []
    rep = detect_configurations(d)
    if rep.s2:
        problems.append(f"pairs crossing more than once: {rep.s2}")
    for e in sorted_ids(d.graph.edges):
        if d.seq[e] and cert.special[e] in d.edge(e).ends:
            problems.append(f"edge {e} is incident to its special vertex")
    return problems


# -- sequence of conflicting edges ------------------------------------------

@dataclass(frozen=True)
class Redraw:
    route: RouteSpec
    exit: str  # which early exit produced it


@dataclass(frozen=True)
class SequenceWitness:
    b: str
    g: str
    x: str
    chain: Tuple[str, ...]  # r0, b1, r2, ..., rk
    colors: Tuple[str, ...]  # "red" / "black" per chain element
    xs: Tuple[str, ...]  # x0 .. xk
    B: str
    R: str
    G: str
    regions: Tuple[FrozenSet[Tuple], ...] = ()

    @property
    def k(self) -> int:
        return len(self.chain) - 1


def build_conflict_sequence(
    d: Drawing, cert: FanCertificate, b: str, g: str, x: str
) -> Union[Redraw, SequenceWitness]:
    problems = normalized(d, cert)
    if problems:
        raise PreconditionViolation("; ".join(problems))
    bx, gx = d.edge(b), d.edge(g)
    R = bx.shares_endpoint(gx)
    if R is None or set(d.crossings[x].edges) != {b, g}:
        raise PreconditionViolation(f"{b} and {g} are not adjacent edges crossing at {x}")
    G, B = bx.other(R), gx.other(R)
    if cert.special[b] != B or cert.special[g] != G:
        raise PreconditionViolation("special vertices of b and g are not B and G")

    def redraw(segs, exit_name, removed=frozenset()):
        return Redraw(RouteSpec(g, segs, frozenset(removed)), exit_name)

    x0 = _first_from(d, b, R)
    if x0 == x:
        return redraw((Shadow(b, V(R), X(x)), Tail(X(x), V(B))), "base:x0=x", {x})
    r0 = d.crossings[x0].other(b)
    if B not in d.edge(r0).ends:
        raise InternalContradiction(f"{r0} crosses {b} but misses {B}")
    x1 = _first_from(d, r0, B)
    to_b = (Shadow(b, V(R), X(x0)), Shadow(r0, X(x0), V(B)))
    if x1 == x0:
        return redraw(to_b, "base:x1=x0")
    if cert.special[r0] == G:
        return redraw(to_b, "base:special-G")
    if cert.special[r0] != R:
        raise InternalContradiction(f"special vertex of {r0} is neither {G} nor {R}")
    b1 = d.crossings[x1].other(r0)
    chain = [r0, b1]
    xs = [x0, x1]
    used = {b, g, r0}

    def admit(e: str, incident_to: str) -> None:
        if e in used:
            raise InternalContradiction(f"edge {e} repeats in the conflict sequence")
        if incident_to not in d.edge(e).ends:
            raise InternalContradiction(f"edge {e} in the conflict sequence misses {incident_to}")
        used.add(e)

    admit(b1, R)
    while True:
        j = len(chain) - 1
        q, xj = chain[j], xs[j]
        if j % 2 == 1:
            c = _first_from(d, q, R)
            if c == xj:
                segs = (Shadow(q, V(R), X(xj)), Shadow(chain[j - 1], X(xj), V(B)))
                return redraw(segs, "case2")
            r = d.crossings[c].other(q)
            admit(r, B)
            chain.append(r)
            xs.append(c)
            members = {b, g} | set(chain)
            hits = [y for y in _between(d, r, B, c)[::-1] if d.crossings[y].other(r) in members]
            if hits:
                if d.crossings[hits[0]].other(r) != b:
                    raise InternalContradiction(f"arc of {r} before {c} is crossed by a sequence edge")
                w = SequenceWitness(
                    b, g, x, tuple(chain),
                    tuple("red" if i % 2 == 0 else "black" for i in range(len(chain))),
                    tuple(xs), B, R, G,
                )
                regions = tuple(_region(d, w, i)[0] for i in range(w.k))
                return SequenceWitness(b, g, x, w.chain, w.colors, w.xs, B, R, G, regions)
        else:
            c = _first_from(d, q, B)
            if c == xj:
                segs = (Shadow(chain[j - 1], V(R), X(xj)), Shadow(q, X(xj), V(B)))
                return redraw(segs, "case1")
            nb = d.crossings[c].other(q)
            admit(nb, R)
            chain.append(nb)
            xs.append(c)


def apply_redraw(d: Drawing, r: Redraw) -> Tuple[Drawing, StepRecord]:
    spec = r.route
    return _run(d, "Lemma4-redraw", spec, (spec.target,))


# -- witness checking --------------------------------------------------------

def _walk(p: Planarization, e: str, a: tuple, c: tuple) -> List:
    path = p.path[e]
    i, j = path.index(a), path.index(c)
    if i < j:
        return [(e, k, 1) for k in range(i, j)]
    return [(e, k, -1) for k in range(i - 1, j - 1, -1)]


def _alpha(p: Planarization, w: SequenceWitness, i: int) -> List:
    """Darts of the closed curve through g, q_i and q_{i-1} in the subdrawing."""
    chain = (w.b,) + w.chain  # chain[i + 1] is q_i
    q, prev = chain[i + 1], chain[i]
    xi = ("x", w.xs[i])
    darts = _walk(p, w.g, ("v", w.R), ("v", w.B))
    red, black = (q, prev) if i % 2 == 0 else (prev, q)
    darts += _walk(p, red, ("v", w.B), xi)
    darts += _walk(p, black, xi, ("v", w.R))
    return darts


def _side_faces(p: Planarization, cycle: List, seeds: List) -> set:
    arcs = {(e, k) for e, k, _ in cycle}
    region = {p.face_of(s) for s in seeds}
    stack = list(region)
    faces = p.faces
    while stack:
        f = stack.pop()
        for dart in faces[f]:
            if (dart[0], dart[1]) in arcs:
                continue
            g = p.face_of(p.twin(dart))
            if g not in region:
                region.add(g)
                stack.append(g)
    return region


def _face_key(p: Planarization, f: int) -> FrozenSet:
    return frozenset(p.faces[f])


def _region(d: Drawing, w: SequenceWitness, i: int, sub: Optional[int] = None):
    """Region bounded by the closed curve of index ``i`` on the side of G,
    inside the subdrawing induced by the first ``sub`` sequence edges."""
    sub = i if sub is None else sub
    gi = d.restrict((w.b, w.g) + w.chain[: sub + 1])
    p = Planarization(gi)
    cyc = _alpha(p, w, i)
    nodes = [p.tail(dart) for dart in cyc]
    if len(set(nodes)) != len(nodes):
        raise ValueError("closed curve is not simple")
    left = _side_faces(p, cyc, cyc)
    right = _side_faces(p, cyc, [p.twin(dart) for dart in cyc])
    if left & right:
        raise ValueError("closed curve does not separate")
    gfaces = {p.face_of(dart) for dart in p.out[("v", w.G)]}
    region = left if gfaces <= left else right
    if not gfaces <= region:
        raise ValueError("G lies on the closed curve")
    return frozenset(_face_key(p, f) for f in region), p, region, set(nodes), cyc


def check_sequence_witness(
    d: Drawing, w: SequenceWitness, cert: Optional[FanCertificate] = None
) -> Tuple[bool, Dict[str, List[str]]]:
    """Verify the invariants of a conflict sequence; returns ``(ok, report)``
    where ``report`` maps invariant names to failure messages."""
    report: Dict[str, List[str]] = {n: [] for n in ("refs", "I1", "I2", "I3", "I4", "I5", "I6", "remark", "exit")}
    names = (w.b, w.g) + w.chain
    missing = [e for e in names if e not in d.graph.edges]
    missing += [c for c in (w.x,) + w.xs if c not in d.crossings]
    missing += [v for v in (w.B, w.R, w.G) if v not in d.graph.vertices]
    if missing:
        raise DanglingReference(f"witness names unknown elements {missing}")
    if len(set(names)) != len(names):
        report["refs"].append("sequence edges are not pairwise distinct")
    if len(w.xs) != len(w.chain) or len(w.colors) != len(w.chain):
        report["refs"].append("chain, colors and crossings differ in length")
        return False, report
    if cert is None:
        cert = fan_certificate(d)
        if isinstance(cert, FanViolation):
            report["refs"].append(f"drawing not fan-planar: {cert}")
            return False, report
    B, R = w.B, w.R
    for e, col in zip(w.chain, w.colors):
        ends = d.edge(e).ends
        if col == "black":
            if cert.special[e] != B:
                report["I1"].append(f"black edge {e} has special vertex {cert.special[e]}, not {B}")
            if R not in ends:
                report["I2"].append(f"black edge {e} is not incident to {R}")
        else:
            if B not in ends:
                report["I1"].append(f"red edge {e} is not incident to {B}")
            if cert.special[e] != R:
                report["I2"].append(f"red edge {e} has special vertex {cert.special[e]}, not {R}")
    # crossings x_i join consecutive chain members (x_0 lies on b)
    full = (w.b,) + w.chain
    for i, c in enumerate(w.xs):
        if set(d.crossings[c].edges) != {full[i], full[i + 1]}:
            report["I3"].append(f"x{i}={c} is not a crossing of {full[i]} and {full[i + 1]}")
    if _first_from(d, w.b, R) != w.xs[0]:
        report["I3"].append("x0 is not the first crossing of b from R")
    for i in range(len(w.chain) - 1):
        e, col = w.chain[i], w.colors[i]
        start = R if col == "black" else B
        if _first_from(d, e, start) != w.xs[i + 1]:
            report["I3"].append(f"first crossing of {e} from {start} is not x{i + 1}")
    blacks = [e for e, col in zip(w.chain, w.colors) if col == "black"]
    reds = [e for e, col in zip(w.chain, w.colors) if col == "red"]
    r0, rk = w.chain[0], w.chain[-1]
    crossed = lambda e: set(d.crossing_edges(e))  # noqa: E731
    if len(w.chain) > 1 and (crossed(r0) & set(blacks)) != {w.chain[1]}:
        report["I4"].append(f"{r0} crosses black edges {sorted(crossed(r0) & set(blacks))}")
    if crossed(w.b) & set(reds) != {r0, rk}:
        report["I4"].append(f"b crosses red edges {sorted(crossed(w.b) & set(reds))}")
    k = w.k
    for i in range(k):
        try:
            key, p, region, cyc_nodes, _ = _region(d, w, i)
        except ValueError as exc:
            report["I5"].append(f"f{i}: {exc}")
            continue
        if w.regions and (i >= len(w.regions) or w.regions[i] != key):
            report["I5"].append(f"f{i} differs from the recorded region")
        inner_nodes = {
            p.tail(dart) for f in region for dart in p.faces[f]
        } - cyc_nodes
        if inner_nodes != {("v", w.G)}:
            report["I5"].append(f"f{i} contains {sorted(n[1] for n in inner_nodes)}")
        inner_arcs = {
            (dart[0], dart[1]) for f in region for dart in p.faces[f]
        } - {(e, a) for e, a, _ in _alpha(p, w, i)}
        arc_edges = {e for e, _ in inner_arcs}
        if not arc_edges <= {w.b, r0} or w.b not in arc_edges:
            report["I5"].append(f"f{i} contains arcs of {sorted(arc_edges)}")
        bpath = p.path[w.b]
        gi = bpath.index(("v", w.G))
        nxt = bpath[gi - 1] if gi else bpath[1]
        if nxt != ("x", w.x):
            report["I5"].append(f"in f{i} the arc of b from G does not reach x")
        if i > 0:
            try:
                key_prev, p2, region_prev, _, _ = _region(d, w, i - 1, sub=i)
                _, _, region_i, _, _ = _region(d, w, i, sub=i)
            except ValueError as exc:
                report["I6"].append(f"f{i - 1} in subdrawing {i}: {exc}")
                continue
            diff = region_prev - region_i
            if not region_i < region_prev or len(diff) != 1:
                report["I6"].append(f"f{i} is not f{i - 1} minus one face")
            else:
                tri = p2.faces[next(iter(diff))]
                S = ("v", R) if i % 2 == 1 else ("v", B)
                want_nodes = {S, ("x", w.xs[i]), ("x", w.xs[i - 1])}
                want_edges = {full[i + 1], full[i], full[i - 1]}
                if len(tri) != 3 or {p2.tail(dart) for dart in tri} != want_nodes or {
                    dart[0] for dart in tri
                } != want_edges:
                    report["I6"].append(f"f{i - 1} minus f{i} is not the empty triangle")
        gsub = d.restrict((w.b, w.g) + w.chain[: i + 1])
        if not set(gsub.crossing_edges(w.g)) <= {w.b, r0}:
            report["remark"].append(f"in subdrawing {i} g crosses {sorted(set(gsub.crossing_edges(w.g)))}")
    if not any(d.crossings[c].other(rk) == w.b for c in _between(d, rk, B, w.xs[-1])):
        report["exit"].append(f"{rk} does not cross b between {B} and x{k}")
    ok = not any(report.values())
    return ok, report


def lemma5_route(d: Drawing, w: SequenceWitness) -> RouteSpec:
    span = _between(d, w.g, w.R, w.x)
    if span:
        raise InternalContradiction(
            f"arc of {w.g} between {w.R} and {w.x} is crossed at {span}; redrawn b would gain crossings"
        )
    return RouteSpec(w.b, (Shadow(w.g, V(w.R), X(w.x)), Tail(X(w.x), V(w.G))), frozenset({w.x}))


def lemma5_step(
    d: Drawing, cert: FanCertificate, w: SequenceWitness
) -> Tuple[Drawing, StepRecord]:
    ok, report = check_sequence_witness(d, w, cert)
    if not ok:
        bad = {k: v for k, v in report.items() if v}
        raise PreconditionViolation(f"sequence witness rejected: {bad}")
    spec = lemma5_route(d, w)
    out, rec = _run(d, "Lemma5", spec, (w.b, w.g) + w.chain)
    if rec.new_crossed:
        raise InternalContradiction("redrawn b acquired new crossings")
    return out, rec


# -- driver -------------------------------------------------------------------

def pick_adjacent_crossing(d: Drawing) -> Optional[Tuple[str, str, str]]:
    for c in sorted_ids(d.crossings):
        cr = d.crossings[c]
        if d.adjacent(cr.first, cr.second):
            return cr.first, cr.second, c
    return None


@dataclass
class SimplifyResult:
    drawing: Drawing
    trace: Trace
    witnesses: List[SequenceWitness] = field(default_factory=list)

    def __iter__(self):
        return iter((self.drawing, self.trace))


def simplify(d: Drawing, check_witnesses: bool = True) -> SimplifyResult:
    """Redraw ``d`` into a simple fan-planar drawing of the same graph."""
    require_valid(d)
    _certify(d)
    trace = Trace()
    witnesses: List[SequenceWitness] = []
    while True:
        d, cert, t = normalize(d)
        trace.extend(t)
        pick = pick_adjacent_crossing(d)
        if pick is None:
            break
        b, g, x = pick
        out = build_conflict_sequence(d, cert, b, g, x)
        if isinstance(out, Redraw):
            d, rec = apply_redraw(d, out)
        else:
            witnesses.append(out)
            if check_witnesses:
                d, rec = lemma5_step(d, cert, out)
            else:
                d, rec = _run(d, "Lemma5", lemma5_route(d, out), (out.b, out.g) + out.chain)
        trace.steps.append(rec)
    rep = detect_configurations(d)
    if rep.s1 or rep.s2:
        raise InternalContradiction("driver stopped on a non-simple drawing")
    return SimplifyResult(d, trace, witnesses)
