"""Fan-planarity: special-vertex certificates, violations and corollary checks."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .drawing import (
    Crossing,
    Drawing,
    crossing_sign,
    natural_key,
    require_valid,
    sorted_ids,
)


@dataclass(frozen=True)
class FanCertificate:
    special: Mapping[str, str]
    # edges whose special vertex is an endpoint of the edge itself
    incident: Tuple[str, ...] = ()

    def __getitem__(self, e: str) -> str:
        return self.special[e]


@dataclass(frozen=True)
class FanViolation:
    edge: str
    reason: str  # "no-common-endpoint" | "inconsistent-sides"
    witnesses: Tuple[str, ...]

    def __str__(self) -> str:
        return f"edge {self.edge}: {self.reason} ({', '.join(self.witnesses)})"


def _vertex_order(d: Drawing, e: str, candidates) -> List[str]:
    ends = d.edge(e).ends
    return sorted(candidates, key=lambda w: (w in ends, natural_key(w)))


def special_candidates(d: Drawing, e: str) -> Union[List[str], FanViolation]:
    """All vertices that can serve as special vertex of ``e``, preferred first."""
    xs = d.seq[e]
    if not xs:
        return _vertex_order(d, e, d.graph.vertices)
    common = None
    for x in xs:
        ends = set(d.edge(d.crossings[x].other(e)).ends)
        common = ends if common is None else common & ends
    if not common:
        crossers = sorted_ids(set(d.crossing_edges(e)))
        return FanViolation(e, "no-common-endpoint", _no_common_witness(d, crossers))
    good = []
    for w in common:
        if len({crossing_sign(d, x, e, w) for x in xs}) == 1:
            good.append(w)
    if not good:
        w = min(common, key=natural_key)
        first = xs[0]
        s0 = crossing_sign(d, first, e, w)
        bad = next(x for x in xs if crossing_sign(d, x, e, w) != s0)
        return FanViolation(e, "inconsistent-sides", (first, bad))
    return _vertex_order(d, e, good)


def _no_common_witness(d: Drawing, crossers: List[str]) -> Tuple[str, ...]:
    for a, b in combinations(crossers, 2):
        if d.edge(a).shares_endpoint(d.edge(b)) is None:
            return (a, b)
    for a, b, c in combinations(crossers, 3):
        if not set(d.edge(a).ends) & set(d.edge(b).ends) & set(d.edge(c).ends):
            return (a, b, c)
    return tuple(crossers)


def check_fan_planar(d: Drawing) -> Union[FanCertificate, FanViolation]:
    require_valid(d)
    return fan_certificate(d)


def fan_certificate(d: Drawing) -> Union[FanCertificate, FanViolation]:
    """As :func:`check_fan_planar` without re-validating the drawing."""
    special: Dict[str, str] = {}
    incident = []
    for e in sorted_ids(d.graph.edges):
        cands = special_candidates(d, e)
        if isinstance(cands, FanViolation):
            return cands
        if not cands:
            # a graph on two vertices: fall back to an endpoint
            cands = sorted_ids(d.edge(e).ends)
        special[e] = cands[0]
        if cands[0] in d.edge(e).ends:
            incident.append(e)
    return FanCertificate(special, tuple(incident))


def is_fan_planar(d: Drawing) -> bool:
    return isinstance(fan_certificate(d), FanCertificate)


def certificate_violations(d: Drawing, cert: FanCertificate) -> List[str]:
    """Re-verify a certificate against the drawing; empty list when sound."""
    problems = []
    for e in d.graph.edges:
        s = cert.special.get(e)
        if s is None or s not in d.graph.vertices:
            problems.append(f"{e}: no special vertex")
            continue
        signs = set()
        for x in d.seq[e]:
            other = d.crossings[x].other(e)
            if s not in d.edge(other).ends:
                problems.append(f"{e}: crossing edge {other} misses {s}")
                break
            signs.add(crossing_sign(d, x, e, s))
        if len(signs) > 1:
            problems.append(f"{e}: inconsistent sides toward {s}")
    return problems


def normalize_special_vertices(d: Drawing, cert: FanCertificate) -> FanCertificate:
    """Move free special vertices off their edges where possible.

    Forced assignments are kept.  Edges still incident to their special vertex
    afterwards are recorded in ``incident``; those are exactly the edges on
    which the adjacent-crossing removal of the first kind applies.
    """
    special = dict(cert.special)
    incident = []
    for e in sorted_ids(d.graph.edges):
        ends = d.edge(e).ends
        if special[e] in ends:
            cands = special_candidates(d, e)
            if not isinstance(cands, FanViolation) and cands and cands[0] not in ends:
                special[e] = cands[0]
        if special[e] in ends:
            incident.append(e)
    return FanCertificate(special, tuple(incident))


def ith_crossing(d: Drawing, cert: FanCertificate, f: str, e: str, i: int) -> Crossing:
    """The ``i``-th crossing between ``f`` and ``e`` met when walking ``f``
    from the special vertex of ``e``."""
    E = cert.special[e]
    edge = d.edge(f)
    if E not in edge.ends:
        raise ValueError(f"special-not-endpoint-of-f: {E} is not an endpoint of {f}")
    xs = d.crossings_between(f, e)
    if E != edge.u:
        xs = xs[::-1]
    if i < 1 or i > len(xs):
        raise IndexError(f"too-few-crossings: {f} crosses {e} {len(xs)} times")
    return d.crossings[xs[i - 1]]


def is_3quasiplanar(d: Drawing) -> Tuple[bool, Optional[Tuple[str, str, str]]]:
    require_valid(d)
    nbrs: Dict[str, set] = {e: set() for e in d.graph.edges}
    for c in d.crossings.values():
        nbrs[c.first].add(c.second)
        nbrs[c.second].add(c.first)
    for a in sorted_ids(nbrs):
        for b in sorted_ids(x for x in nbrs[a] if natural_key(x) > natural_key(a)):
            for c in sorted_ids(nbrs[a] & nbrs[b]):
                if natural_key(c) > natural_key(b):
                    return False, (a, b, c)
    return True, None


@dataclass(frozen=True)
class DensityReport:
    n: int
    m: int
    bound: float
    satisfied: bool


def density_report(d: Drawing) -> DensityReport:
    n, m = len(d.graph.vertices), len(d.graph.edges)
    bound = 6.5 * n - 20
    return DensityReport(n, m, bound, m <= bound)
