"""The ``fpd`` text format for drawings.

::

    fpd 1
    # comment
    v <id> [label]
    e <id> <v> <v>
    x <id> <edge> <pos> <edge> <pos> <+|->
    rot <v>: <edge> <edge> ...

Positions are 1-based along the edge's reference orientation.  The first
edge of an ``x`` line is the crossing's ``first`` edge.  Serialization is
canonical: records sorted by identifier, rotations started at the smallest
edge identifier.
"""
from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .drawing import (
    Crossing,
    Drawing,
    DrawingError,
    Edge,
    Graph,
    _canonical_cycle,
    sorted_ids,
    validate_drawing,
)

HEADER = "fpd 1"
_IDENT = re.compile(r"[A-Za-z0-9_.\-]+\Z")


class FormatError(ValueError):
    code = "format-error"


class FpdSyntaxError(FormatError):
    """Malformed line; carries 1-based ``line`` and ``col``."""

    code = "syntax-error"

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class FpdSemanticError(FormatError):
    code = "semantic-error"


def _tokens(text: str) -> List[Tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based start columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]


def parse(text: str) -> Drawing:
    vertices: Dict[str, Optional[str]] = {}
    edges: Dict[str, Edge] = {}
    xrecs: Dict[str, Tuple[str, int, str, int, int, int]] = {}
    rot: Dict[str, Tuple[str, ...]] = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body)
        if not toks:
            continue

        def fail(msg: str, k: int = 0) -> None:
            col = toks[k][1] if k < len(toks) else len(body.rstrip()) + 1
            raise FpdSyntaxError(msg, lineno, col)

        def ident(k: int, what: str) -> str:
            if k >= len(toks):
                fail(f"missing {what}", k)
            if not _IDENT.match(toks[k][0]):
                fail(f"bad {what} {toks[k][0]!r}", k)
            return toks[k][0]

        kw = toks[0][0]
        if not header_seen:
            if [t for t, _ in toks] != ["fpd", "1"]:
                fail("expected header 'fpd 1'")
            header_seen = True
            continue
        if kw == "v":
            v = ident(1, "vertex id")
            label = body[toks[2][1] - 1 :].strip() if len(toks) > 2 else None
            if v in vertices:
                raise FpdSemanticError(f"line {lineno}: duplicate vertex {v}")
            vertices[v] = label
        elif kw == "e":
            if len(toks) != 4:
                fail("edge line needs: e <id> <v> <v>", min(len(toks), 4))
            e, a, b = ident(1, "edge id"), ident(2, "vertex id"), ident(3, "vertex id")
            if e in edges:
                raise FpdSemanticError(f"line {lineno}: duplicate edge {e}")
            edges[e] = Edge(e, a, b)
        elif kw == "x":
            if len(toks) != 7:
                fail("crossing line needs: x <id> <edge> <pos> <edge> <pos> <+|->", min(len(toks), 7))
            c, e1, e2 = ident(1, "crossing id"), ident(2, "edge id"), ident(4, "edge id")
            pos = []
            for k in (3, 5):
                if not toks[k][0].isdigit() or int(toks[k][0]) < 1:
                    fail(f"bad position {toks[k][0]!r}", k)
                pos.append(int(toks[k][0]))
            if toks[6][0] not in ("+", "-"):
                fail(f"bad sign {toks[6][0]!r}", 6)
            if c in xrecs:
                raise FpdSemanticError(f"line {lineno}: duplicate crossing {c}")
            xrecs[c] = (e1, pos[0], e2, pos[1], 1 if toks[6][0] == "+" else -1, lineno)
        elif kw == "rot":
            if len(toks) < 2 or not toks[1][0].endswith(":"):
                fail("rotation line needs: rot <v>: <edges>", 1)
            v = toks[1][0][:-1]
            if not _IDENT.match(v):
                fail(f"bad vertex id {v!r}", 1)
            darts = tuple(ident(k, "edge id") for k in range(2, len(toks)))
            if v in rot:
                raise FpdSemanticError(f"line {lineno}: duplicate rotation for {v}")
            rot[v] = darts
        else:
            fail(f"unknown record {kw!r}")
    if not header_seen:
        raise FpdSyntaxError("missing header 'fpd 1'", 1, 1)

    slots: Dict[str, Dict[int, str]] = {e: {} for e in edges}
    crossings: Dict[str, Crossing] = {}
    for c, (e1, p1, e2, p2, sign, lineno) in xrecs.items():
        for e, p in ((e1, p1), (e2, p2)):
            if e not in edges:
                raise FpdSemanticError(f"line {lineno}: dangling crossing {c} names unknown edge {e}")
            if p in slots[e]:
                raise FpdSemanticError(
                    f"line {lineno}: crossings {slots[e][p]} and {c} share position {p} on {e}"
                )
            slots[e][p] = c
        crossings[c] = Crossing(c, e1, e2, sign)
    seq = {}
    for e, s in slots.items():
        if sorted(s) != list(range(1, len(s) + 1)):
            raise FpdSemanticError(f"crossing positions on edge {e} are not 1..{len(s)}")
        seq[e] = tuple(s[p] for p in sorted(s))
    for v in vertices:
        rot.setdefault(v, ())
    for v in rot:
        if v not in vertices:
            raise FpdSemanticError(f"rotation given for unknown vertex {v}")
    d = Drawing(Graph(vertices, edges), crossings, seq, rot)
    report = validate_drawing(d)
    if not report.ok:
        raise FpdSemanticError("; ".join(report.violations))
    return d


def serialize(d: Drawing) -> str:
    report = validate_drawing(d)
    if not report.ok:
        raise DrawingError("; ".join(report.violations))
    names = list(d.graph.vertices) + list(d.graph.edges) + list(d.crossings)
    bad = [n for n in names if not _IDENT.match(n)]
    if bad:
        raise DrawingError(f"identifiers not representable: {bad}")
    lines = [HEADER]
    for v in sorted_ids(d.graph.vertices):
        label = d.graph.vertices[v]
        if label is None:
            lines.append(f"v {v}")
            continue
        if label != label.strip() or not label or "#" in label or "\n" in label:
            raise DrawingError(f"label of {v} is not representable")
        lines.append(f"v {v} {label}")
    for e in sorted_ids(d.graph.edges):
        edge = d.edge(e)
        lines.append(f"e {e} {edge.u} {edge.v}")
    for c in sorted_ids(d.crossings):
        x = d.crossings[c]
        sign = "+" if x.sign > 0 else "-"
        lines.append(
            f"x {c} {x.first} {d.position(c, x.first)} {x.second} {d.position(c, x.second)} {sign}"
        )
    for v in sorted_ids(d.graph.vertices):
        darts = _canonical_cycle(d.rot[v])
        lines.append(f"rot {v}: {' '.join(darts)}".rstrip())
    return "\n".join(lines) + "\n"


def load(path) -> Drawing:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(d: Drawing, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(d))
