"""Command line: ``fanplanar check|simplify|fuzz|render``.

Exit codes: 0 ok, 1 a requested property is false, 2 bad input,
3 internal contradiction.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import List, Optional

from .drawing import DrawingError, detect_configurations
from .engine import EngineError, InternalContradiction, NotFanPlanar, simplify
from .fan import FanViolation, check_fan_planar, density_report, is_3quasiplanar
from .fpd import FormatError, parse, serialize
from .reroute import RerouteError

OK, FALSE, INPUT_ERROR, CONTRADICTION = 0, 1, 2, 3


def _read(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse(text)


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        _write_atomic(Path(out), text)


def cmd_check(args) -> int:
    d = _read(args.file)
    wanted = [k for k in ("fan", "simple", "quasi3", "density", "configs") if getattr(args, k)]
    if not wanted:
        wanted = ["fan", "simple"]
    ok = True
    for prop in wanted:
        if prop == "fan":
            res = check_fan_planar(d)
            holds = not isinstance(res, FanViolation)
            print(f"fan-planar: {'yes' if holds else 'no'}" + ("" if holds else f"  [{res}]"))
            if not holds:
                rep = detect_configurations(d)
                for a, c1, c2 in rep.sf1:
                    print(f"  SF1: {c1} and {c2} are independent and both cross {a}")
                for a, c1, c2 in rep.sf2:
                    print(f"  SF2: {c1} and {c2} cross {a} from different sides")
        elif prop == "simple":
            rep = detect_configurations(d)
            holds = not rep.s1 and not rep.s2
            print(f"simple: {'yes' if holds else 'no'}")
            for a, b, c in rep.s1:
                print(f"  S1: adjacent edges {a} and {b} cross at {c}")
            for a, b in rep.s2:
                print(f"  S2: {a} and {b} cross more than once")
        elif prop == "quasi3":
            holds, triple = is_3quasiplanar(d)
            print(f"3-quasiplanar: {'yes' if holds else 'no'}" + ("" if holds else f"  [{', '.join(triple)}]"))
        elif prop == "density":
            rep = density_report(d)
            holds = rep.satisfied
            print(f"density: m={rep.m} bound={rep.bound:g} {'ok' if holds else 'exceeded'}")
        else:
            rep = detect_configurations(d)
            holds = not (rep.s1 or rep.s2 or rep.sf1 or rep.sf2)
            print(f"configurations: S1={len(rep.s1)} S2={len(rep.s2)} SF1={len(rep.sf1)} SF2={len(rep.sf2)}")
            for name in ("s1", "s2", "sf1", "sf2"):
                for item in getattr(rep, name):
                    print(f"  {name.upper()}: {' '.join(item)}")
        ok = ok and holds
    return OK if ok else FALSE


def cmd_simplify(args) -> int:
    d = _read(args.file)
    res = simplify(d)
    if args.trace:
        for line in res.trace.lines():
            print(line, file=sys.stderr)
    _emit(serialize(res.drawing), args.output)
    return OK


def cmd_fuzz(args) -> int:
    from .generators import FuzzParams, fuzz

    if args.count < 1:
        raise ValueError("--count must be positive")
    if args.count > 1 and not args.output:
        raise ValueError("-o DIR is required with --count > 1")
    for i in range(args.count):
        p = FuzzParams(seed=args.seed + i, n=args.n, moves=args.moves)
        text = serialize(fuzz(p))
        if args.output:
            _write_atomic(Path(args.output) / f"fuzz_{args.seed + i:06d}.fpd", text)
        else:
            sys.stdout.write(text)
    return OK


def cmd_render(args) -> int:
    from .layout import layout, render_svg

    d = _read(args.file)
    _emit(render_svg(d, layout(d)), args.output)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fanplanar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="report properties of a drawing")
    c.add_argument("file")
    for flag, text in (
        ("--fan", "fan-planarity"),
        ("--simple", "absence of S1 and S2"),
        ("--quasi3", "3-quasiplanarity"),
        ("--density", "edge bound 6.5n-20"),
        ("--configs", "list all forbidden configurations"),
    ):
        c.add_argument(flag, action="store_true", help=text)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("simplify", help="redraw into a simple fan-planar drawing")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.add_argument("--trace", action="store_true", help="print one line per step on stderr")
    s.set_defaults(func=cmd_simplify)

    f = sub.add_parser("fuzz", help="emit random non-simple fan-planar drawings")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--n", type=int, default=8)
    f.add_argument("--moves", type=int, default=5)
    f.add_argument("--count", type=int, default=1)
    f.add_argument("-o", "--output", help="directory")
    f.set_defaults(func=cmd_fuzz)

    r = sub.add_parser("render", help="draw as SVG")
    r.add_argument("file")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_render)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotFanPlanar as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FALSE
    except (InternalContradiction, RerouteError) as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return CONTRADICTION
    except (FormatError, DrawingError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONTRADICTION


if __name__ == "__main__":
    sys.exit(main())
