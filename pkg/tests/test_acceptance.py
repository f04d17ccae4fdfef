"""Acceptance criteria 1-8, one printed PASS/FAIL line each."""
from __future__ import annotations

import subprocess
import sys
from collections import Counter
from dataclasses import replace

import pytest

from fanplanar.drawing import detect_configurations, is_simple, validate_drawing
from fanplanar.engine import (
    build_conflict_sequence,
    check_sequence_witness,
    lemma1_step,
    lemma2_step,
    lemma5_step,
    normalize,
    pick_adjacent_crossing,
    simplify,
)
from fanplanar.fan import density_report, fan_certificate, is_3quasiplanar, is_fan_planar
from fanplanar.fpd import parse, serialize
from fanplanar.generators import CANONICAL_NAMES, FuzzParams, canonical, fuzz
from fanplanar.layout import LayoutError, geometric_recheck, layout
from fanplanar.reroute import apply_route


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def replay(entry):
    """Drawings after each step of the trace, rebuilt from the input."""
    cur = entry.drawing
    out = []
    for step in entry.result.trace:
        cur = apply_route(cur, step.route).drawing
        out.append((step, cur))
    return out


def failing(rep):
    return {k for k, v in rep.items() if v}


def test_criterion_1_simplify_suite(corpus, report):
    bad = []
    for e in corpus.entries:
        d, out = e.drawing, e.result.drawing
        if len(d.graph.vertices) > 12 or len(d.crossings) > 40:
            bad.append((e.params.seed, "input out of range"))
            continue
        rep = detect_configurations(out)
        checks = {
            "valid": validate_drawing(out).ok,
            "simple": not rep.s1 and not rep.s2,
            "fan": is_fan_planar(out),
            "graph": out.graph.same_as(d.graph),
            "count": len(out.crossings) <= len(d.crossings),
            "trace": e.result.trace.strictly_decreasing(),
        }
        bad += [(e.params.seed, k) for k, v in checks.items() if not v]
    nonsimple = sum(not is_simple(e.drawing) for e in corpus.entries)
    ok = not bad and corpus.simplify_seconds < 60
    report(
        1,
        ok,
        f"{len(corpus.entries)} drawings ({nonsimple} non-simple), {len(bad)} failures {bad[:5]}, "
        f"simplify {corpus.simplify_seconds:.1f}s",
    )


def test_criterion_2_quasiplanarity(corpus, report):
    bad = []
    checked = 0
    for e in corpus.entries:
        if not is_3quasiplanar(e.result.drawing)[0]:
            bad.append(e.params.seed)
        checked += 1
        # every simple fan-planar drawing met along the way, too
        for _, cur in replay(e):
            if is_simple(cur):
                checked += 1
                if not is_3quasiplanar(cur)[0]:
                    bad.append(e.params.seed)
    k3, triple = is_3quasiplanar(canonical("fig3a_k3"))
    ok = not bad and not k3 and triple is not None and len(set(triple)) == 3
    report(2, ok, f"{checked} simple drawings 3-quasiplanar, {len(bad)} failures; fig3a_k3 witness {triple}")


def test_criterion_3_figures(report):
    want = {"fig1a_fan": (True, True), "fig1b": (True, False), "fig1c": (False, True), "fig1d": (False, False)}
    got = {n: (is_simple(canonical(n)), is_fan_planar(canonical(n))) for n in want}
    spiral = simplify(canonical("fig3b_spiral")).drawing
    k3 = simplify(canonical("fig3a_k3")).drawing
    ok = got == want and is_simple(spiral) and is_fan_planar(spiral) and len(k3.crossings) == 0
    report(3, ok, f"classes {got}; fig3b_spiral simple+fan {is_simple(spiral) and is_fan_planar(spiral)}; "
                  f"fig3a_k3 -> {len(k3.crossings)} crossings")


def test_criterion_4_lemma_suites(corpus, report):
    notes = []
    d = canonical("fig_lemma1")
    out1, r1 = lemma1_step(d, fan_certificate(d))
    ok1 = r1.after < r1.before and is_fan_planar(out1)
    d = canonical("fig4_multi")
    out2, r2 = lemma2_step(d, fan_certificate(d))
    inj = lambda r: not Counter(r.new_crossed) - Counter(r.replaced_crossed)  # noqa: E731
    ok2 = r2.after < r2.before and is_fan_planar(out2) and inj(r2)
    n, cert, _ = normalize(canonical("fig_sequence"))
    w = build_conflict_sequence(n, cert, *pick_adjacent_crossing(n))
    out5, r5 = lemma5_step(n, cert, w)
    ok5 = r5.after < r5.before and is_fan_planar(out5)
    notes.append(f"canonical L1 {ok1} L2 {ok2} L5 {ok5}")
    sites = bad = 0
    for e in corpus.entries:
        for step, cur in replay(e):
            if step.rule != "Lemma2":
                continue
            sites += 1
            if not (inj(step) and step.after < step.before and is_fan_planar(cur)):
                bad += 1
    ok = ok1 and ok2 and ok5 and sites >= 200 and bad == 0
    report(4, ok, f"{notes[0]}; {sites} fuzzed Lemma2 sites, {bad} injection/fan failures")


def test_criterion_5_witnesses(corpus, report):
    total = bad = 0
    sample = None
    for e in corpus.entries:
        witnesses = iter(e.result.witnesses)
        cur = e.drawing
        for step in e.result.trace:
            if step.rule == "Lemma5":
                w = next(witnesses)
                total += 1
                good, rep = check_sequence_witness(cur, w)
                bad += not good
                if good and w.k >= 2 and sample is None:
                    sample = (cur, w)
            cur = apply_route(cur, step.route).drawing
    n, cert, _ = normalize(canonical("fig_sequence"))
    fixture = (n, build_conflict_sequence(n, cert, *pick_adjacent_crossing(n)))
    killed = []
    for d, w in filter(None, (fixture, sample)):
        colors = list(w.colors)
        colors[1] = "red" if colors[1] == "black" else "black"
        killed.append("I1" in failing(check_sequence_witness(d, replace(w, colors=tuple(colors)))[1]))
        xs = (w.xs[1], w.xs[0]) + w.xs[2:]
        killed.append("I3" in failing(check_sequence_witness(d, replace(w, xs=xs))[1]))
        killed.append("I1" in failing(check_sequence_witness(d, replace(w, B=w.R))[1]))
    ok = total > 0 and bad == 0 and all(killed)
    report(5, ok, f"{total} corpus witnesses, {bad} rejected; mutations caught {sum(killed)}/{len(killed)}")


def test_criterion_6_oracle(corpus, report):
    mism = []
    for name in CANONICAL_NAMES:
        d = canonical(name)
        rep = geometric_recheck(d, layout(d))
        if not rep.ok or rep.fan_planar != is_fan_planar(d):
            mism.append((name, rep.mismatches))
    laid = failed = 0
    for e in corpus.entries:
        for d in (e.drawing, e.result.drawing):
            try:
                lay = layout(d)
            except LayoutError:
                failed += 1
                continue
            laid += 1
            rep = geometric_recheck(d, lay)
            if not rep.ok:
                mism.append((e.params.seed, rep.mismatches[:2]))
    ok = not mism and laid >= 500
    report(6, ok, f"{len(CANONICAL_NAMES)} fixtures + {laid} fuzzed drawings laid out ({failed} layout failures), "
                  f"{len(mism)} mismatches {mism[:3]}")


def test_criterion_7_density(corpus, report):
    seen = bad = 0
    for e in corpus.entries:
        for d in (e.drawing, e.result.drawing):
            if len(d.graph.vertices) >= 10:
                seen += 1
                bad += not density_report(d).satisfied
    report(7, seen > 0 and bad == 0, f"{seen} drawings with n >= 10, {bad} above 6.5n-20")


def test_criterion_8_format(corpus, report):
    bad = []
    drawings = [(n, canonical(n)) for n in CANONICAL_NAMES]
    drawings += [(e.params.seed, d) for e in corpus.entries for d in (e.drawing, e.result.drawing)]
    for name, d in drawings:
        text = serialize(d)
        if parse(text) != d or serialize(parse(text)) != text or serialize(d) != text:
            bad.append(name)
    # byte-for-byte across separate processes
    code = (
        "from fanplanar.fpd import serialize\n"
        "from fanplanar.generators import FuzzParams, fuzz\n"
        "import sys\n"
        "for s in range(20): sys.stdout.write(serialize(fuzz(FuzzParams(seed=s, n=10, moves=6))))\n"
    )
    runs = [subprocess.run([sys.executable, "-c", code], capture_output=True, check=True).stdout for _ in range(2)]
    here = "".join(serialize(fuzz(FuzzParams(seed=s, n=10, moves=6))) for s in range(20)).encode()
    same = runs[0] == runs[1] == here
    report(8, not bad and same, f"{len(drawings)} round trips, {len(bad)} failures; cross-process identical {same}")
