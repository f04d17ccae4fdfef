"""Shared, seed-fixed fuzz corpus (built once per session)."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List

import pytest

from fanplanar.engine import SimplifyResult, simplify
from fanplanar.generators import FuzzParams, fuzz

CORPUS_SIZE = 1000


def corpus_params() -> List[FuzzParams]:
    # mostly random triangulation seeds of varying size, plus a share grown
    # from the conflict-sequence picture so that Lemma 5 actually fires
    out = []
    for i in range(CORPUS_SIZE):
        if i % 5 == 4:
            out.append(FuzzParams(seed=i, n=8, moves=8, base="sequence"))
        else:
            out.append(FuzzParams(seed=i, n=6 + i % 7, moves=4 + i % 6))
    return out


@dataclass
class Entry:
    params: FuzzParams
    drawing: object
    result: SimplifyResult


@dataclass
class Corpus:
    entries: List[Entry]
    simplify_seconds: float


@pytest.fixture(scope="session")
def corpus() -> Corpus:
    entries = []
    spent = 0.0
    for p in corpus_params():
        d = fuzz(p)
        t0 = time.perf_counter()
        res = simplify(d)
        spent += time.perf_counter() - t0
        entries.append(Entry(p, d, res))
    return Corpus(entries, spent)
