"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line.  Run directly with
``python3 tests/test_acceptance.py`` to get just those lines.
"""

from __future__ import annotations

import functools
import sys
import time

import pytest

from ltlpost import harness

SEED = 20240601


@functools.lru_cache(maxsize=None)
def agreement_reports():
    start = time.perf_counter()
    reps = tuple(harness.agreement_sweep(s, max_nodes=7) for s in harness.STRATEGY_FRAGMENTS)
    return reps, time.perf_counter() - start


def criterion_1():
    rep = harness.table_check()
    ok = rep.ok and rep.seconds < 5
    return ok, f"table reproduction: {rep.total} cells, {len(rep.failures)} mismatches, {rep.seconds:.2f}s (< 5s)"


def criterion_2():
    reps, seconds = agreement_reports()
    total = sum(r.total for r in reps)
    bad = [f for r in reps for f in r.failures if "witness" not in f and "SAT without" not in f]
    ok = not bad and seconds < 600
    detail = ", ".join(f"{r.name.split()[1]}={r.total}" for r in reps)
    return ok, f"decider/tableau agreement: {total} formulas, {len(bad)} disagreements, {seconds:.0f}s (< 600s) [{detail}]"


def criterion_3():
    reps, _ = agreement_reports()
    sat = sum(r.notes["sat"] for r in reps)
    verified = sum(r.notes["verified_witnesses"] for r in reps)
    ok = sat == verified
    return ok, f"witness soundness: {verified}/{sat} SAT verdicts carry a verified witness"


def criterion_4():
    reps = harness.constant_structure_check(1000, seed=SEED)
    ok = all(r.ok for r in reps)
    parts = ", ".join(f"{r.name.split()[-1]} {r.total - len(r.failures)}/{r.total}" for r in reps)
    return ok, f"constant structures (seed {SEED}): {parts}"


def criterion_5():
    rep = harness.flatten_sweep(max_nodes=7)
    return rep.ok, (
        f"flatten equisatisfiability: {rep.total} formulas, {len(rep.failures)} failures, "
        f"model extension checked on {rep.notes['sat']} SAT instances, {rep.seconds:.0f}s"
    )


def criterion_6():
    rep = harness.qbf_suite(2, 5)
    ok = rep.ok and rep.seconds < 900
    return ok, (
        f"qbf-suite 2 5: {rep.total} instances x 3 encodings, {len(rep.failures)} failures, "
        f"{rep.notes['shapes_verified']} witness shapes verified, {rep.seconds:.0f}s (< 900s)"
    )


def criterion_7():
    reps = harness.anchor_sweep(200, seed=SEED, max_nodes=6)
    enc = harness.always_anchor_check(3, 2)
    ok = all(r.ok for r in reps) and enc.ok
    parts = ", ".join(f"{r.name.split()[2]} {r.total - len(r.failures)}/{r.total}" for r in reps)
    return ok, f"anchor rewrite (seed {SEED}): {parts}; G t encoding {enc.total} checks, {len(enc.failures)} failures"


def criterion_8():
    rep = harness.synth_check()
    return rep.ok, f"read-once synthesis: {rep.total - len(rep.failures)}/{rep.total} (base, target) pairs"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def line(n: int, ok: bool, text: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}"


@pytest.fixture
def emit(capsys):
    def out(text):
        with capsys.disabled():
            print("\n" + text)

    return out


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n, emit):
    ok, text = CRITERIA[n - 1]()
    emit(line(n, ok, text))
    assert ok, text


if __name__ == "__main__":
    results = []
    for n, fn in enumerate(CRITERIA, 1):
        ok, text = fn()
        print(line(n, ok, text), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
