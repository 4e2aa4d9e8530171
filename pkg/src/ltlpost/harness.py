"""Batch checks: the complexity table, decider/oracle sweeps, reductions, QBF suite."""

from __future__ import annotations

import csv
import io
import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Iterable

from .boolfn import AND, NAMED_BASES, NOT, OR, Base
from .classify import (
    Complexity,
    FragmentSpec,
    Strategy,
    all_op_sets,
    classify,
    format_ops,
    parse_ops,
)
from .deciders import decide
from .enumerate import enumerate_formulas, random_formula, up_to_renaming
from .formula import (
    Formula,
    Globally,
    LassoStructure,
    Var,
    all_false_lasso,
    all_true_lasso,
    eval_at,
    parse,
    sat_bounded,
    to_text,
    variables,
)
from .reductions import (
    FlattenMode,
    SynthesisNotFound,
    always_anchor,
    extend_model,
    flatten,
    is_valid,
    qbf_to_since,
    qbf_to_since_b,
    qbf_to_until,
    rewrite_with_true_anchor,
    to_builtin,
    verify_model_shape,
)
from .reductions.qbf import enumerate_qbfs
from .reductions.synth import occurrences, synth_short
from .tableau import DEFAULT_MAX_ATOMS, decide_tableau

NAMES = ("x", "y")


@dataclass
class Report:
    name: str
    total: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in self.notes.items())
        return f"{status} {self.name}: {self.total} checked, {len(self.failures)} failures, {self.seconds:.1f}s{extra}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "total": self.total,
            "failures": self.failures[:50],
            "failure_count": len(self.failures),
            "seconds": round(self.seconds, 3),
            **self.notes,
        }


# -- complexity table ---------------------------------------------------------------------

# Row of the published summary table for each named base.
TABLE_ROWS = {
    "I2": "trivial",
    "R1": "trivial",
    "D": "trivial",
    "N": "ptime",
    "I": "ptime",
    "V": "ptime",
    "E": "ptime",
    "M": "ptime",
    "L": "linear",
    "L0": "linear",
    "S1": "hard",
    "BF": "hard",
}

_SMALL_COLUMN = [frozenset(), frozenset("F"), frozenset("G"), frozenset("FG"), frozenset("X")]


def expected_cell(row: str, ops: frozenset[str]) -> Complexity:
    """Table entry for a row and a temporal operator set.

    The linear row with X alone is polynomial by the xor decomposition even
    though the summary table prints a question mark there.
    """
    if row == "trivial":
        return Complexity.TRIVIAL
    if row == "ptime":
        return Complexity.PTIME
    if row == "linear":
        return Complexity.PTIME if ops <= {"X"} else Complexity.OPEN
    if ops in _SMALL_COLUMN:
        return Complexity.NP_COMPLETE
    return Complexity.PSPACE_COMPLETE


def expected_table() -> dict[tuple[str, frozenset[str]], Complexity]:
    return {
        (name, ops): expected_cell(row, ops)
        for name, row in TABLE_ROWS.items()
        for ops in all_op_sets()
    }


def dump_expected(table: dict[tuple[str, frozenset[str]], Complexity]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["base", "ops", "class"])
    for (name, ops), cls in table.items():
        w.writerow([name, "".join(o for o in "XFGUS" if o in ops), cls.value])
    return buf.getvalue()


def load_expected(text: str) -> dict[tuple[str, frozenset[str]], Complexity]:
    rows = csv.DictReader(io.StringIO(text))
    out = {}
    for r in rows:
        if r["base"] not in NAMED_BASES:
            raise ValueError(f"unknown named base {r['base']!r}")
        out[(r["base"], parse_ops(list(r["ops"])))] = Complexity(r["class"])
    return out


def table_check(expected: dict | None = None) -> Report:
    rep = Report("table-check")
    start = time.perf_counter()
    expected = expected if expected is not None else expected_table()
    for (name, ops), want in expected.items():
        got = classify(FragmentSpec(NAMED_BASES[name], ops)).complexity
        rep.total += 1
        if got is not want:
            rep.fail(f"{name} {format_ops(ops)}: expected {want.value}, got {got.value}")
    rep.seconds = time.perf_counter() - start
    return rep


# -- decider / oracle agreement -------------------------------------------------------------

# One fragment per strategy, each with every temporal operator the strategy admits.
STRATEGY_FRAGMENTS: dict[Strategy, tuple[str, str]] = {
    Strategy.ALL_TRUE: ("R1", "XFGUS"),
    Strategy.SELF_DUAL: ("D", "XFGUS"),
    Strategy.CONSTANT_ANALYSIS: ("N", "XFGUS"),
    Strategy.MONOTONE_REWRITE: ("M", "XFGUS"),
    Strategy.XOR_NEXT: ("L", "X"),
    Strategy.X_BOUNDED: ("BF", "X"),
    Strategy.PROP_LINEAR: ("L", ""),
}


def fragment_formulas(base: Base, ops: Iterable[str], max_nodes: int, names=NAMES) -> list[Formula]:
    """Every fragment formula up to ``max_nodes`` over ``names``, one per renaming class."""
    return up_to_renaming(enumerate_formulas(max_nodes, names, base, ops), names)


def agreement_sweep(
    strategy: Strategy,
    max_nodes: int = 7,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    limit: int | None = None,
) -> Report:
    base_name, ops = STRATEGY_FRAGMENTS[strategy]
    base = NAMED_BASES[base_name]
    spec = FragmentSpec(base, parse_ops(list(ops)))
    rep = Report(f"agreement {strategy.value} on {base_name} {format_ops(spec.temporal)}")
    start = time.perf_counter()
    formulas = fragment_formulas(base, spec.temporal, max_nodes)
    if limit is not None:
        formulas = formulas[:limit]
    sat = witnesses = 0
    for phi in formulas:
        rep.total += 1
        res = decide(phi, spec, max_atoms=max_atoms)
        if res.method != strategy.value:
            rep.fail(f"{to_text(phi)}: dispatched to {res.method}")
        ref = decide_tableau(to_builtin(phi), max_atoms=max_atoms)
        if res.satisfiable != ref.satisfiable:
            rep.fail(f"{to_text(phi)}: {res.method} says {res.satisfiable}, tableau {ref.satisfiable}")
        if res.satisfiable:
            sat += 1
            if res.witness is None:
                rep.fail(f"{to_text(phi)}: SAT without witness")
            elif not eval_at(res.witness[0], res.witness[1], phi):
                rep.fail(f"{to_text(phi)}: witness fails")
            else:
                witnesses += 1
    rep.notes.update(sat=sat, verified_witnesses=witnesses)
    rep.seconds = time.perf_counter() - start
    return rep


# -- constant structures on 1-reproducing and self-dual bases -------------------------------


def constant_structure_check(count: int = 1000, seed: int = 0, max_nodes: int = 10) -> list[Report]:
    rng = random.Random(seed)
    names = ("x", "y", "z")
    out = []
    for base_name in ("R1", "D"):
        base = NAMED_BASES[base_name]
        rep = Report(f"constant structures on {base_name}")
        start = time.perf_counter()
        for _ in range(count):
            phi = random_formula(rng, max_nodes, names, base, "XFGUS")
            rep.total += 1
            on_true = eval_at(all_true_lasso(variables(phi)), 0, phi)
            on_false = eval_at(all_false_lasso(), 0, phi)
            if base_name == "R1" and not on_true:
                rep.fail(f"{to_text(phi)}: all-true structure fails")
            if base_name == "D" and on_true == on_false:
                rep.fail(f"{to_text(phi)}: all-true {on_true}, all-false {on_false}")
        rep.notes["seed"] = seed
        rep.seconds = time.perf_counter() - start
        out.append(rep)
    return out


# -- flattening ---------------------------------------------------------------------------------


def flatten_sweep(
    max_nodes: int = 7, max_atoms: int = DEFAULT_MAX_ATOMS, limit: int | None = None
) -> Report:
    """tableau(flatten(phi)) against the tableau on phi, with the model-extension check."""
    base = NAMED_BASES["BF"]
    rep = Report(f"flatten equisatisfiability on BF {{X,F,G,U,S}} <= {max_nodes} nodes")
    start = time.perf_counter()
    formulas = fragment_formulas(base, "XFGUS", max_nodes)
    if limit is not None:
        formulas = formulas[:limit]
    sat = 0
    for phi in formulas:
        rep.total += 1
        ref = decide_tableau(phi, max_atoms=max_atoms)
        out = flatten(phi, FlattenMode.FULL)
        got = decide_tableau(out.formula, max_atoms=max_atoms)
        if got.satisfiable != ref.satisfiable:
            rep.fail(f"{to_text(phi)}: reference {ref.satisfiable}, flattened {got.satisfiable}")
            continue
        if ref.satisfiable:
            sat += 1
            lasso, i = ref.witness
            if not eval_at(extend_model(phi, out, lasso), i, out.formula):
                rep.fail(f"{to_text(phi)}: extended model does not satisfy the flattened formula")
    rep.notes["sat"] = sat
    rep.seconds = time.perf_counter() - start
    return rep


def bounded_cross_check(formulas: Iterable[Formula], max_prefix: int = 3, max_loop: int = 2) -> Report:
    """Tableau against exhaustive small lassos: a bounded witness forces a SAT verdict."""
    rep = Report(f"tableau vs bounded lassos (prefix <= {max_prefix}, loop <= {max_loop})")
    start = time.perf_counter()
    for phi in formulas:
        rep.total += 1
        got = decide_tableau(phi)
        if not got.satisfiable and sat_bounded(phi, max_prefix, max_loop, work_limit=10**7):
            rep.fail(f"{to_text(phi)}: bounded witness exists but tableau says UNSAT")
    rep.seconds = time.perf_counter() - start
    return rep


# -- anchor rewrite -------------------------------------------------------------------------------


def anchor_sweep(count: int = 200, seed: int = 0, max_nodes: int = 6) -> list[Report]:
    rng = random.Random(seed)
    base = NAMED_BASES["S1"]
    source = Base.of(AND, OR, NOT)
    out = []
    for ops in ("GX", "FX"):
        rep = Report(f"anchor rewrite {{{','.join(ops)}}} on S1")
        start = time.perf_counter()
        sat = 0
        for _ in range(count):
            phi = random_formula(rng, max_nodes, NAMES, source, ops)
            rep.total += 1
            res = rewrite_with_true_anchor(phi, base, frozenset(ops))
            want = decide_tableau(phi).satisfiable
            got = decide_tableau(to_builtin(res.formula)).satisfiable
            sat += want
            if want != got:
                rep.fail(f"{to_text(phi)}: input {want}, rewritten {got}")
        rep.notes.update(seed=seed, sat=sat)
        rep.seconds = time.perf_counter() - start
        out.append(rep)
    return out


# -- QBF suite ------------------------------------------------------------------------------------


def qbf_suite(max_quantifiers: int, max_matrix_nodes: int, max_atoms: int = 10**7) -> Report:
    base = NAMED_BASES["S1"]
    rep = Report(f"qbf-suite {max_quantifiers} {max_matrix_nodes}")
    start = time.perf_counter()
    shapes = valid = 0
    for psi in enumerate_qbfs(max_quantifiers, max_matrix_nodes):
        rep.total += 1
        truth = is_valid(psi)
        valid += truth
        encodings = (
            ("S", qbf_to_since(psi).formula),
            ("S over x and not y", qbf_to_since_b(psi, base).formula),
            ("U", qbf_to_until(psi).formula),
        )
        for label, formula in encodings:
            res = decide_tableau(to_builtin(formula), max_atoms=max_atoms)
            if res.satisfiable != truth:
                rep.fail(f"{psi}: valid={truth} but {label} encoding SAT={res.satisfiable}")
            if label == "S" and res.satisfiable:
                lasso, m = res.witness
                if verify_model_shape(lasso, m, psi):
                    shapes += 1
                else:
                    rep.fail(f"{psi}: witness {lasso} at {m} lacks the block shape")
    rep.notes.update(valid=valid, shapes_verified=shapes)
    rep.seconds = time.perf_counter() - start
    return rep


def always_anchor_check(max_prefix: int = 3, max_loop: int = 2) -> Report:
    """``g(t, F(g(t, X t)))`` against ``G t`` on every small lasso and position."""
    rep = Report(f"G t encoding on lassos (prefix <= {max_prefix}, loop <= {max_loop})")
    start = time.perf_counter()
    t = Var("t")
    enc = always_anchor(t, parse("andnot(x, y)", NAMED_BASES["S1"]))
    states = (frozenset(), frozenset({"t"}))
    for p in range(max_prefix + 1):
        for l in range(1, max_loop + 1):
            for seq in itertools.product(states, repeat=p + l):
                lasso = LassoStructure(tuple(seq[:p]), tuple(seq[p:]))
                for i in range(p + l):
                    rep.total += 1
                    if eval_at(lasso, i, enc) != eval_at(lasso, i, Globally(t)):
                        rep.fail(f"{lasso} at {i}")
    rep.seconds = time.perf_counter() - start
    return rep


# Named bases meeting the short-formula hypotheses, with the connectives they yield:
# V <= [B] <= M gives or, E <= [B] <= M gives and, [B] = BF gives all three, N <= [B] gives not.
SHORT_FORMULA_TARGETS = {
    "V": ("or",),
    "E": ("and",),
    "M": ("or", "and"),
    "BF": ("or", "and", "not"),
    "N": ("not",),
    "L": ("not",),
}


def synth_check(cap: int = 12) -> Report:
    fns = {"and": AND, "or": OR, "not": NOT}
    rep = Report("read-once synthesis on the short-formula bases")
    start = time.perf_counter()
    for name, targets in SHORT_FORMULA_TARGETS.items():
        for target in targets:
            rep.total += 1
            try:
                phi = synth_short(NAMED_BASES[name], target, cap=cap)
            except SynthesisNotFound:
                rep.fail(f"{name} {target}: not found within {cap} nodes")
                continue
            want = fns[target]
            names = ("x", "y")[: want.arity]
            for k, bits in enumerate(itertools.product((0, 1), repeat=want.arity)):
                state = frozenset(n for n, b in zip(names, bits) if b)
                if eval_at(LassoStructure((), (state,)), 0, phi) != bool(want.table[k]):
                    rep.fail(f"{name} {target}: {to_text(phi)} has the wrong table")
                    break
            for n in names:
                if occurrences(phi, n) != 1:
                    rep.fail(f"{name} {target}: {n} occurs {occurrences(phi, n)} times in {to_text(phi)}")
    rep.seconds = time.perf_counter() - start
    return rep
