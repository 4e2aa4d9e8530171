"""Command-line front end.

Exit codes: 0 when a command completes with the expected outcome (for
``decide`` and ``oracle``: satisfiable), 2 when ``decide``/``oracle`` find a
formula unsatisfiable, 1 on errors and on failed checks.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any

from . import harness
from .boolfn import NAMED_BASES, Base, BoolFn, load_base
from .classify import FragmentSpec, Strategy, classify, format_ops, parse_ops
from .deciders import decide, reference_verdict
from .errors import LtlpostError
from .formula import (
    DEFAULT_WORK_LIMIT,
    LassoStructure,
    functions,
    parse,
    sat_bounded,
    temporal_ops,
    to_text,
)
from .reductions import (
    FlattenMode,
    flatten,
    parse_qbf,
    qbf_to_since,
    qbf_to_since_b,
    qbf_to_until,
    rewrite_with_true_anchor,
    synthesize,
    verify_model_shape,
)
from .reductions.synth import TARGETS
from .tableau import DEFAULT_MAX_ATOMS

EXIT_OK, EXIT_ERROR, EXIT_UNSAT = 0, 1, 2


@dataclass
class RunReport:
    command: str
    output: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0
    exit_code: int = EXIT_OK

    def to_json(self) -> dict:
        return {"command": self.command, **self.output, "seconds": round(self.seconds, 4)}


def _base(text: str | None) -> Base | None:
    if text is None:
        return None
    if text in NAMED_BASES:
        return NAMED_BASES[text]
    return load_base(text)


def _formulas(args, base: Base | None) -> list[str]:
    if args.formula is not None:
        return [args.formula]
    if args.formula_file is None:
        raise LtlpostError("give --formula or --formula-file")
    with open(args.formula_file, encoding="utf-8") as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    return [ln for ln in lines if ln]


def _fragment(phi, base: Base | None, ops: str | None) -> FragmentSpec:
    if base is None:
        base = Base.of(*sorted(functions(phi), key=lambda f: f.name))
    temporal = parse_ops(ops) if ops is not None else temporal_ops(phi)
    return FragmentSpec(base, temporal)


# -- subcommands ----------------------------------------------------------------------------


def cmd_classify(args) -> list[RunReport]:
    base = _base(args.base) or NAMED_BASES["I2"]
    spec = FragmentSpec(base, parse_ops(args.ops or ""))
    v = classify(spec)
    out = {"base": args.base, "ops": format_ops(spec.temporal), **v.to_json()}
    return [RunReport("classify", out)]


def cmd_decide(args) -> list[RunReport]:
    base = _base(args.base)
    reports = []
    for text in _formulas(args, base):
        start = time.perf_counter()
        # reduction outputs use reserved names, so accept them here
        phi = parse(text, base, allow_reserved=True)
        spec = _fragment(phi, base, args.ops)
        verdict = classify(spec)
        res = decide(phi, spec, max_atoms=args.max_atoms, work_limit=args.work_limit)
        out = {
            "formula": to_text(phi),
            "ops": format_ops(spec.temporal),
            "satisfiable": res.satisfiable,
            "method": res.method,
            "class": verdict.complexity.value,
            "citation": verdict.citation,
            "witness": res.to_json().get("witness"),
        }
        code = EXIT_OK if res.satisfiable else EXIT_UNSAT
        if args.oracle_check:
            ref = reference_verdict(phi, max_atoms=args.max_atoms)
            out["oracle"] = ref.satisfiable
            if ref.satisfiable != res.satisfiable:
                out["oracle_mismatch"] = True
                code = EXIT_ERROR
        reports.append(RunReport("decide", out, time.perf_counter() - start, code))
    return reports


def cmd_oracle(args) -> list[RunReport]:
    base = _base(args.base)
    reports = []
    for text in _formulas(args, base):
        start = time.perf_counter()
        phi = parse(text, base, allow_reserved=True)
        ref = reference_verdict(phi, max_atoms=args.max_atoms, initial=args.initial)
        out = {"formula": to_text(phi), "satisfiable": ref.satisfiable, "method": ref.method,
               "witness": ref.to_json().get("witness")}
        if args.prefix is not None:
            hit = sat_bounded(phi, args.prefix, args.loop, work_limit=args.work_limit)
            out["bounded"] = None if hit is None else {"lasso": hit[0].to_json(), "index": hit[1]}
            if hit is not None and not ref.satisfiable and not args.initial:
                out["oracle_mismatch"] = True
        code = EXIT_OK if ref.satisfiable else EXIT_UNSAT
        if out.get("oracle_mismatch"):
            code = EXIT_ERROR
        reports.append(RunReport("oracle", out, time.perf_counter() - start, code))
    return reports


def _read_qbf(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_qbf(fh.read())


def cmd_reduce(args) -> list[RunReport]:
    start = time.perf_counter()
    mode = args.mode
    base = _base(args.base)
    if mode in ("qbf2s", "qbf2s-b", "qbf2u"):
        if args.qbf is None:
            raise LtlpostError(f"reduce {mode} needs --qbf FILE")
        psi = _read_qbf(args.qbf)
        if mode == "qbf2s":
            res = qbf_to_since(psi)
        elif mode == "qbf2u":
            res = qbf_to_until(psi)
        else:
            res = qbf_to_since_b(psi, base or NAMED_BASES["S1"])
        source = str(psi)
    else:
        texts = _formulas(args, base)
        if len(texts) != 1:
            raise LtlpostError("reduce takes exactly one formula")
        phi = parse(texts[0], base)
        source = to_text(phi)
        if mode == "flatten":
            res = flatten(phi, FlattenMode.FULL)
        elif mode == "flatten-future":
            res = flatten(phi, FlattenMode.FUTURE_ONLY)
        else:
            ops = parse_ops(args.ops) if args.ops is not None else temporal_ops(phi)
            res = rewrite_with_true_anchor(phi, base or NAMED_BASES["S1"], ops)
    out = {
        "mode": mode,
        "input": source,
        "formula": to_text(res.formula),
        "fresh": [{"name": n, "role": r} for n, r in res.fresh_vars],
    }
    return [RunReport("reduce", out, time.perf_counter() - start)]


def cmd_verify_shape(args) -> list[RunReport]:
    start = time.perf_counter()
    psi = _read_qbf(args.qbf)
    with open(args.witness, encoding="utf-8") as fh:
        doc = json.load(fh)
    if "lasso" in doc:
        lasso, index = LassoStructure.from_json(doc["lasso"]), doc.get("index", args.index)
    else:
        lasso, index = LassoStructure.from_json(doc), args.index
    if index is None:
        raise LtlpostError("give --index or store 'index' next to 'lasso' in the witness file")
    ok = verify_model_shape(lasso, index, psi)
    out = {"qbf": str(psi), "index": index, "shape_ok": ok}
    return [RunReport("verify-shape", out, time.perf_counter() - start, EXIT_OK if ok else EXIT_ERROR)]


def cmd_table_check(args) -> list[RunReport]:
    start = time.perf_counter()
    if args.base is not None:
        base = _base(args.base)
        spec = FragmentSpec(base, parse_ops(args.ops or ""))
        out = {"base": args.base, "ops": format_ops(spec.temporal), **classify(spec).to_json()}
        return [RunReport("table-check", out, time.perf_counter() - start)]
    expected = harness.expected_table()
    if args.dump_expected:
        sys.stdout.write(harness.dump_expected(expected))
        return []
    if args.expected is not None:
        with open(args.expected, encoding="utf-8") as fh:
            expected = harness.load_expected(fh.read())
    rep = harness.table_check(expected)
    return [RunReport("table-check", rep.to_json(), time.perf_counter() - start,
                      EXIT_OK if rep.ok else EXIT_ERROR)]


def cmd_qbf_suite(args) -> list[RunReport]:
    start = time.perf_counter()
    rep = harness.qbf_suite(args.max_quantifiers, args.max_matrix_nodes, max_atoms=args.max_atoms)
    return [RunReport("qbf-suite", rep.to_json(), time.perf_counter() - start,
                      EXIT_OK if rep.ok else EXIT_ERROR)]


def _target(text: str) -> tuple[str, BoolFn]:
    if text in TARGETS:
        return text, TARGETS[text]
    if set(text) <= {"0", "1"} and len(text) in (2, 4, 8, 16):
        arity = len(text).bit_length() - 1
        return text, BoolFn("target", arity, tuple(int(c) for c in text))
    raise LtlpostError(f"target must be one of {sorted(TARGETS)} or a truth table such as 0110")


def cmd_synth(args) -> list[RunReport]:
    start = time.perf_counter()
    base = _base(args.base)
    if base is None:
        raise LtlpostError("synth needs --base")
    label, fn = _target(args.target)
    phi = synthesize(base, fn, read_once=not args.allow_repeats, cap=args.cap)
    out = {"target": label, "formula": to_text(phi), "read_once": not args.allow_repeats}
    return [RunReport("synth", out, time.perf_counter() - start)]


def cmd_sweep(args) -> list[RunReport]:
    start = time.perf_counter()
    kind = args.kind
    if kind == "agreement":
        strategies = [Strategy(args.strategy)] if args.strategy else list(harness.STRATEGY_FRAGMENTS)
        reps = [harness.agreement_sweep(s, args.max_nodes, args.max_atoms) for s in strategies]
    elif kind == "constants":
        reps = harness.constant_structure_check(args.count, args.seed)
    elif kind == "flatten":
        reps = [harness.flatten_sweep(args.max_nodes, args.max_atoms)]
    else:
        reps = harness.anchor_sweep(args.count, args.seed)
    out = {"kind": kind, "seed": args.seed, "reports": [r.to_json() for r in reps]}
    ok = all(r.ok for r in reps)
    return [RunReport("sweep", out, time.perf_counter() - start, EXIT_OK if ok else EXIT_ERROR)]


# -- output -------------------------------------------------------------------------------


def _render(rep: RunReport, show_witness: bool) -> str:
    o = rep.output
    c = rep.command
    if c == "classify" or (c == "table-check" and "class" in o):
        return f"{o['class']} via {o['strategy']}: {o['citation']}"
    if c in ("decide", "oracle"):
        line = f"{'SAT' if o['satisfiable'] else 'UNSAT'} ({o['method']}) {o['formula']}"
        if show_witness and o.get("witness"):
            w = o["witness"]
            line += f"\n  witness: {LassoStructure.from_json(w['lasso'])} at {w['index']}"
        if "oracle" in o:
            line += f"\n  oracle: {'SAT' if o['oracle'] else 'UNSAT'}"
        if "bounded" in o:
            line += f"\n  bounded search: {'found' if o['bounded'] else 'none'}"
        if o.get("oracle_mismatch"):
            line += "\n  MISMATCH between decider and oracle"
        return line
    if c == "reduce":
        fresh = ", ".join(f"{f['name']}:{f['role']}" for f in o["fresh"])
        return o["formula"] + (f"\n  fresh: {fresh}" if fresh else "")
    if c == "verify-shape":
        return "shape ok" if o["shape_ok"] else "shape check failed"
    if c == "synth":
        return o["formula"]
    if c == "sweep":
        return "\n".join(_summary(r) for r in o["reports"])
    return _summary(o)


def _summary(r: dict) -> str:
    status = "PASS" if r["ok"] else "FAIL"
    lines = [f"{status} {r['name']}: {r['total']} checked, {r['failure_count']} failures, {r['seconds']}s"]
    lines += [f"  {f}" for f in r["failures"][:20]]
    return "\n".join(lines)


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ltlpost", description="Satisfiability of temporal formulae over restricted connectives.")
    p.add_argument("--json", action="store_true", help="one JSON record per input")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formula=True):
        sp.add_argument("--base", help="named clone (e.g. S1, M, named:L) or a base definition file")
        sp.add_argument("--ops", help="temporal operators, e.g. 'F,X' or 'FX'")
        sp.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        if formula:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--formula")
            g.add_argument("--formula-file", help="one formula per line, # comments")

    sp = sub.add_parser("classify", help="complexity of a fragment")
    common(sp, formula=False)
    sp.set_defaults(run=cmd_classify)

    sp = sub.add_parser("decide", help="decide satisfiability with the fragment's procedure")
    common(sp)
    sp.add_argument("--witness", action="store_true", help="print the witness lasso")
    sp.add_argument("--oracle-check", action="store_true", help="compare with the tableau")
    sp.add_argument("--work-limit", type=int, default=DEFAULT_WORK_LIMIT)
    sp.set_defaults(run=cmd_decide)

    sp = sub.add_parser("oracle", help="reference tableau verdict, optionally with bounded lasso search")
    common(sp)
    sp.add_argument("--witness", action="store_true")
    sp.add_argument("--initial", action="store_true", help="require satisfaction at the first state")
    sp.add_argument("--prefix", type=int, help="bounded search: max prefix length")
    sp.add_argument("--loop", type=int, default=2, help="bounded search: max loop length")
    sp.add_argument("--work-limit", type=int, default=DEFAULT_WORK_LIMIT)
    sp.set_defaults(run=cmd_oracle)

    sp = sub.add_parser("reduce", help="apply a reduction")
    sp.add_argument("mode", choices=["flatten", "flatten-future", "anchor", "qbf2s", "qbf2s-b", "qbf2u"])
    common(sp)
    sp.add_argument("--qbf", help="QBF file for the qbf2* modes")
    sp.set_defaults(run=cmd_reduce)

    sp = sub.add_parser("verify-shape", help="check a witness of the since-encoding against its QBF")
    sp.add_argument("--qbf", required=True)
    sp.add_argument("--witness", required=True, help="JSON file: a lasso, or {lasso, index}")
    sp.add_argument("--index", type=int)
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(run=cmd_verify_shape)

    sp = sub.add_parser("table-check", help="replay the complexity table for the named bases")
    sp.add_argument("--expected", help="CSV of expected cells (base,ops,class)")
    sp.add_argument("--dump-expected", action="store_true", help="print the built-in expected CSV")
    sp.add_argument("--base", help="query a single cell instead")
    sp.add_argument("--ops")
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(run=cmd_table_check)

    sp = sub.add_parser("qbf-suite", help="exhaustive QBF validity vs encoding satisfiability")
    sp.add_argument("max_quantifiers", type=int)
    sp.add_argument("max_matrix_nodes", type=int)
    sp.add_argument("--max-atoms", type=int, default=10**7)
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(run=cmd_qbf_suite)

    sp = sub.add_parser("synth", help="find a short formula over a base for a target function")
    sp.add_argument("--base", required=True)
    sp.add_argument("--target", required=True, help="and, or, not, or a truth table")
    sp.add_argument("--cap", type=int, default=12)
    sp.add_argument("--allow-repeats", action="store_true", help="variables may occur more than once")
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(run=cmd_synth)

    sp = sub.add_parser("sweep", help="batch property checks")
    sp.add_argument("kind", choices=["agreement", "constants", "flatten", "anchor"])
    sp.add_argument("--strategy", choices=[s.value for s in harness.STRATEGY_FRAGMENTS])
    sp.add_argument("--max-nodes", type=int, default=7)
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS)
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(run=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        reports = args.run(args)
    except (LtlpostError, ValueError, OSError) as exc:
        if args.json:
            print(json.dumps({"command": args.command, "error": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for rep in reports:
        if args.json:
            print(json.dumps(rep.to_json()))
        else:
            print(_render(rep, getattr(args, "witness", False) is True))
    codes = [r.exit_code for r in reports]
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    if EXIT_UNSAT in codes:
        return EXIT_UNSAT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
