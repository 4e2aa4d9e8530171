from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..boolfn import BoolFn, is_builtin, is_constant, tuples
from ..formula import (
    RESERVED_PREFIX,
    Apply,
    Formula,
    Var,
    and_,
    const,
    disj,
    not_,
    variables,
)


@dataclass(frozen=True)
class ReductionOutput:
    formula: Formula
    fresh_vars: tuple[tuple[str, str], ...] = field(default_factory=tuple)  # (name, role)

    def fresh_names(self) -> list[str]:
        return [name for name, _ in self.fresh_vars]


class FreshNames:
    """Hands out ``__<role><counter>`` names that avoid a given set of existing names."""

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)
        self.issued: list[tuple[str, str]] = []

    def make(self, stem: str, role: str | None = None) -> str:
        name = RESERVED_PREFIX + stem
        k = 1
        while name in self.taken:
            k += 1
            name = f"{RESERVED_PREFIX}{stem}_{k}"
        self.taken.add(name)
        self.issued.append((name, role or stem))
        return name


def dnf_template(fn: BoolFn, args: list[Formula]) -> Formula:
    """``fn(args)`` written with and/or/not only, as a disjunction of full minterms."""
    if fn.arity == 0 or is_constant(fn):
        return const(fn.table[0])
    terms = []
    for row in tuples(fn.arity):
        if not fn(*row):
            continue
        lits = [a if bit else not_(a) for a, bit in zip(args, row)]
        term = lits[0]
        for lit in lits[1:]:
            term = and_(term, lit)
        terms.append(term)
    return disj(terms)


_NATIVE = frozenset({"and", "or", "not", "true", "false"})


def expand_application(fn: BoolFn, args: list[Formula], keep_xor: bool = False) -> Formula:
    if is_builtin(fn) and (fn.name in _NATIVE or (keep_xor and fn.name == "xor")):
        return Apply(fn, tuple(args))
    return dnf_template(fn, args)


def to_builtin(phi: Formula, keep_xor: bool = True) -> Formula:
    """Replace every non-built-in connective by its DNF template.

    Shared subterms stay shared, so the result is small as a DAG even when
    nested templates make its printed form long.
    """
    memo: dict[Formula, Formula] = {}

    def go(f: Formula) -> Formula:
        got = memo.get(f)
        if got is not None:
            return got
        if isinstance(f, Var):
            out = f
        elif isinstance(f, Apply):
            out = expand_application(f.fn, [go(a) for a in f.args], keep_xor)
        else:
            out = type(f)(*(go(c) for c in f.children))
        memo[f] = out
        return out

    return go(phi)


def replace_constant_one(phi: Formula, anchor: Formula) -> Formula:
    """Swap every arity-0 application with value 1 for ``anchor``."""
    memo: dict[Formula, Formula] = {}

    def go(f: Formula) -> Formula:
        got = memo.get(f)
        if got is not None:
            return got
        if isinstance(f, Apply) and f.fn.arity == 0 and f.fn.table[0] == 1:
            out = anchor
        elif isinstance(f, Var):
            out = f
        elif isinstance(f, Apply):
            out = Apply(f.fn, tuple(go(a) for a in f.args))
        else:
            out = type(f)(*(go(c) for c in f.children))
        memo[f] = out
        return out

    return go(phi)


def taken_names(*formulas: Formula) -> set[str]:
    out: set[str] = set()
    for f in formulas:
        out |= variables(f)
    return out
