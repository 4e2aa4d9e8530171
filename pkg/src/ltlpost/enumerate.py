"""Exhaustive and random generation of formulae for the test harness."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from .boolfn import Base, BoolFn
from .formula import BINARY, UNARY, Apply, Formula, Var, rename, to_text, variables


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _constructors(base: Base, ops: Iterable[str]):
    out: list[tuple[int, object]] = []
    for f in base:
        if f.arity > 0:
            out.append((f.arity, f))
    for op in ("X", "F", "G", "U", "S"):
        if op in ops:
            out.append((2 if op in BINARY else 1, op))
    return out


def _build(ctor, args: tuple[Formula, ...]) -> Formula:
    if isinstance(ctor, BoolFn):
        return Apply(ctor, args)
    if ctor in UNARY:
        return UNARY[ctor](*args)
    return BINARY[ctor](*args)


def enumerate_by_size(
    max_nodes: int, names: Sequence[str], base: Base, ops: Iterable[str]
) -> list[list[Formula]]:
    """``out[s]`` lists every formula with exactly ``s`` nodes."""
    ops = frozenset(ops)
    leaves: list[Formula] = [Var(n) for n in names]
    leaves += [Apply(f) for f in base if f.arity == 0]
    ctors = _constructors(base, ops)
    out: list[list[Formula]] = [[] for _ in range(max_nodes + 1)]
    if max_nodes >= 1:
        out[1] = leaves
    for s in range(2, max_nodes + 1):
        layer = []
        for arity, ctor in ctors:
            for split in _compositions(s - 1, arity):
                for args in itertools.product(*(out[k] for k in split)):
                    layer.append(_build(ctor, args))
        out[s] = layer
    return out


def enumerate_formulas(
    max_nodes: int, names: Sequence[str], base: Base, ops: Iterable[str]
) -> list[Formula]:
    return [f for layer in enumerate_by_size(max_nodes, names, base, ops) for f in layer]


def first_occurrences(phi: Formula) -> list[str]:
    """Variable names in order of first occurrence (pre-order, left to right)."""
    order: list[str] = []
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            if f.name not in order:
                order.append(f.name)
        else:
            stack.extend(reversed(f.children))
    return order


def canonical_renaming(phi: Formula, names: Sequence[str]) -> Formula:
    """Rename variables to ``names`` in order of first occurrence."""
    return rename(phi, dict(zip(first_occurrences(phi), names)))


def up_to_renaming(formulas: Iterable[Formula], names: Sequence[str]) -> list[Formula]:
    """Keep one representative per class of formulas equal up to renaming of ``names``.

    Satisfiability does not depend on variable names, so a sweep over the
    representatives decides the same questions as a sweep over all.
    """
    names = list(names)
    return [f for f in formulas if (o := first_occurrences(f)) == names[: len(o)]]


def random_formula(
    rng: random.Random,
    max_nodes: int,
    names: Sequence[str],
    base: Base,
    ops: Iterable[str],
) -> Formula:
    """A random formula with at most ``max_nodes`` nodes, grown top-down."""
    leaves: list[Formula] = [Var(n) for n in names] + [Apply(f) for f in base if f.arity == 0]
    ctors = _constructors(base, frozenset(ops))
    if not leaves:
        raise ValueError("need at least one variable or constant")

    def grow(budget: int) -> Formula:
        usable = [(a, c) for a, c in ctors if a + 1 <= budget]
        if not usable or budget == 1 or rng.random() < 0.3:
            return rng.choice(leaves)
        arity, ctor = rng.choice(usable)
        remaining = budget - 1
        args = []
        for k in range(arity):
            left = arity - k - 1
            share = rng.randint(1, remaining - left) if k < arity - 1 else remaining
            share = min(share, remaining - left)
            args.append(grow(share))
            remaining -= _size(args[-1])
        return _build(ctor, tuple(args))

    return grow(max_nodes)


def _size(phi: Formula) -> int:
    return 1 + sum(_size(c) for c in phi.children)


def describe(phi: Formula) -> str:
    return f"{to_text(phi)} [{len(variables(phi))} vars]"
