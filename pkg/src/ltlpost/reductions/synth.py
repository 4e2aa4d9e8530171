"""Search for short B-formulae realising and, or, not."""

from __future__ import annotations

import itertools

from ..boolfn import AND, NOT, OR, Base, BoolFn, tuples
from ..errors import SynthesisNotFound
from ..formula import Apply, Formula, Var, substitute

DEFAULT_CAP = 12

TARGETS = {"and": AND, "or": OR, "not": NOT}


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def synthesize(
    base: Base,
    target: BoolFn,
    names: tuple[str, ...] | None = None,
    read_once: bool = True,
    cap: int = DEFAULT_CAP,
) -> Formula:
    """Smallest B-formula over ``names`` whose truth table is ``target``.

    With ``read_once`` every name occurs exactly once, otherwise names may
    repeat (and need not all occur).  Leaves are the names and the base's
    constants.  Candidates are deduplicated by (names used, truth table),
    which is sound because a composite's table depends on nothing else.
    Raises :class:`SynthesisNotFound` once formulas up to ``cap`` nodes are
    exhausted; that outcome is inconclusive.
    """
    if names is None:
        names = ("x", "y") if target.arity == 2 else tuple(f"x{i}" for i in range(1, target.arity + 1))
        if target.arity == 1:
            names = ("x",)
    if len(names) != target.arity:
        raise ValueError("give one variable name per target argument")
    rows = list(tuples(target.arity))
    want = tuple(target(*r) for r in rows)
    full = frozenset(range(len(names)))

    # key: (used variable indices, table over rows) -> formula
    best: dict[tuple, Formula] = {}
    by_size: dict[int, list[tuple]] = {}

    def add(key: tuple, f: Formula, size: int) -> Formula | None:
        if key in best:
            return None
        best[key] = f
        by_size.setdefault(size, []).append(key)
        used, table = key
        if table == want and (used == full or not read_once):
            return f
        return None

    leaves = []
    for i, n in enumerate(names):
        leaves.append(((frozenset([i]), tuple(r[i] for r in rows)), Var(n)))
    for fn in base:
        if fn.arity == 0:
            leaves.append(((frozenset(), (fn.table[0],) * len(rows)), Apply(fn)))
    for key, f in leaves:
        hit = add(key, f, 1)
        if hit is not None:
            return hit

    funcs = [fn for fn in base if fn.arity > 0]
    for size in range(2, cap + 1):
        for fn in funcs:
            for split in _compositions(size - 1, fn.arity):
                pools = [by_size.get(s, []) for s in split]
                if any(not p for p in pools):
                    continue
                for combo in itertools.product(*pools):
                    used = frozenset()
                    ok = True
                    for u, _ in combo:
                        if read_once and used & u:
                            ok = False
                            break
                        used |= u
                    if not ok:
                        continue
                    table = tuple(
                        fn(*(t[k] for _, t in combo)) for k in range(len(rows))
                    )
                    key = (used, table)
                    if key in best:
                        continue
                    f = Apply(fn, tuple(best[c] for c in combo))
                    hit = add(key, f, size)
                    if hit is not None:
                        return hit
    kind = "read-once " if read_once else ""
    raise SynthesisNotFound(
        f"no {kind}formula for {target.name} over {base} with at most {cap} nodes (inconclusive)"
    )


def synth_short(base: Base, target: str | BoolFn, cap: int = DEFAULT_CAP) -> Formula:
    """Read-once realisation of ``and``/``or`` (over x, y) or ``not`` (over x)."""
    fn = TARGETS[target] if isinstance(target, str) else target
    return synthesize(base, fn, read_once=True, cap=cap)


def instantiate(template: Formula, *args: Formula, names: tuple[str, ...] = ("x", "y")) -> Formula:
    """Plug ``args`` into a template built over ``names``."""
    return substitute(template, {Var(n): a for n, a in zip(names, args)})


def occurrences(phi: Formula, name: str) -> int:
    if isinstance(phi, Var):
        return int(phi.name == name)
    return sum(occurrences(c, name) for c in phi.children)
