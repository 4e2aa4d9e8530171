"""Quantified Boolean formulae and their encoding into LTL with only S (or only U).

The encoding lays out the evaluation tree of the QBF as a sequence of
state blocks in the past of the evaluation point: the universal variables
run through every assignment across the blocks and the existential ones
are a function of the earlier variables.  Markers ``__t0..__tn`` and
``__u0..__un`` delimit the blocks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from ..boolfn import AND, ANDNOT, NOT, OR, Base
from ..errors import PreconditionError
from ..formula import (
    Apply,
    Formula,
    LassoStructure,
    Since,
    Until,
    Var,
    and_,
    conj,
    eval_at,
    is_propositional,
    not_,
    or_,
    parse,
    to_text,
    variables,
)
from .common import FreshNames, ReductionOutput, replace_constant_one, taken_names
from .synth import instantiate, synth_short, synthesize

FORALL, EXISTS = "forall", "exists"


@dataclass(frozen=True)
class QbfInstance:
    prefix: tuple[tuple[str, str], ...]
    matrix: Formula

    def __post_init__(self) -> None:
        names = [v for _, v in self.prefix]
        if len(set(names)) != len(names):
            raise ValueError("quantified variables must be distinct")
        for q, _ in self.prefix:
            if q not in (FORALL, EXISTS):
                raise ValueError(f"unknown quantifier {q!r}")
        if not is_propositional(self.matrix):
            raise ValueError("the matrix must be free of temporal operators")
        for f in _connectives(self.matrix):
            if f not in ("and", "or", "not", "true", "false"):
                raise ValueError(f"the matrix may use and/or/not only, found {f!r}")
        free = variables(self.matrix) - set(names)
        if free:
            raise ValueError(f"matrix variables {sorted(free)} are not quantified")

    @property
    def names(self) -> list[str]:
        return [v for _, v in self.prefix]

    def universal(self) -> list[int]:
        """1-based positions of the universally quantified variables."""
        return [i for i, (q, _) in enumerate(self.prefix, 1) if q == FORALL]

    def existential(self) -> list[int]:
        return [i for i, (q, _) in enumerate(self.prefix, 1) if q == EXISTS]

    def __str__(self) -> str:
        quants = " ".join(f"{q} {v}." for q, v in self.prefix)
        return f"{quants} {to_text(self.matrix)}".strip()


def _connectives(phi: Formula) -> set[str]:
    out = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Apply):
            out.add(f.fn.name)
        stack.extend(f.children)
    return out


def parse_qbf(text: str) -> QbfInstance:
    """``forall x`` / ``exists x`` lines, then the matrix.  ``#`` starts a comment."""
    prefix = []
    rest = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if not rest and head[0] in (FORALL, EXISTS):
            if len(head) != 2:
                raise ValueError(f"quantifier line needs exactly one variable: {raw!r}")
            prefix.append((head[0], head[1]))
        else:
            rest.append(line)
    if not rest:
        raise ValueError("missing matrix after the quantifier lines")
    return QbfInstance(tuple(prefix), parse(" ".join(rest)))


def format_qbf(psi: QbfInstance) -> str:
    return "".join(f"{q} {v}\n" for q, v in psi.prefix) + to_text(psi.matrix) + "\n"


def _eval_prop(phi: Formula, env: dict[str, int]) -> int:
    if isinstance(phi, Var):
        return env[phi.name]
    return phi.fn(*(_eval_prop(a, env) for a in phi.args))


def is_valid(psi: QbfInstance) -> bool:
    """Brute-force evaluation of the quantifier prefix."""

    def go(k: int, env: dict[str, int]) -> bool:
        if k == len(psi.prefix):
            return bool(_eval_prop(psi.matrix, env))
        q, v = psi.prefix[k]
        results = (go(k + 1, {**env, v: b}) for b in (0, 1))
        return all(results) if q == FORALL else any(results)

    return go(0, {})


# -- the encoding ---------------------------------------------------------------


@dataclass
class _Builder:
    """How the pieces of the encoding are glued together."""

    block: Callable[[list[Formula]], Formula]  # conjunction of literals
    and2: Callable[[Formula, Formula], Formula]  # conjunctions inside the initialiser
    top: Callable[[list[Formula]], Formula]  # outermost conjunction
    inner_and: Callable[[Formula, Formula], Formula]
    inner_or: Callable[[Formula, Formula], Formula]
    matrix: Callable[[Formula], Formula]
    temporal: type = Since


_PLAIN = _Builder(
    block=conj, and2=and_, top=conj, inner_and=and_, inner_or=or_, matrix=lambda f: f
)


def _markers(psi: QbfInstance, fresh: FreshNames) -> tuple[list[Var], list[Var]]:
    n = len(psi.prefix)
    ts = [Var(fresh.make(f"t{i}")) for i in range(n + 1)]
    us = [Var(fresh.make(f"u{i}")) for i in range(n + 1)]
    return ts, us


def _lit(v: Formula, positive: bool) -> Formula:
    return v if positive else not_(v)


def _encode(psi: QbfInstance, ts: list[Var], us: list[Var], b: _Builder) -> Formula:
    T = b.temporal

    def row(*pairs: tuple[Formula, bool]) -> Formula:
        return b.block([_lit(v, s) for v, s in pairs])

    u0, t0 = us[0], ts[0]
    first = row((u0, True), (t0, False))
    alpha = b.and2(
        b.and2(
            first,
            T(row((u0, True), (t0, False)), T(row((u0, False), (t0, False)), row((u0, False), (t0, True)))),
        ),
        T(T(row((u0, True), (t0, False)), row((u0, False), (t0, False))), row((u0, False), (t0, True))),
    )
    parts = [alpha]
    xs = [Var(v) for v in psi.names]
    for i in psi.universal():
        up, tp, ui, ti, x = us[i - 1], ts[i - 1], us[i], ts[i], xs[i - 1]
        rows = [
            row((up, True), (tp, False), (ui, True), (ti, False), (x, False)),
            row((up, False), (tp, False), (ui, False), (ti, False), (x, False)),
            row((up, False), (tp, False), (ui, False), (ti, True), (x, False)),
            row((up, False), (tp, False), (ui, True), (ti, False), (x, True)),
            row((up, False), (tp, False), (ui, False), (ti, False), (x, True)),
            row((up, False), (tp, True), (ui, False), (ti, True), (x, True)),
        ]
        right = rows[-1]
        for r in reversed(rows[:-1]):
            right = T(r, right)
        left = rows[0]
        for r in rows[1:]:
            left = T(left, r)
        parts.append(T(b.inner_and(right, left), t0))
    for i in psi.existential():
        up, tp, ui, ti, x = us[i - 1], ts[i - 1], us[i], ts[i], xs[i - 1]
        chains = []
        for val in (False, True):
            chains.append(
                T(
                    row((up, True), (tp, False), (ui, True), (ti, False), (x, val)),
                    T(
                        row((up, False), (tp, False), (ui, False), (ti, False), (x, val)),
                        row((up, False), (tp, True), (ui, False), (ti, True), (x, val)),
                    ),
                )
            )
        parts.append(T(b.inner_or(chains[0], chains[1]), t0))
    parts.append(T(b.matrix(psi.matrix), t0))
    return b.top(parts)


def qbf_to_since(psi: QbfInstance) -> ReductionOutput:
    """An S-only formula over and/or/not that is satisfiable iff ``psi`` is valid."""
    fresh = FreshNames(taken_names(psi.matrix) | set(psi.names))
    ts, us = _markers(psi, fresh)
    return ReductionOutput(_encode(psi, ts, us, _PLAIN), tuple(fresh.issued))


def qbf_to_until(psi: QbfInstance) -> ReductionOutput:
    """The time-mirrored encoding: every S replaced by U."""
    fresh = FreshNames(taken_names(psi.matrix) | set(psi.names))
    ts, us = _markers(psi, fresh)
    b = _Builder(**{**_PLAIN.__dict__, "temporal": Until})
    return ReductionOutput(_encode(psi, ts, us, b), tuple(fresh.issued))


def balanced(items: Sequence[Formula], join: Callable[[Formula, Formula], Formula]) -> Formula:
    """Join ``items`` in a binary tree of depth ceil(log2(len(items)))."""
    if not items:
        raise ValueError("nothing to join")
    if len(items) == 1:
        return items[0]
    mid = (len(items) + 1) // 2
    return join(balanced(items[:mid], join), balanced(items[mid:], join))


def tree_depth(phi: Formula, fn_name: str) -> int:
    """Nesting depth of applications of ``fn_name`` along the outermost spine."""
    if isinstance(phi, Apply) and phi.fn.name == fn_name:
        return 1 + max(tree_depth(a, fn_name) for a in phi.args)
    return 0


@dataclass(frozen=True)
class BaseTemplates:
    """Realisations of the standard connectives over a base that can express x and not y."""

    base: Base
    and_b: Formula  # over the base alone, variables may repeat
    and1: Formula  # read-once over base + {1}
    or1: Formula
    not1: Formula

    @classmethod
    def find(cls, base: Base) -> "BaseTemplates":
        one = _one_for(base)
        extended = base.union([one])
        return cls(
            base,
            synthesize(base, AND, read_once=False),
            synth_short(extended, "and"),
            synth_short(extended, "or"),
            synth_short(extended, "not"),
        )

    def conj(self, a: Formula, b: Formula) -> Formula:
        return instantiate(self.and_b, a, b)

    def rewrite(self, phi: Formula) -> Formula:
        """Rewrite and/or/not/true/false into the base plus the constant 1."""
        memo: dict[Formula, Formula] = {}

        def go(f: Formula) -> Formula:
            got = memo.get(f)
            if got is not None:
                return got
            if isinstance(f, Var):
                out = f
            elif isinstance(f, Apply):
                name = f.fn.name
                args = [go(a) for a in f.args]
                if name == "and":
                    out = instantiate(self.and1, *args)
                elif name == "or":
                    out = instantiate(self.or1, *args)
                elif name == "not":
                    out = instantiate(self.not1, *args, names=("x",))
                elif name == "true":
                    out = Apply(_one_for(self.base))
                elif name == "false":
                    out = instantiate(self.not1, Apply(_one_for(self.base)), names=("x",))
                elif self.base.contains(f.fn):
                    out = Apply(f.fn, tuple(args))
                else:
                    raise PreconditionError(f"cannot rewrite connective {name!r} into {self.base}")
            else:
                out = type(f)(*(go(c) for c in f.children))
            memo[f] = out
            return out

        return go(phi)

    def realise_andnot(self) -> Formula:
        return synthesize(self.base, ANDNOT, read_once=False)


def _one_for(base: Base):
    for f in base:
        if f.arity == 0 and f.table[0] == 1:
            return f
    from ..boolfn import ONE

    return ONE


def qbf_to_since_b(psi: QbfInstance, base: Base) -> ReductionOutput:
    """:func:`qbf_to_since` rewritten into a pure ``base``-formula.

    Connectives become read-once templates over ``base + {1}``; each
    literal block is wrapped as ``and_B(t, block)``; the outermost
    conjunction becomes a balanced tree of ``and_B``; finally every 1 is
    replaced by the fresh anchor ``t``.  The wrapped blocks force ``t`` on
    every state the encoding inspects, which keeps the result
    equisatisfiable with the plain encoding.
    """
    from ..classify import Complexity, FragmentSpec, classify

    verdict = classify(FragmentSpec(base, frozenset({"S"})))
    if verdict.complexity is not Complexity.PSPACE_COMPLETE:
        raise PreconditionError(f"base {base} cannot express x and not y")
    tpl = BaseTemplates.find(base)
    fresh = FreshNames(taken_names(psi.matrix) | set(psi.names))
    ts, us = _markers(psi, fresh)
    t = Var(fresh.make("t", "anchor"))

    def rw(f: Formula) -> Formula:
        return replace_constant_one(tpl.rewrite(f), t)

    builder = _Builder(
        block=lambda lits: tpl.conj(t, rw(conj(lits))),
        and2=tpl.conj,
        top=lambda parts: balanced(parts, tpl.conj),
        inner_and=lambda a, b: replace_constant_one(instantiate(tpl.and1, a, b), t),
        inner_or=lambda a, b: replace_constant_one(instantiate(tpl.or1, a, b), t),
        matrix=rw,
    )
    out = _encode(psi, ts, us, builder)
    return ReductionOutput(out, tuple(fresh.issued))


# -- shape of models --------------------------------------------------------------


def _roles(psi: QbfInstance) -> tuple[list[str], list[str]]:
    fresh = qbf_to_since(psi).fresh_vars
    role = dict((r, n) for n, r in fresh)
    n = len(psi.prefix)
    return [role[f"t{i}"] for i in range(n + 1)], [role[f"u{i}"] for i in range(n + 1)]


def block_labels(psi: QbfInstance, i: int) -> dict[str, bool]:
    """Values forced on every state of block ``i`` (1 = the block holding the evaluation point).

    Existential markers copy the marker of the previous position; they are
    resolved here through the chain down to the nearest universal (or 0).
    """
    ts, us = _roles(psi)
    uni = psi.universal()
    k = len(uni)
    total = 3 * 2**k
    out: dict[str, bool] = {ts[0]: i == total, us[0]: i == 1}
    tv, uv = out[ts[0]], out[us[0]]
    h = 0
    for pos in range(1, len(psi.prefix) + 1):
        if pos in uni:
            h += 1
            width = 3 * 2 ** (k - h)
            x = psi.names[pos - 1]
            out[x] = -(-i // width) % 2 == 0
            tv = i % width == 0
            uv = i % width == 1
        out[ts[pos]] = tv
        out[us[pos]] = uv
    return out


def find_cut_points(lasso: LassoStructure, m: int, psi: QbfInstance) -> list[int] | None:
    """Cut points ``0 = a_0 < ... < a_N <= m + 1`` (N = 3 * 2^k) matching the block pattern.

    State ``m - r`` lies in block ``i`` when ``a_{i-1} <= r < a_i``.  Blocks
    are matched by dynamic programming over ``r``; the shortest overall
    span is kept, since the functional-dependence check on existential
    variables only gets harder with more states.
    """
    k = len(psi.universal())
    total = 3 * 2**k
    labels = [block_labels(psi, i) for i in range(1, total + 1)]

    def fits(i: int, state: frozenset[str]) -> bool:
        return all((name in state) == v for name, v in labels[i - 1].items())

    # parent[r][i] = block of state r - 1 on some valid run
    parent: list[dict[int, int | None]] = []
    if not fits(1, lasso.state(m)):
        return None
    parent.append({1: None})
    r = 0
    while total not in parent[r]:
        r += 1
        if r > m:
            return None
        s = lasso.state(m - r)
        layer: dict[int, int | None] = {}
        for i in parent[r - 1]:
            for nxt in (i, i + 1):
                if nxt <= total and nxt not in layer and fits(nxt, s):
                    layer[nxt] = i
        if not layer:
            return None
        parent.append(layer)
    blocks = [total]
    for rr in range(r, 0, -1):
        blocks.append(parent[rr][blocks[-1]])
    blocks.reverse()  # block of state m - r for r = 0..end
    cuts = [0]
    for rr in range(1, len(blocks)):
        if blocks[rr] != blocks[rr - 1]:
            cuts.append(rr)
    cuts.append(len(blocks))
    return cuts


def _functional(lasso: LassoStructure, states: list[int], psi: QbfInstance) -> bool:
    names = psi.names
    for q in psi.existential():
        seen: dict[tuple, bool] = {}
        for j in states:
            s = lasso.state(j)
            key = tuple(n in s for n in names[: q - 1])
            val = names[q - 1] in s
            if seen.setdefault(key, val) != val:
                return False
    return True


def verify_model_shape(lasso: LassoStructure, m: int, psi: QbfInstance) -> bool:
    """Check that a model of the S-encoding has the block layout of a quantifier tree.

    Requires that ``lasso`` satisfies ``qbf_to_since(psi)`` at ``m``.  True iff
    cut points exist such that each block carries its forced marker and
    universal-variable values, and each existential variable is a function
    of the variables quantified before it across the covered states.
    """
    if m < 0:
        raise PreconditionError("state index must be nonnegative")
    if not eval_at(lasso, m, qbf_to_since(psi).formula):
        raise PreconditionError("the lasso does not satisfy the encoding at the given index")
    cuts = find_cut_points(lasso, m, psi)
    if cuts is None:
        return False
    span = [m - r for r in range(cuts[-1])]
    return _functional(lasso, span, psi)


def skolem_choice(psi: QbfInstance, env: dict[str, int], pos: int) -> int:
    """Value for the existential variable at 1-based ``pos`` that keeps the rest valid (0 if none)."""
    name = psi.names[pos - 1]
    for b in (1, 0):
        rest = QbfInstance(psi.prefix[pos:], _fix(psi.matrix, {**env, name: b}))
        if is_valid(rest):
            return b
    return 0


def _fix(phi: Formula, env: dict[str, int]) -> Formula:
    from ..formula import const, substitute

    return substitute(phi, {Var(n): const(v) for n, v in env.items()})


def canonical_model(psi: QbfInstance) -> tuple[LassoStructure, int]:
    """One state per block, oldest block first; the evaluation point is the last prefix state."""
    if not is_valid(psi):
        raise PreconditionError("only valid QBFs have models of the encoding")
    k = len(psi.universal())
    total = 3 * 2**k
    states = []
    for i in range(total, 0, -1):
        lab = block_labels(psi, i)
        env = {n: int(lab[n]) for n in psi.names if n in lab}
        for q in psi.existential():
            # only earlier variables matter; later universals are not fixed yet
            earlier = {n: env[n] for n in psi.names[: q - 1]}
            env[psi.names[q - 1]] = skolem_choice(psi, earlier, q)
        true_vars = {n for n, v in lab.items() if v} | {n for n, v in env.items() if v}
        states.append(frozenset(true_vars))
    return LassoStructure(tuple(states), (frozenset(),)), total - 1


def enumerate_qbfs(max_quantifiers: int, max_matrix_nodes: int) -> list[QbfInstance]:
    """Every prenex QBF over ``x1..xn`` (n <= max_quantifiers) with a small and/or/not matrix."""
    from ..enumerate import enumerate_formulas
    from ..boolfn import FALSE, TRUE

    out = []
    for n in range(max_quantifiers + 1):
        names = [f"x{i}" for i in range(1, n + 1)]
        consts = [] if n else [TRUE, FALSE]
        matrices = enumerate_formulas(
            max_matrix_nodes, names, Base.of(AND, OR, NOT, *consts), frozenset()
        )
        for quants in itertools.product((FORALL, EXISTS), repeat=n):
            prefix = tuple(zip(quants, names))
            for mat in matrices:
                out.append(QbfInstance(prefix, mat))
    return out
