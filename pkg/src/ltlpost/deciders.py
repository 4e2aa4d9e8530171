"""Fragment-specific satisfiability procedures and the dispatcher."""

from __future__ import annotations

import itertools
from enum import Enum

from .boolfn import Base, BoolFn, affine_form, base_within, essential_positions, is_builtin
from .classify import FragmentSpec, Strategy, classify
from .errors import FragmentError, InvariantViolation, ResourceLimitError
from .formula import (
    DEFAULT_WORK_LIMIT,
    Apply,
    Eventually,
    Formula,
    Globally,
    LassoStructure,
    Next,
    Since,
    Until,
    Var,
    all_false_lasso,
    all_true_lasso,
    const,
    eval_at,
    functions,
    is_constant_node,
    is_propositional,
    sat_bounded,
    temporal_ops,
    to_text,
    variables,
    x_depth,
)
from .reductions.common import to_builtin
from .result import SatResult
from .tableau import DEFAULT_MAX_ATOMS, decide_tableau

__all__ = [
    "ConstStatus",
    "SatResult",
    "check_fragment",
    "constant_analysis_n",
    "decide",
    "decide_all_true",
    "decide_monotone",
    "decide_n",
    "decide_prop",
    "decide_self_dual",
    "decide_x_bounded",
    "decide_xor_next",
    "monotone_rewrite",
    "xor_layers",
]


class ConstStatus(str, Enum):
    CONST0 = "Const0"
    CONST1 = "Const1"
    NO_CONSTANT = "NoConstant"


def check_fragment(phi: Formula, spec: FragmentSpec) -> None:
    for f in functions(phi):
        if not spec.base.contains(f):
            raise FragmentError(f"connective {f.name!r} is not in the base {spec.base}")
    extra = temporal_ops(phi) - spec.temporal
    if extra:
        raise FragmentError(f"temporal operators {sorted(extra)} are outside {sorted(spec.temporal)}")


def _require(phi: Formula, test, what: str) -> None:
    bad = [f.name for f in functions(phi) if not test(f)]
    if bad:
        raise FragmentError(f"connectives {bad} are not {what}")


def _verified(phi: Formula, method: str, lasso: LassoStructure, index: int = 0) -> SatResult:
    if not eval_at(lasso, index, phi):
        raise InvariantViolation(f"{method}: witness {lasso} at {index} does not satisfy {to_text(phi)}")
    return SatResult(True, method, (lasso, index))


def _search_witness(phi: Formula, method: str, max_atoms: int) -> SatResult:
    """Witness for a formula already known to be satisfiable: small lassos first, then the tableau."""
    for lasso in (all_true_lasso(variables(phi)), all_false_lasso()):
        if eval_at(lasso, 0, phi):
            return SatResult(True, method, (lasso, 0))
    try:
        found = sat_bounded(phi, 2, 2, work_limit=20_000)
    except ResourceLimitError:
        found = None
    if found is None:
        res = decide_tableau(to_builtin(phi), max_atoms=max_atoms)
        if not res.satisfiable:
            raise InvariantViolation(f"{method} says satisfiable but the tableau disagrees on {to_text(phi)}")
        found = res.witness
    return _verified(phi, method, *found)


# -- trivial fragments -------------------------------------------------------------


def decide_all_true(phi: Formula) -> SatResult:
    from .boolfn import is_one_reproducing

    _require(phi, is_one_reproducing, "1-reproducing")
    return _verified(phi, Strategy.ALL_TRUE.value, all_true_lasso(variables(phi)))


def decide_self_dual(phi: Formula) -> SatResult:
    from .boolfn import is_self_dual

    _require(phi, is_self_dual, "self-dual")
    for lasso in (all_true_lasso(variables(phi)), all_false_lasso()):
        if eval_at(lasso, 0, phi):
            return SatResult(True, Strategy.SELF_DUAL.value, (lasso, 0))
    raise InvariantViolation(f"neither constant structure satisfies the self-dual formula {to_text(phi)}")


# -- connectives depending on at most one argument ----------------------------------


def constant_analysis_n(phi: Formula) -> ConstStatus:
    """Whether ``phi`` is equivalent to a constant, and which one."""
    from .boolfn import depends_on_at_most_one

    _require(phi, depends_on_at_most_one, "dependent on at most one argument")
    memo: dict[Formula, ConstStatus] = {}

    def go(f: Formula) -> ConstStatus:
        got = memo.get(f)
        if got is not None:
            return got
        if isinstance(f, Var):
            out = ConstStatus.NO_CONSTANT
        elif isinstance(f, Apply):
            out = _apply_status(f.fn, [go(a) for a in f.args])
        elif isinstance(f, (Next, Eventually, Globally)):
            # F c, G c and X c are all equivalent to c
            out = go(f.arg)
        elif isinstance(f, Until):
            left, right = go(f.left), go(f.right)
            if right is not ConstStatus.NO_CONSTANT:
                out = right
            elif left is ConstStatus.CONST0:
                out = right
            else:
                # 1 U right is F right, which is constant only when right is
                out = ConstStatus.NO_CONSTANT
        elif isinstance(f, Since):
            right = go(f.right)
            if right is not ConstStatus.NO_CONSTANT:
                out = right
            else:
                out = ConstStatus.NO_CONSTANT
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[f] = out
        return out

    return go(phi)


def _apply_status(fn: BoolFn, args: list[ConstStatus]) -> ConstStatus:
    ess = essential_positions(fn)
    if not ess:
        return ConstStatus.CONST1 if fn.table[0] else ConstStatus.CONST0
    (k,) = ess
    if args[k] is ConstStatus.NO_CONSTANT:
        return ConstStatus.NO_CONSTANT
    # evaluate with the essential argument fixed; the others do not matter
    point = [0] * fn.arity
    point[k] = 1 if args[k] is ConstStatus.CONST1 else 0
    return ConstStatus.CONST1 if fn(*point) else ConstStatus.CONST0


def decide_n(phi: Formula, max_atoms: int = DEFAULT_MAX_ATOMS) -> SatResult:
    status = constant_analysis_n(phi)
    method = Strategy.CONSTANT_ANALYSIS.value
    if status is ConstStatus.CONST0:
        return SatResult(False, method)
    return _search_witness(phi, method, max_atoms)


# -- monotone connectives ---------------------------------------------------------


def _is_zero(f: Formula) -> bool:
    return is_constant_node(f, 0)


def monotone_rewrite(phi: Formula) -> Formula:
    """Apply the four zero-propagation rules until nothing changes."""
    from .boolfn import is_monotone

    _require(phi, is_monotone, "monotone")
    zero = const(0)
    memo: dict[Formula, Formula] = {}

    def go(f: Formula) -> Formula:
        got = memo.get(f)
        if got is not None:
            return got
        if is_propositional(f) and not _is_zero(f) and not _all_ones(f):
            # a monotone propositional formula is satisfiable iff it holds when everything is 1
            out = zero
        elif isinstance(f, Var):
            out = f
        elif isinstance(f, Apply):
            args = tuple(go(a) for a in f.args)
            out = zero if not f.fn(*(0 if _is_zero(a) else 1 for a in args)) else Apply(f.fn, args)
        elif isinstance(f, (Next, Eventually, Globally)):
            a = go(f.arg)
            out = zero if _is_zero(a) else type(f)(a)
        else:
            left, right = go(f.left), go(f.right)
            if _is_zero(right):
                out = zero
            elif _is_zero(left):
                out = right
            else:
                out = type(f)(left, right)
        memo[f] = out
        return out

    prev, cur = None, phi
    while cur != prev:
        prev, cur = cur, go(cur)
        memo.clear()
    return cur


def _all_ones(f: Formula) -> int:
    if isinstance(f, Var):
        return 1
    return f.fn(*(_all_ones(a) for a in f.args))


def decide_monotone(phi: Formula) -> SatResult:
    method = Strategy.MONOTONE_REWRITE.value
    if _is_zero(monotone_rewrite(phi)):
        return SatResult(False, method)
    return _verified(phi, method, all_true_lasso(variables(phi)))


# -- linear connectives with X ----------------------------------------------------------


def xor_layers(items: list[Formula]) -> tuple[int, frozenset[str], list[Formula]]:
    """Write the xor of ``items`` as ``c xor (xor of variables) xor (xor of X psi_i)``.

    Returns ``(c, variables with odd multiplicity, [psi_i])``.
    """
    c = 0
    odd: set[str] = set()
    nexts: list[Formula] = []
    stack = list(items)
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            odd ^= {f.name}
        elif isinstance(f, Next):
            nexts.append(f.arg)
        elif isinstance(f, Apply):
            form = affine_form(f.fn)
            if form is None:
                raise FragmentError(f"connective {f.fn.name!r} is not linear")
            k, coeffs = form
            c ^= k
            stack.extend(a for a, w in zip(f.args, coeffs) if w)
        else:
            raise FragmentError("only X may occur with linear connectives here")
    return c, frozenset(odd), nexts


def xor_status(items: list[Formula]) -> tuple[bool, bool]:
    """``(satisfiable, tautology)`` for the xor of ``items``, layer by layer."""
    c, odd, nexts = xor_layers(items)
    if odd:
        return True, False
    if not nexts:
        return bool(c), bool(c)
    sat, taut = xor_status(nexts)
    if c == 0:
        return sat, taut
    return not taut, not sat


def _xor_witness(phi: Formula) -> tuple[LassoStructure, int]:
    # everything false first; if that fails, flip one variable that survives cancellation
    depth = x_depth(phi)
    if eval_at(all_false_lasso(), 0, phi):
        return all_false_lasso(), 0
    terms: dict[tuple[str, int], int] = {}
    layer, d = [phi], 0
    while layer:
        _, odd, nexts = xor_layers(layer)
        for name in odd:
            terms[(name, d)] = 1
        layer, d = nexts, d + 1
    for name, d in sorted(terms, key=lambda t: (t[1], t[0])):
        states = [frozenset()] * (depth + 1)
        states[d] = frozenset([name])
        lasso = LassoStructure(tuple(states), (frozenset(),))
        if eval_at(lasso, 0, phi):
            return lasso, 0
    raise InvariantViolation(f"no single flip satisfies {to_text(phi)}")


def decide_xor_next(phi: Formula) -> SatResult:
    extra = temporal_ops(phi) - {"X"}
    if extra:
        raise FragmentError(f"xor decomposition allows X only, found {sorted(extra)}")
    sat, _ = xor_status([phi])
    method = Strategy.XOR_NEXT.value
    if not sat:
        return SatResult(False, method)
    return _verified(phi, method, *_xor_witness(phi))


# -- bounded and propositional search -------------------------------------------------


def decide_x_bounded(phi: Formula, work_limit: int = DEFAULT_WORK_LIMIT) -> SatResult:
    """Try every assignment to the first X-depth + 1 states, all-false afterwards."""
    depth = x_depth(phi)
    names = sorted(variables(phi))
    states = [
        frozenset(n for n, b in zip(names, bits) if b)
        for bits in itertools.product((0, 1), repeat=len(names))
    ]
    total = len(states) ** (depth + 1)
    if total > work_limit:
        raise ResourceLimitError(f"X-bounded search needs {total} candidates, above {work_limit}")
    method = Strategy.X_BOUNDED.value
    for combo in itertools.product(states, repeat=depth + 1):
        lasso = LassoStructure(combo, (frozenset(),))
        if eval_at(lasso, 0, phi):
            return SatResult(True, method, (lasso, 0))
    return SatResult(False, method)


def decide_prop(phi: Formula, base: Base | None = None, work_limit: int = DEFAULT_WORK_LIMIT) -> SatResult:
    if not is_propositional(phi):
        raise FragmentError("propositional decision needs a formula without temporal operators")
    names = sorted(variables(phi))
    linear = base_within(base, "L") if base is not None else all(affine_form(f) for f in functions(phi))
    if linear:
        method = Strategy.PROP_LINEAR.value

        def value(true_names) -> int:
            return int(eval_at(LassoStructure((), (frozenset(true_names),)), 0, phi))

        c = value(())
        if c:
            return _verified(phi, method, all_false_lasso())
        for n in names:
            if value([n]) ^ c:
                return _verified(phi, method, LassoStructure((), (frozenset([n]),)))
        return SatResult(False, method)
    method = Strategy.PROP_ENUM.value
    if 2 ** len(names) > work_limit:
        raise ResourceLimitError(f"truth table over {len(names)} variables exceeds the work limit")
    for bits in itertools.product((0, 1), repeat=len(names)):
        lasso = LassoStructure((), (frozenset(n for n, b in zip(names, bits) if b),))
        if eval_at(lasso, 0, phi):
            return SatResult(True, method, (lasso, 0))
    return SatResult(False, method)


# -- dispatch -------------------------------------------------------------------------


def decide(
    phi: Formula,
    spec: FragmentSpec,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> SatResult:
    """Decide satisfiability of ``phi`` with the procedure chosen for its fragment."""
    check_fragment(phi, spec)
    strategy = classify(spec).strategy
    if strategy is Strategy.ALL_TRUE:
        res = decide_all_true(phi)
    elif strategy is Strategy.SELF_DUAL:
        res = decide_self_dual(phi)
    elif strategy is Strategy.CONSTANT_ANALYSIS:
        res = decide_n(phi, max_atoms)
    elif strategy is Strategy.MONOTONE_REWRITE:
        res = decide_monotone(phi)
    elif strategy is Strategy.XOR_NEXT:
        res = decide_xor_next(phi)
    elif strategy in (Strategy.PROP_LINEAR, Strategy.PROP_ENUM):
        res = decide_prop(phi, spec.base, work_limit)
    elif strategy is Strategy.X_BOUNDED:
        res = decide_x_bounded(phi, work_limit)
    else:
        res = decide_tableau(to_builtin(phi), max_atoms=max_atoms)
    return res.check(phi)


def reference_verdict(
    phi: Formula, max_atoms: int = DEFAULT_MAX_ATOMS, initial: bool = False
) -> SatResult:
    """The tableau's answer on the built-in expansion of ``phi``.

    ``initial`` asks for a model satisfying ``phi`` at position 0 instead of anywhere.
    """
    if not all(is_builtin(f) for f in functions(phi)):
        phi = to_builtin(phi)
    return decide_tableau(phi, max_atoms=max_atoms, initial=initial)
