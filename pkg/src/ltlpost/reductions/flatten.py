"""Flatten a formula into one definition per subformula over the built-in connectives."""

from __future__ import annotations

from enum import Enum

from ..errors import PreconditionError
from ..formula import (
    Apply,
    Eventually,
    Formula,
    Globally,
    LassoStructure,
    Next,
    Since,
    Until,
    Var,
    conj,
    const,
    iff,
    labeling,
    not_,
    subformulas,
    temporal_ops,
)
from .common import FreshNames, ReductionOutput, expand_application, taken_names


class FlattenMode(str, Enum):
    FULL = "full"
    FUTURE_ONLY = "future"


def _eventually(x: Formula, mode: FlattenMode) -> Formula:
    return Until(const(1), x) if mode is FlattenMode.FULL else Eventually(x)


def _always(x: Formula, mode: FlattenMode) -> Formula:
    # G x as not F not x, with F spelled per mode
    return not_(_eventually(not_(x), mode))


def flatten(phi: Formula, mode: FlattenMode | str = FlattenMode.FULL) -> ReductionOutput:
    """Equisatisfiable rewrite of ``phi`` using fresh variables ``__x1 .. __xk``.

    ``__xi`` is pinned to the i-th distinct subformula (pre-order, ``phi``
    first) at every state: in the future through ``G`` and, in full mode,
    in the past through ``not(true S not .)``.  Full mode output uses U, S
    and X; future-only mode (input limited to F and G) uses F alone.
    """
    mode = FlattenMode(mode)
    if mode is FlattenMode.FUTURE_ONLY:
        extra = temporal_ops(phi) - {"F", "G"}
        if extra:
            raise PreconditionError(f"future-only flattening allows F and G only, found {sorted(extra)}")
    subs = subformulas(phi)
    fresh = FreshNames(taken_names(phi))
    xs = {f: Var(fresh.make(f"x{i}", f"x{i}")) for i, f in enumerate(subs, 1)}

    defs = []
    for f in subs:
        if isinstance(f, Var):
            rhs = f
        elif isinstance(f, Apply):
            rhs = expand_application(f.fn, [xs[a] for a in f.args])
        elif isinstance(f, Next):
            rhs = Next(xs[f.arg])
        elif isinstance(f, Eventually):
            rhs = _eventually(xs[f.arg], mode)
        elif isinstance(f, Globally):
            rhs = _always(xs[f.arg], mode)
        elif isinstance(f, (Until, Since)):
            rhs = type(f)(xs[f.left], xs[f.right])
        else:
            raise TypeError(f"not a formula: {f!r}")
        defs.append(iff(xs[f], rhs))

    parts: list[Formula] = [xs[phi]]
    for d in defs:
        if mode is FlattenMode.FULL:
            parts.append(_always(d, mode))
            parts.append(not_(Since(const(1), not_(d))))
        else:
            parts.append(_always(d, mode))
    return ReductionOutput(conj(parts), tuple(fresh.issued))


def extend_model(phi: Formula, out: ReductionOutput, lasso: LassoStructure) -> LassoStructure:
    """Label each state with the ``__xi`` whose subformula holds there."""
    lab = labeling(lasso, phi)
    subs = subformulas(phi)
    names = out.fresh_names()
    if len(names) != len(subs):
        raise PreconditionError("reduction output does not belong to this formula")
    cols = [lab.values(f) for f in subs]
    states = []
    for k in range(lab.length):
        extra = {n for n, col in zip(names, cols) if col[k]}
        states.append(lab.states[k] | extra)
    return LassoStructure(tuple(states[: lab.loop_start]), tuple(states[lab.loop_start:]))
