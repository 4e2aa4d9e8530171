"""Rewrite an and/or/not formula over {G,X} or {F,X} into a base that expresses x and not y."""

from __future__ import annotations

from ..boolfn import Base
from ..errors import PreconditionError
from ..formula import Eventually, Formula, Globally, Next, Var, temporal_ops
from .common import FreshNames, ReductionOutput, replace_constant_one, taken_names
from .qbf import BaseTemplates
from .synth import instantiate

OP_SETS = (frozenset({"G", "X"}), frozenset({"F", "X"}))


def always_anchor(t: Formula, andnot: Formula) -> Formula:
    """``G t`` written with F, X and x-and-not-y only: ``g(t, F(g(t, X t)))``."""
    inner = instantiate(andnot, t, Next(t))
    return instantiate(andnot, t, Eventually(inner))


def rewrite_with_true_anchor(phi: Formula, base: Base, ops) -> ReductionOutput:
    """Equisatisfiable pure ``base``-formula over ``ops``.

    Connectives are replaced by read-once templates over ``base + {1}``,
    every 1 becomes the fresh variable ``t``, and the result is conjoined
    with ``t`` and "always t" through the base's realisation of ``and``.
    """
    from ..classify import Complexity, FragmentSpec, classify

    ops = frozenset(ops)
    if ops not in OP_SETS:
        raise PreconditionError("the anchor rewrite works over {G,X} or {F,X}")
    extra = temporal_ops(phi) - ops
    if extra:
        raise PreconditionError(f"formula uses {sorted(extra)} outside {sorted(ops)}")
    verdict = classify(FragmentSpec(base, ops))
    if verdict.complexity not in (Complexity.NP_COMPLETE, Complexity.PSPACE_COMPLETE):
        raise PreconditionError(f"base {base} cannot express x and not y")
    tpl = BaseTemplates.find(base)
    fresh = FreshNames(taken_names(phi))
    t = Var(fresh.make("t", "anchor"))
    body = replace_constant_one(tpl.rewrite(phi), t)
    if "G" in ops:
        always = Globally(t)
    else:
        always = always_anchor(t, tpl.realise_andnot())
    out = tpl.conj(tpl.conj(body, t), always)
    return ReductionOutput(out, tuple(fresh.issued))
