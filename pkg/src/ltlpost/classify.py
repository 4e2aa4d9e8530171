"""Complexity of satisfiability for a fragment (connective base, temporal operators)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .boolfn import Base, base_within
from .formula import TEMPORAL_OPS


class Complexity(str, Enum):
    TRIVIAL = "Trivial"
    PTIME = "PTime"
    NP_COMPLETE = "NPComplete"
    PSPACE_COMPLETE = "PSPACEComplete"
    OPEN = "Open"


class Strategy(str, Enum):
    ALL_TRUE = "AllTrueWitness"
    SELF_DUAL = "SelfDualWitness"
    CONSTANT_ANALYSIS = "ConstantAnalysisN"
    MONOTONE_REWRITE = "MonotoneRewrite"
    XOR_NEXT = "XorNext"
    PROP_LINEAR = "PropLinear"
    PROP_ENUM = "PropEnum"
    X_BOUNDED = "XBounded"
    TABLEAU = "Tableau"


# Rank used for the monotonicity check; Open is deliberately unordered.
RANK = {
    Complexity.TRIVIAL: 0,
    Complexity.PTIME: 1,
    Complexity.NP_COMPLETE: 2,
    Complexity.PSPACE_COMPLETE: 3,
}


def parse_ops(text: str | Iterable[str]) -> frozenset[str]:
    """``"F,X"``, ``"FX"`` or ``["F", "X"]`` to a temporal operator set.  Empty text means no operators."""
    if isinstance(text, str):
        items = [c for t in text.replace(" ", ",").split(",") for c in t.strip()]
    else:
        items = list(text)
    bad = [t for t in items if t not in TEMPORAL_OPS]
    if bad:
        raise ValueError(f"unknown temporal operators {bad}; choose from {', '.join(TEMPORAL_OPS)}")
    return frozenset(items)


def format_ops(ops: Iterable[str]) -> str:
    s = set(ops)
    return "{" + ",".join(o for o in TEMPORAL_OPS if o in s) + "}"


@dataclass(frozen=True)
class FragmentSpec:
    base: Base
    temporal: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "temporal", parse_ops(self.temporal))


@dataclass(frozen=True)
class Verdict:
    complexity: Complexity
    strategy: Strategy
    citation: str

    def __post_init__(self) -> None:
        if self.complexity is Complexity.TRIVIAL and self.strategy not in (
            Strategy.ALL_TRUE,
            Strategy.SELF_DUAL,
        ):
            raise ValueError("trivial verdicts need a witness strategy")
        if self.complexity is Complexity.OPEN and self.strategy is not Strategy.TABLEAU:
            raise ValueError("open verdicts fall back to the tableau")

    def to_json(self) -> dict:
        return {
            "class": self.complexity.value,
            "strategy": self.strategy.value,
            "citation": self.citation,
        }


def classify(spec: FragmentSpec) -> Verdict:
    B, M = spec.base, spec.temporal
    if base_within(B, "R1"):
        return Verdict(
            Complexity.TRIVIAL, Strategy.ALL_TRUE,
            "every connective is 1-reproducing: the all-true structure satisfies every formula",
        )
    if base_within(B, "D"):
        return Verdict(
            Complexity.TRIVIAL, Strategy.SELF_DUAL,
            "every connective is self-dual: the all-true or the all-false structure satisfies the formula",
        )
    if base_within(B, "N"):
        return Verdict(
            Complexity.PTIME, Strategy.CONSTANT_ANALYSIS,
            "connectives depend on at most one argument: a formula is unsatisfiable iff it is the constant 0",
        )
    if base_within(B, "M"):
        return Verdict(
            Complexity.PTIME, Strategy.MONOTONE_REWRITE,
            "monotone connectives: rewrite unsatisfiable parts to 0, then check the all-true structure",
        )
    if base_within(B, "L"):
        if not M:
            return Verdict(
                Complexity.PTIME, Strategy.PROP_LINEAR,
                "linear propositional formulae: satisfiable iff not the constant 0",
            )
        if M <= {"X"}:
            return Verdict(
                Complexity.PTIME, Strategy.XOR_NEXT,
                "linear connectives with X only: layered xor decomposition",
            )
        return Verdict(
            Complexity.OPEN, Strategy.TABLEAU,
            "linear connectives with F, G, U or S: complexity is an open problem",
        )
    # by elimination the base expresses x and not y
    if not M:
        return Verdict(
            Complexity.NP_COMPLETE, Strategy.PROP_ENUM,
            "x and not y is expressible: propositional satisfiability is NP-complete",
        )
    if M <= {"X"}:
        return Verdict(
            Complexity.NP_COMPLETE, Strategy.X_BOUNDED,
            "x and not y is expressible; X only: a model needs only X-depth + 1 states",
        )
    if M <= {"F", "G"}:
        return Verdict(
            Complexity.NP_COMPLETE, Strategy.TABLEAU,
            "x and not y is expressible; F and G only: NP-complete",
        )
    return Verdict(
        Complexity.PSPACE_COMPLETE, Strategy.TABLEAU,
        "x and not y is expressible; U, S, or X together with F or G: PSPACE-complete",
    )


def all_op_sets() -> list[frozenset[str]]:
    """All 32 subsets of {X, F, G, U, S}, smallest first."""
    return [
        frozenset(c)
        for r in range(len(TEMPORAL_OPS) + 1)
        for c in itertools.combinations(TEMPORAL_OPS, r)
    ]
