"""Temporal B-formulae: AST, text syntax, and exact semantics on lassos.

Grammar::

    formula := unary [ ("U" | "S") unary ]
    unary   := ("X" | "F" | "G") unary | atom
    atom    := "(" formula ")" | name "(" formula { "," formula } ")" | name | "0" | "1"

``U`` and ``S`` do not associate: ``x U y U z`` is rejected, write
``x U (y U z)``.  A bare name is a constant if it names an arity-0
function, otherwise a variable.  ``and``, ``or``, ``not``, ``xor``,
``true`` and ``false`` are always available; ``0``/``1`` abbreviate
``false``/``true``.  Names beginning with ``__`` are reserved for
variables introduced by reductions.

A lasso is a finite prefix of assignments followed by a loop that repeats
forever.  Variables missing from an assignment are false, including
variables that never appear anywhere.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .boolfn import BUILTINS, FALSE, TRUE, Base, BoolFn
from .errors import FormulaSyntaxError, PreconditionError, ResourceLimitError

RESERVED_PREFIX = "__"
TEMPORAL_OPS = ("X", "F", "G", "U", "S")


class Formula:
    __slots__ = ()

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def _key(self) -> tuple:
        raise NotImplementedError

    def __str__(self) -> str:
        return to_text(self)

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()


@dataclass(frozen=True, eq=True)
class Var(Formula):
    name: str

    def _key(self):
        return (self.name,)

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True)
class Apply(Formula):
    fn: BoolFn
    args: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        if len(self.args) != self.fn.arity:
            raise PreconditionError(
                f"{self.fn.name} expects {self.fn.arity} arguments, got {len(self.args)}"
            )

    def _key(self):
        return (self.fn, self.args)

    @property
    def children(self):
        return self.args

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True)
class Next(Formula):
    arg: Formula

    def _key(self):
        return (self.arg,)

    @property
    def children(self):
        return (self.arg,)

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True)
class Eventually(Formula):
    arg: Formula

    def _key(self):
        return (self.arg,)

    @property
    def children(self):
        return (self.arg,)

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True)
class Globally(Formula):
    arg: Formula

    def _key(self):
        return (self.arg,)

    @property
    def children(self):
        return (self.arg,)

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True)
class Until(Formula):
    left: Formula
    right: Formula

    def _key(self):
        return (self.left, self.right)

    @property
    def children(self):
        return (self.left, self.right)

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True)
class Since(Formula):
    left: Formula
    right: Formula

    def _key(self):
        return (self.left, self.right)

    @property
    def children(self):
        return (self.left, self.right)

    __hash__ = Formula.__hash__


UNARY = {"X": Next, "F": Eventually, "G": Globally}
BINARY = {"U": Until, "S": Since}
OP_OF = {Next: "X", Eventually: "F", Globally: "G", Until: "U", Since: "S"}


# -- construction helpers ---------------------------------------------------

def var(name: str) -> Var:
    return Var(name)


def apply(fn: BoolFn, *args: Formula) -> Apply:
    return Apply(fn, tuple(args))


def const(value: int | bool) -> Apply:
    return Apply(TRUE if value else FALSE)


def and_(a: Formula, b: Formula) -> Apply:
    return Apply(BUILTINS.get("and"), (a, b))


def or_(a: Formula, b: Formula) -> Apply:
    return Apply(BUILTINS.get("or"), (a, b))


def not_(a: Formula) -> Apply:
    return Apply(BUILTINS.get("not"), (a,))


def xor_(a: Formula, b: Formula) -> Apply:
    return Apply(BUILTINS.get("xor"), (a, b))


def conj(items: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    if not items:
        return const(1)
    out = items[0]
    for f in items[1:]:
        out = and_(out, f)
    return out


def disj(items: Sequence[Formula]) -> Formula:
    if not items:
        return const(0)
    out = items[0]
    for f in items[1:]:
        out = or_(out, f)
    return out


def iff(a: Formula, b: Formula) -> Formula:
    """``a <-> b`` spelled out as ``(a and b) or (not a and not b)``."""
    return or_(and_(a, b), and_(not_(a), not_(b)))


# -- traversal ----------------------------------------------------------------

def subformulas(phi: Formula) -> list[Formula]:
    """Distinct subformulae in pre-order, ``phi`` first."""
    seen: dict[Formula, None] = {}
    stack = [phi]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen[f] = None
        stack.extend(reversed(f.children))
    return list(seen)


def size(phi: Formula) -> int:
    """Number of AST nodes, counting repeated subtrees every time."""
    return 1 + sum(size(c) for c in phi.children)


def variables(phi: Formula) -> frozenset[str]:
    return frozenset(f.name for f in subformulas(phi) if isinstance(f, Var))


def functions(phi: Formula) -> list[BoolFn]:
    out: dict[BoolFn, None] = {}
    for f in subformulas(phi):
        if isinstance(f, Apply):
            out[f.fn] = None
    return list(out)


def temporal_ops(phi: Formula) -> frozenset[str]:
    return frozenset(OP_OF[type(f)] for f in subformulas(phi) if type(f) in OP_OF)


def is_propositional(phi: Formula) -> bool:
    return not temporal_ops(phi)


def is_constant_node(phi: Formula, value: int | None = None) -> bool:
    """True if ``phi`` is an application of an arity-0 function (optionally with the given value)."""
    if isinstance(phi, Apply) and phi.fn.arity == 0:
        return value is None or phi.fn.table[0] == value
    return False


def x_depth(phi: Formula) -> int:
    bad = temporal_ops(phi) - {"X"}
    if bad:
        raise PreconditionError(f"x_depth requires X as the only temporal operator, found {sorted(bad)}")
    return _x_depth(phi)


def _x_depth(phi: Formula) -> int:
    inner = max((_x_depth(c) for c in phi.children), default=0)
    return inner + 1 if isinstance(phi, Next) else inner


def since_depth(phi: Formula) -> int:
    memo: dict[Formula, int] = {}

    def go(f: Formula) -> int:
        if f in memo:
            return memo[f]
        inner = max((go(c) for c in f.children), default=0)
        memo[f] = inner + 1 if isinstance(f, Since) else inner
        return memo[f]

    return go(phi)


def substitute(phi: Formula, mapping: dict[Formula, Formula]) -> Formula:
    """Replace every occurrence of a key subformula (outermost first)."""
    memo: dict[Formula, Formula] = {}

    def go(f: Formula) -> Formula:
        if f in mapping:
            return mapping[f]
        if f in memo:
            return memo[f]
        if isinstance(f, Var):
            out = f
        elif isinstance(f, Apply):
            out = Apply(f.fn, tuple(go(a) for a in f.args))
        elif isinstance(f, (Until, Since)):
            out = type(f)(go(f.left), go(f.right))
        else:
            out = type(f)(go(f.arg))
        memo[f] = out
        return out

    return go(phi)


def rename(phi: Formula, names: dict[str, str]) -> Formula:
    return substitute(phi, {Var(a): Var(b) for a, b in names.items()})


# -- printing -----------------------------------------------------------------

def to_text(phi: Formula) -> str:
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Apply):
        if phi.fn.arity == 0:
            return phi.fn.name
        return f"{phi.fn.name}({', '.join(to_text(a) for a in phi.args)})"
    if isinstance(phi, (Until, Since)):
        return f"{_operand(phi.left)} {OP_OF[type(phi)]} {_operand(phi.right)}"
    return f"{OP_OF[type(phi)]} {_operand(phi.arg)}"


def _operand(phi: Formula) -> str:
    text = to_text(phi)
    return f"({text})" if isinstance(phi, (Until, Since)) else text


# -- parsing ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([01])|([(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("name", m.group(1), start))
        elif m.group(2):
            tokens.append(("const", m.group(2), start))
        else:
            tokens.append((m.group(3), m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, base: Base | None, allow_reserved: bool):
        self.tokens = _tokenize(text)
        self.i = 0
        self.base = base or Base()
        self.allow_reserved = allow_reserved

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def lookup(self, name: str) -> BoolFn | None:
        return self.base.get(name) or BUILTINS.get(name)

    def formula(self) -> Formula:
        left = self.unary()
        kind, value, pos = self.peek()
        if kind == "name" and value in BINARY:
            self.take()
            right = self.unary()
            nxt = self.peek()
            if nxt[0] == "name" and nxt[1] in BINARY:
                raise FormulaSyntaxError("binary temporal operators need explicit parentheses", nxt[2])
            return BINARY[value](left, right)
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "name" and value in UNARY:
            self.take()
            return UNARY[value](self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "(":
            inner = self.formula()
            self.take(")")
            return inner
        if kind == "const":
            return const(int(value))
        if kind != "name":
            got = "end of input" if kind == "end" else repr(value)
            raise FormulaSyntaxError(f"expected a formula, found {got}", pos)
        if value in UNARY or value in BINARY:
            raise FormulaSyntaxError(f"operator {value!r} is missing an operand", pos)
        if self.peek()[0] == "(":
            fn = self.lookup(value)
            if fn is None:
                raise FormulaSyntaxError(f"unknown function {value!r}", pos)
            self.take("(")
            args: list[Formula] = []
            if self.peek()[0] != ")":
                args.append(self.formula())
                while self.peek()[0] == ",":
                    self.take(",")
                    args.append(self.formula())
            self.take(")")
            if len(args) != fn.arity:
                raise FormulaSyntaxError(
                    f"{value} expects {fn.arity} arguments, got {len(args)}", pos
                )
            return Apply(fn, tuple(args))
        fn = self.lookup(value)
        if fn is not None:
            if fn.arity != 0:
                raise FormulaSyntaxError(f"function {value!r} used without arguments", pos)
            return Apply(fn)
        if value.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            raise FormulaSyntaxError(f"variable names starting with {RESERVED_PREFIX!r} are reserved", pos)
        return Var(value)


def parse(text: str, base: Base | None = None, allow_reserved: bool = False) -> Formula:
    p = _Parser(text, base, allow_reserved)
    phi = p.formula()
    p.take("end")
    return phi


# -- lassos -------------------------------------------------------------------

Assignment = frozenset


@dataclass(frozen=True)
class LassoStructure:
    prefix: tuple[frozenset[str], ...]
    loop: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        if not self.loop:
            raise ValueError("a lasso needs a nonempty loop")

    @classmethod
    def of(cls, prefix: Iterable[Iterable[str]], loop: Iterable[Iterable[str]]) -> "LassoStructure":
        return cls(tuple(frozenset(s) for s in prefix), tuple(frozenset(s) for s in loop))

    def state(self, i: int) -> frozenset[str]:
        p = len(self.prefix)
        if i < p:
            return self.prefix[i]
        return self.loop[(i - p) % len(self.loop)]

    def unrolled(self, times: int = 1) -> "LassoStructure":
        return LassoStructure(self.prefix + self.loop * times, self.loop)

    def duplicate_state(self, i: int) -> "LassoStructure":
        """Repeat state ``i`` once.  ``i`` must lie in the prefix."""
        if i >= len(self.prefix):
            raise ValueError("only prefix states can be duplicated")
        return LassoStructure(self.prefix[: i + 1] + self.prefix[i:], self.loop)

    def restrict(self, names: Iterable[str]) -> "LassoStructure":
        keep = frozenset(names)
        return LassoStructure(
            tuple(s & keep for s in self.prefix), tuple(s & keep for s in self.loop)
        )

    def to_json(self) -> dict:
        return {
            "prefix": [sorted(s) for s in self.prefix],
            "loop": [sorted(s) for s in self.loop],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LassoStructure":
        if not isinstance(data, dict) or "loop" not in data:
            raise ValueError("lasso document needs a 'loop' array (and optionally 'prefix')")
        prefix = data.get("prefix", [])
        loop = data["loop"]
        for part in (prefix, loop):
            if not isinstance(part, list) or not all(
                isinstance(s, list) and all(isinstance(v, str) for v in s) for s in part
            ):
                raise ValueError("prefix and loop must be arrays of arrays of variable names")
        return cls.of(prefix, loop)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __str__(self) -> str:
        fmt = lambda s: "{" + ",".join(sorted(s)) + "}"
        return "[" + " ".join(map(fmt, self.prefix)) + "] (" + " ".join(map(fmt, self.loop)) + ")^w"


class Labeling:
    """Truth values of every subformula at every distinct position of a lasso.

    The lasso is unrolled once per level of ``S`` nesting so that past
    operators have become periodic by the start of the final loop copy;
    positions past the end fold back into that copy.
    """

    def __init__(self, lasso: LassoStructure, depth: int):
        self.lasso = lasso
        p, L = len(lasso.prefix), len(lasso.loop)
        self.loop_len = L
        self.loop_start = p + depth * L
        self.length = self.loop_start + L
        self.states = [lasso.state(i) for i in range(self.length)]
        self.memo: dict[Formula, list[bool]] = {}

    def position(self, i: int) -> int:
        if i < 0:
            raise ValueError("state index must be nonnegative")
        if i < self.loop_start:
            return i
        return self.loop_start + (i - self.loop_start) % self.loop_len

    def values(self, phi: Formula) -> list[bool]:
        got = self.memo.get(phi)
        if got is not None:
            return got
        n, ls = self.length, self.loop_start
        if isinstance(phi, Var):
            out = [phi.name in s for s in self.states]
        elif isinstance(phi, Apply):
            if phi.fn.arity == 0:
                out = [bool(phi.fn.table[0])] * n
            else:
                cols = [self.values(a) for a in phi.args]
                table = phi.fn.table
                out = []
                for k in range(n):
                    idx = 0
                    for c in cols:
                        idx = (idx << 1) | c[k]
                    out.append(bool(table[idx]))
        elif isinstance(phi, Next):
            a = self.values(phi.arg)
            out = a[1:] + [a[ls]]
        elif isinstance(phi, Since):
            a, b = self.values(phi.left), self.values(phi.right)
            out = []
            prev = False
            for k in range(n):
                prev = b[k] or (a[k] and prev)
                out.append(prev)
        elif isinstance(phi, (Until, Eventually, Globally)):
            if isinstance(phi, Until):
                a, b = self.values(phi.left), self.values(phi.right)
            elif isinstance(phi, Eventually):
                a, b = [True] * n, self.values(phi.arg)
            else:
                a, b = [True] * n, [not v for v in self.values(phi.arg)]
            out = [False] * n
            # loop first: one pass with the wrap-around assumed false is exact at the
            # loop head, a second pass propagates the correct wrap value
            nxt = False
            for _ in range(2):
                for k in range(n - 1, ls - 1, -1):
                    nxt = b[k] or (a[k] and nxt)
                    out[k] = nxt
                nxt = out[ls]
            nxt = out[ls]
            for k in range(ls - 1, -1, -1):
                nxt = b[k] or (a[k] and nxt)
                out[k] = nxt
            if isinstance(phi, Globally):
                out = [not v for v in out]
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self.memo[phi] = out
        return out

    def holds(self, i: int, phi: Formula) -> bool:
        return self.values(phi)[self.position(i)]


def labeling(lasso: LassoStructure, phi: Formula) -> Labeling:
    return Labeling(lasso, since_depth(phi))


def eval_at(lasso: LassoStructure, i: int, phi: Formula) -> bool:
    return labeling(lasso, phi).holds(i, phi)


def all_true_lasso(names: Iterable[str]) -> LassoStructure:
    return LassoStructure((), (frozenset(names),))


def all_false_lasso() -> LassoStructure:
    return LassoStructure((), (frozenset(),))


DEFAULT_WORK_LIMIT = 2_000_000


def _assignments(names: Sequence[str]) -> list[frozenset[str]]:
    return [
        frozenset(n for n, bit in zip(names, bits) if bit)
        for bits in itertools.product((0, 1), repeat=len(names))
    ]


def sat_bounded(
    phi: Formula,
    max_prefix: int,
    max_loop: int,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> tuple[LassoStructure, int] | None:
    """Search every lasso over the formula's variables up to the given bounds.

    Lassos are tried by increasing total length, longer prefix first.  The
    first (lasso, index) where ``phi`` holds is returned.  Absence of a
    witness says nothing about larger bounds.
    """
    if max_prefix < 0 or max_loop < 1:
        raise ValueError("need max_prefix >= 0 and max_loop >= 1")
    names = sorted(variables(phi))
    width = 1 << len(names)
    shapes = sorted(
        ((p, l) for p in range(max_prefix + 1) for l in range(1, max_loop + 1)),
        key=lambda pl: (pl[0] + pl[1], -pl[0]),
    )
    work = sum(width ** (p + l) for p, l in shapes)
    if work > work_limit:
        raise ResourceLimitError(
            f"bounded search would visit {work} lassos, above the limit of {work_limit}"
        )
    states = _assignments(names)
    depth = since_depth(phi)
    for p, l in shapes:
        for combo in itertools.product(states, repeat=p + l):
            lasso = LassoStructure(combo[:p], combo[p:])
            lab = Labeling(lasso, depth)
            vals = lab.values(phi)
            for k, v in enumerate(vals):
                if v:
                    return lasso, k
    return None
