"""Finite Boolean functions as truth tables, plus the clone-membership tests.

Table layout: bit ``k`` of a function's table is its value on the argument
tuple whose binary encoding is ``k``, with argument 1 as the most
significant bit.  So ``AND`` is arity 2, table ``"0001"``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

MAX_ARITY = 6

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class BaseFormatError(ValueError):
    """A base definition file or table string could not be parsed."""


@dataclass(frozen=True)
class BoolFn:
    name: str
    arity: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.arity <= MAX_ARITY:
            raise ValueError(f"{self.name}: arity {self.arity} outside [0, {MAX_ARITY}]")
        if len(self.table) != 1 << self.arity:
            raise ValueError(
                f"{self.name}: table has {len(self.table)} entries, expected {1 << self.arity}"
            )
        if any(b not in (0, 1) for b in self.table):
            raise ValueError(f"{self.name}: table entries must be 0 or 1")

    @classmethod
    def from_string(cls, name: str, table: str) -> "BoolFn":
        if not table or any(c not in "01" for c in table):
            raise BaseFormatError(f"{name}: table {table!r} is not a binary string")
        n = len(table)
        if n & (n - 1):
            raise BaseFormatError(f"{name}: table length {n} is not a power of two")
        return cls(name, n.bit_length() - 1, tuple(int(c) for c in table))

    @classmethod
    def from_callable(cls, name: str, arity: int, fn) -> "BoolFn":
        return cls(name, arity, tuple(int(bool(fn(*a))) for a in tuples(arity)))

    @property
    def signature(self) -> tuple[int, tuple[int, ...]]:
        """Name-independent identity: two functions with equal signatures are the same operator."""
        return (self.arity, self.table)

    def table_string(self) -> str:
        return "".join(map(str, self.table))

    def __call__(self, *args: int) -> int:
        return eval_fn(self, args)

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


def tuples(arity: int) -> Iterator[tuple[int, ...]]:
    """All argument tuples in table order."""
    return itertools.product((0, 1), repeat=arity)


def index_of(args: Sequence[int]) -> int:
    k = 0
    for a in args:
        k = (k << 1) | a
    return k


def eval_fn(f: BoolFn, args: Sequence[int]) -> int:
    if len(args) != f.arity:
        raise ValueError(f"{f.name} expects {f.arity} arguments, got {len(args)}")
    return f.table[index_of([1 if a else 0 for a in args])]


def is_one_reproducing(f: BoolFn) -> bool:
    return f.table[-1] == 1


def is_monotone(f: BoolFn) -> bool:
    # comparing against one-bit-raised neighbours covers every ordered pair by transitivity
    for k, v in enumerate(f.table):
        if not v:
            continue
        for i in range(f.arity):
            bit = 1 << i
            if not k & bit and f.table[k | bit] == 0:
                return False
    return True


def is_self_dual(f: BoolFn) -> bool:
    top = len(f.table) - 1
    return all(f.table[k] != f.table[top ^ k] for k in range(len(f.table)))


def affine_form(f: BoolFn) -> tuple[int, tuple[int, ...]] | None:
    """Return ``(c, coefficients)`` with f = c xor sum(coef_i * x_i), or None if f is not linear."""
    c = f.table[0]
    coeffs = tuple(f.table[1 << (f.arity - 1 - i)] ^ c for i in range(f.arity))
    for args in tuples(f.arity):
        v = c
        for a, w in zip(args, coeffs):
            v ^= a & w
        if v != eval_fn(f, args):
            return None
    return c, coeffs


def is_linear(f: BoolFn) -> bool:
    return affine_form(f) is not None


def is_one_separating(f: BoolFn) -> bool:
    ones = [args for args in tuples(f.arity) if eval_fn(f, args)]
    return any(all(a[i] == 1 for a in ones) for i in range(f.arity))


def essential_positions(f: BoolFn) -> list[int]:
    """Argument positions (0-based) on which f actually depends."""
    out = []
    for i in range(f.arity):
        bit = 1 << (f.arity - 1 - i)
        if any(f.table[k] != f.table[k ^ bit] for k in range(len(f.table))):
            out.append(i)
    return out


def depends_on_at_most_one(f: BoolFn) -> bool:
    return len(essential_positions(f)) <= 1


def is_constant(f: BoolFn) -> bool:
    return len(set(f.table)) == 1


@dataclass(frozen=True)
class Base:
    functions: tuple[BoolFn, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        names = [f.name for f in self.functions]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise ValueError(f"duplicate function names in base: {sorted(dupes)}")

    @classmethod
    def of(cls, *fns: BoolFn) -> "Base":
        return cls(tuple(fns))

    def __iter__(self) -> Iterator[BoolFn]:
        return iter(self.functions)

    def __len__(self) -> int:
        return len(self.functions)

    def get(self, name: str) -> BoolFn | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def contains(self, f: BoolFn) -> bool:
        return any(g.signature == f.signature for g in self.functions)

    def union(self, other: Iterable[BoolFn]) -> "Base":
        fns = list(self.functions)
        for f in other:
            if not self.contains(f) and all(g.name != f.name for g in fns):
                fns.append(f)
        return Base(tuple(fns))

    def __str__(self) -> str:
        return "{" + ", ".join(f.name for f in self.functions) + "}"


CLONE_TESTS = {
    "R1": is_one_reproducing,
    "D": is_self_dual,
    "M": is_monotone,
    "N": depends_on_at_most_one,
    "L": is_linear,
}


def base_within(base: Base | Iterable[BoolFn], clone_tag: str) -> bool:
    try:
        test = CLONE_TESTS[clone_tag]
    except KeyError:
        raise ValueError(f"unknown clone tag {clone_tag!r}; expected one of {sorted(CLONE_TESTS)}")
    return all(test(f) for f in base)


# Built-in connectives, always available to the parser, the reductions and the tableau.
AND = BoolFn("and", 2, (0, 0, 0, 1))
OR = BoolFn("or", 2, (0, 1, 1, 1))
NOT = BoolFn("not", 1, (1, 0))
XOR = BoolFn("xor", 2, (0, 1, 1, 0))
TRUE = BoolFn("true", 0, (1,))
FALSE = BoolFn("false", 0, (0,))

BUILTINS = Base((AND, OR, NOT, XOR, TRUE, FALSE))
BUILTIN_NAMES = frozenset(f.name for f in BUILTINS)


def is_builtin(f: BoolFn) -> bool:
    b = BUILTINS.get(f.name)
    return b is not None and b.signature == f.signature


# Named bases from the clone table, keyed by clone name.
IFF = BoolFn("iff", 2, (1, 0, 0, 1))
ANDNOT = BoolFn("andnot", 2, (0, 0, 1, 0))  # x and not y
DUALMAJ = BoolFn.from_callable(
    "dmaj", 3, lambda x, y, z: (x and not y) or (x and not z) or (not y and not z)
)
ONE = BoolFn("one", 0, (1,))
ZERO = BoolFn("zero", 0, (0,))

NAMED_BASES: dict[str, Base] = {
    "BF": Base.of(OR, AND, NOT),
    "R1": Base.of(OR, IFF),
    "M": Base.of(OR, AND, ZERO, ONE),
    "S1": Base.of(ANDNOT),
    "D": Base.of(DUALMAJ),
    "L": Base.of(XOR, ONE),
    "L0": Base.of(XOR),
    "V": Base.of(OR, ONE, ZERO),
    "E": Base.of(AND, ONE, ZERO),
    "N": Base.of(NOT, ONE, ZERO),
    "I": Base.of(ZERO, ONE),
    "I2": Base(),
}


def parse_base(text: str) -> Base:
    """Parse a base definition document.

    One function per line: ``name arity table``, e.g. ``and 2 0001``.
    Blank lines and ``#`` comments are ignored.  The arity column is
    redundant with the table length and is checked against it.
    """
    fns = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise BaseFormatError(f"line {lineno}: expected 'name arity table', got {raw!r}")
        name, arity_s, table = parts
        if not _NAME_RE.match(name) or name.startswith("__"):
            raise BaseFormatError(f"line {lineno}: invalid function name {name!r}")
        try:
            arity = int(arity_s)
        except ValueError:
            raise BaseFormatError(f"line {lineno}: arity {arity_s!r} is not an integer")
        if not 0 <= arity <= MAX_ARITY:
            raise BaseFormatError(f"line {lineno}: arity {arity} outside [0, {MAX_ARITY}]")
        if len(table) != 1 << arity or any(c not in "01" for c in table):
            raise BaseFormatError(
                f"line {lineno}: table {table!r} must be a binary string of length {1 << arity}"
            )
        fns.append(BoolFn(name, arity, tuple(int(c) for c in table)))
    try:
        return Base(tuple(fns))
    except ValueError as exc:
        raise BaseFormatError(str(exc)) from None


def format_base(base: Base) -> str:
    return "".join(f"{f.name} {f.arity} {f.table_string()}\n" for f in base)


def load_base(spec: str) -> Base:
    """Load a base from a file path, or from ``named:<clone>`` for the built-in table bases."""
    if spec.startswith("named:"):
        key = spec[len("named:"):]
        if key not in NAMED_BASES:
            raise BaseFormatError(f"unknown named base {key!r}; choose from {sorted(NAMED_BASES)}")
        return NAMED_BASES[key]
    with open(spec, encoding="utf-8") as fh:
        return parse_base(fh.read())
