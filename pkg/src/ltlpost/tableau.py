"""Complete satisfiability check for LTL with past over the built-in connectives.

Atoms are stored as bitmasks over the *elementary* members of the closure:
variables and the X-, U- and S-subformulae.  Every other closure member is
a Boolean combination of those, so its truth value in an atom is computed
rather than stored; maximality and propositional consistency then hold by
construction.  F and G are expanded to ``true U .`` and ``not(true U not .)``.

Search is centred on the atoms that contain the input formula:

* if the formula has past operators, look backwards from such an atom for
  an initial atom (every ``a S b`` agrees with ``b``);
* then look forwards for a reachable strongly connected set that fulfils
  every Until, using an on-the-fly emptiness check for generalized Büchi
  acceptance (state ``a`` carries mark ``g`` if Until ``g`` is absent from
  ``a`` or its right side holds in ``a``).

Successors and predecessors are enumerated lazily by a small constraint
search that fixes elementary items in post-order, so subformula values are
known as soon as all their parts are.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterator

from .boolfn import is_builtin
from .errors import InvariantViolation, PreconditionError, ResourceLimitError
from .formula import (
    Apply,
    Eventually,
    Formula,
    Globally,
    LassoStructure,
    Next,
    Since,
    Until,
    Var,
    eval_at,
)
from .result import SatResult

DEFAULT_MAX_ATOMS = 300_000

_ELEMENTARY = ("var", "next", "until", "since")

# option codes for the atom enumerator
_FREE, _LOCAL, _FIXED, _STEP, _BETA = range(5)


# generated evaluators keyed by source; shapes repeat a lot across formulas
_COMPILED: dict[str, object] = {}


class _Closure:
    """Hash-consed core syntax: nodes are (kind, a, b, payload) tuples indexed by id."""

    def __init__(self) -> None:
        self.nodes: list[tuple] = []
        self.ids: dict[tuple, int] = {}

    def make(self, kind: str, a: int = -1, b: int = -1, payload=None) -> int:
        if kind == "not":
            ak = self.nodes[a]
            if ak[0] == "not":
                return ak[1]
            if ak[0] == "const":
                return self.const(1 - ak[3])
        if kind in ("and", "or"):
            for x, y in ((a, b), (b, a)):
                node = self.nodes[x]
                if node[0] == "const":
                    absorbing = 0 if kind == "and" else 1
                    return x if node[3] == absorbing else y
        key = (kind, a, b, payload)
        got = self.ids.get(key)
        if got is None:
            got = len(self.nodes)
            self.nodes.append(key)
            self.ids[key] = got
        return got

    def const(self, v: int) -> int:
        return self.make("const", payload=v)

    def convert(self, phi: Formula, memo: dict) -> int:
        got = memo.get(phi)
        if got is not None:
            return got
        if isinstance(phi, Var):
            out = self.make("var", payload=phi.name)
        elif isinstance(phi, Apply):
            if not is_builtin(phi.fn):
                raise PreconditionError(
                    f"tableau accepts built-in connectives only, found {phi.fn.name!r}; flatten first"
                )
            args = [self.convert(a, memo) for a in phi.args]
            name = phi.fn.name
            if name in ("true", "false"):
                out = self.const(int(name == "true"))
            elif name == "not":
                out = self.make("not", args[0])
            else:
                out = self.make(name, args[0], args[1])
        elif isinstance(phi, Next):
            out = self.make("next", self.convert(phi.arg, memo))
        elif isinstance(phi, Eventually):
            out = self.make("until", self.const(1), self.convert(phi.arg, memo))
        elif isinstance(phi, Globally):
            inner = self.make("not", self.convert(phi.arg, memo))
            out = self.make("not", self.make("until", self.const(1), inner))
        elif isinstance(phi, Until):
            out = self.make("until", self.convert(phi.left, memo), self.convert(phi.right, memo))
        elif isinstance(phi, Since):
            out = self.make("since", self.convert(phi.left, memo), self.convert(phi.right, memo))
        else:
            raise TypeError(f"not a formula: {phi!r}")
        memo[phi] = out
        return out

    def children(self, i: int) -> tuple[int, ...]:
        kind, a, b, _ = self.nodes[i]
        if kind in ("var", "const"):
            return ()
        if kind in ("not", "next"):
            return (a,)
        return (a, b)


class Tableau:
    def __init__(self, phi: Formula, max_atoms: int = DEFAULT_MAX_ATOMS, initial: bool = False):
        self.phi = phi
        self.max_atoms = max_atoms
        self.initial = initial
        self.cl = _Closure()
        self.root = self.cl.convert(phi, {})
        self._order_elementary()
        self._fns: dict[int, Callable[[int], int]] = {}
        self._maxpos: dict[int, int] = {}
        self._prepare()
        self.succ_cache: dict[int, list[int]] = {}
        self.future_dead: set[int] = set()
        self.past_dead: set[int] = set()
        self.seen = 0

    # -- setup ------------------------------------------------------------------

    def _order_elementary(self) -> None:
        # post-order over the core syntax, so parts come before wholes
        cl = self.cl
        self.pos: dict[int, int] = {}
        self.el: list[int] = []
        done: set[int] = set()
        stack = [(self.root, False)]
        while stack:
            i, expanded = stack.pop()
            if expanded:
                if cl.nodes[i][0] in _ELEMENTARY:
                    self.pos[i] = len(self.el)
                    self.el.append(i)
                continue
            if i in done:
                continue
            done.add(i)
            stack.append((i, True))
            for c in reversed(cl.children(i)):
                if c not in done:
                    stack.append((c, False))
        self.n = len(self.el)
        self.names = {self.pos[i]: cl.nodes[i][3] for i in self.el if cl.nodes[i][0] == "var"}

    def fn(self, i: int) -> Callable[[int], int]:
        """Compile node ``i`` to a function of the atom bitmask returning 0 or 1."""
        got = self._fns.get(i)
        if got is not None:
            return got
        cl, pos = self.cl, self.pos
        lines: list[str] = []
        names: dict[int, str] = {}
        deps = [-1]

        def expr(j: int) -> str:
            if j in names:
                return names[j]
            kind, a, b, payload = cl.nodes[j]
            if j in pos:
                deps.append(pos[j])
                return f"((m >> {pos[j]}) & 1)"
            if kind == "const":
                return str(payload)
            if kind == "not":
                text = f"(1 ^ {expr(a)})"
            else:
                op = {"and": "&", "or": "|", "xor": "^"}[kind]
                text = f"({expr(a)} {op} {expr(b)})"
            name = f"v{j}"
            lines.append(f"    {name} = {text}")
            names[j] = name
            return name

        result = expr(i)
        src = "def f(m):\n" + "".join(line + "\n" for line in lines) + f"    return {result}\n"
        f = _COMPILED.get(src)
        if f is None:
            env: dict = {}
            exec(src, env)
            f = _COMPILED[src] = env["f"]
        self._fns[i] = f
        self._maxpos[i] = max(deps)
        return f

    def maxpos(self, i: int) -> int:
        self.fn(i)
        return self._maxpos[i]

    def _literal(self, i: int) -> tuple[int, int] | None:
        """``(position, polarity)`` if node ``i`` is an elementary item or its negation."""
        if i in self.pos:
            return self.pos[i], 1
        kind, a, _, _ = self.cl.nodes[i]
        if kind == "not" and a in self.pos:
            return self.pos[a], 0
        return None

    def _prepare(self) -> None:
        cl, n = self.cl, self.n
        self.kind = [cl.nodes[i][0] for i in self.el]
        self.alpha: list = [None] * n
        self.beta: list = [None] * n
        self.until_pos: list[int] = []
        self.since_pos: list[int] = []
        self.next_items: list[tuple[int, int]] = []  # (position of X psi, node psi)
        for p, i in enumerate(self.el):
            kind, a, b, _ = cl.nodes[i]
            if kind in ("until", "since"):
                self.alpha[p], self.beta[p] = self.fn(a), self.fn(b)
                (self.until_pos if kind == "until" else self.since_pos).append(p)
            elif kind == "next":
                self.next_items.append((p, a))
        self.masks = [(1 << p) - 1 for p in range(n)]

        # top-level constraints: split conjunctions, keep the rest as checks
        self.contradiction = False
        self.top_forced: list[int | None] = [None] * n
        self.top_checks: list[list] = [[] for _ in range(n)]
        stack = [(self.root, 1)]
        while stack:
            i, want = stack.pop()
            kind, a, b, payload = cl.nodes[i]
            if kind == "const":
                if payload != want:
                    self.contradiction = True
                continue
            if kind == "not":
                stack.append((a, 1 - want))
                continue
            if (kind == "and" and want == 1) or (kind == "or" and want == 0):
                stack.append((a, want))
                stack.append((b, want))
                continue
            if i in self.pos:
                p = self.pos[i]
                if self.top_forced[p] is not None and self.top_forced[p] != want:
                    self.contradiction = True
                self.top_forced[p] = want
                continue
            if self.maxpos(i) < 0:  # variable-free composite
                if self.fn(i)(0) != want:
                    self.contradiction = True
                continue
            self.top_checks[self.maxpos(i)].append((self.fn(i), want))

        # successor constraints from X items: value of psi in b equals X psi in a
        self.next_checks = []
        for p, psi in self.next_items:
            lit = self._literal(psi)
            if lit is not None:
                self.next_checks.append((p, "lit", lit))
            else:
                self.next_checks.append((p, "fn", (self.maxpos(psi), self.fn(psi))))

        self.until_marks = []
        for g, p in enumerate(self.until_pos):
            self.until_marks.append((p, self.beta[p]))
        self.all_marks = (1 << len(self.until_pos)) - 1

    # -- atom enumeration ---------------------------------------------------------

    def _atoms(self, codes, params, forced, checks) -> Iterator[int]:
        n = self.n
        alpha, beta, masks = self.alpha, self.beta, self.masks
        if n == 0:
            yield 0
            return

        def options(p: int, m: int) -> tuple[int, ...]:
            c = codes[p]
            if c == _FREE:
                o = (0, 1)
            elif c == _LOCAL:
                if beta[p](m):
                    o = (1,)
                elif not alpha[p](m):
                    o = (0,)
                else:
                    o = (0, 1)
            elif c == _FIXED:
                o = (params[p],)
            elif c == _STEP:
                o = (beta[p](m) | (alpha[p](m) & params[p]),)
            else:
                o = (beta[p](m),)
            f = forced[p]
            if f is not None:
                return (f,) if f in o else ()
            return o

        opts: list = [()] * n
        idx = [0] * n
        p = 0
        m = 0
        opts[0] = options(0, 0)
        while p >= 0:
            o = opts[p]
            i = idx[p]
            if i >= len(o):
                p -= 1
                continue
            idx[p] = i + 1
            m = (m & masks[p]) | (o[i] << p)
            ok = True
            for f, want in checks[p]:
                if f(m) != want:
                    ok = False
                    break
            if not ok:
                continue
            if p == n - 1:
                yield m
                continue
            p += 1
            opts[p] = options(p, m)
            idx[p] = 0

    def _count(self, k: int = 1) -> None:
        self.seen += k
        if self.seen > self.max_atoms:
            raise ResourceLimitError(
                f"tableau explored more than {self.max_atoms} atoms; raise --max-atoms to continue"
            )

    def phi_atoms(self) -> Iterator[int]:
        if self.contradiction:
            return iter(())
        codes = []
        for k in self.kind:
            if k in ("var", "next"):
                codes.append(_FREE)
            elif k == "since" and self.initial:
                codes.append(_BETA)
            else:
                codes.append(_LOCAL)
        return self._atoms(codes, [0] * self.n, self.top_forced, self.top_checks)

    def successors(self, a: int) -> list[int]:
        got = self.succ_cache.get(a)
        if got is not None:
            return got
        n = self.n
        codes = [_FREE] * n
        params = [0] * n
        forced: list[int | None] = [None] * n
        checks: list[list] = [[] for _ in range(n)]
        bad = False
        for p, k in enumerate(self.kind):
            if k == "until":
                codes[p] = _LOCAL
                # an unfulfilled obligation carries over
                if self.alpha[p](a) and not self.beta[p](a):
                    forced[p] = (a >> p) & 1
            elif k == "since":
                codes[p] = _STEP
                params[p] = (a >> p) & 1
        for p, how, data in self.next_checks:
            want = (a >> p) & 1
            if how == "lit":
                q, pol = data
                v = want if pol else 1 - want
                if forced[q] is not None and forced[q] != v:
                    bad = True
                forced[q] = v
            else:
                q, f = data
                if q < 0:
                    if f(0) != want:
                        bad = True
                else:
                    checks[q].append((f, want))
        out = [] if bad else list(self._atoms(codes, params, forced, checks))
        self._count(len(out))
        self.succ_cache[a] = out
        return out

    def predecessors(self, b: int) -> Iterator[int]:
        n = self.n
        codes = [_FREE] * n
        params = [0] * n
        forced: list[int | None] = [None] * n
        no_checks: list[list] = [[] for _ in range(n)]
        for p, k in enumerate(self.kind):
            if k == "next":
                codes[p] = _FIXED
                params[p] = self.fn(self.cl.nodes[self.el[p]][1])(b)
            elif k == "until":
                codes[p] = _STEP
                params[p] = (b >> p) & 1
            elif k == "since":
                codes[p] = _LOCAL
                if self.alpha[p](b) and not self.beta[p](b):
                    forced[p] = (b >> p) & 1
        return self._atoms(codes, params, forced, no_checks)

    def is_initial(self, a: int) -> bool:
        return all(((a >> p) & 1) == self.beta[p](a) for p in self.since_pos)

    def marks(self, a: int) -> int:
        out = 0
        for g, (p, beta) in enumerate(self.until_marks):
            if not (a >> p) & 1 or beta(a):
                out |= 1 << g
        return out

    # -- search -----------------------------------------------------------------

    def past_path(self, a: int) -> list[int] | None:
        """Shortest path from an initial atom to ``a`` (inclusive), or None."""
        if not self.since_pos or self.initial:
            return [a]
        if a in self.past_dead:
            return None
        parent: dict[int, int | None] = {a: None}
        queue = deque([a])
        while queue:
            b = queue.popleft()
            if self.is_initial(b):
                path = [b]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path
            for c in self.predecessors(b):
                if c in parent or c in self.past_dead:
                    continue
                parent[c] = b
                self._count()
                queue.append(c)
        self.past_dead.update(parent)
        return None

    def accepting_lasso(self, src: int) -> tuple[list[int], list[int]] | None:
        """Stem from ``src`` and a fulfilling cycle, or None if every reachable SCC fails."""
        if src in self.future_dead:
            return None
        dead = self.future_dead
        num: dict[int, int] = {}
        roots: list[list[int]] = []
        live: list[int] = []
        path: list[int] = []
        iters: list = []
        full = self.all_marks

        def push(s: int) -> None:
            num[s] = len(num) + 1
            roots.append([num[s], self.marks(s)])
            live.append(s)
            path.append(s)
            iters.append(iter(self.successors(s)))

        push(src)
        while path:
            s = path[-1]
            t = next(iters[-1], None)
            if t is None:
                path.pop()
                iters.pop()
                if roots[-1][0] == num[s]:
                    roots.pop()
                    while True:
                        u = live.pop()
                        dead.add(u)
                        if u == s:
                            break
                continue
            if t in dead:
                continue
            if t not in num:
                push(t)
                continue
            # numbered and not dead means t is still live: the edge closes a cycle
            acc = 0
            while roots[-1][0] > num[t]:
                acc |= roots.pop()[1]
            roots[-1][1] |= acc
            if roots[-1][1] == full:
                low = roots[-1][0]
                scc = {u for u in live if num[u] >= low}
                root = next(u for u in path if num[u] == low)
                stem = path[: path.index(root) + 1]
                return stem, self._cycle(root, scc)
        return None

    def _cycle(self, root: int, scc: set[int]) -> list[int]:
        cycle = [root]
        covered = self.marks(root)
        cur = root
        for g in range(len(self.until_pos)):
            if covered >> g & 1:
                continue
            step = self._bfs(cur, scc, lambda u: self.marks(u) >> g & 1)
            for u in step:
                covered |= self.marks(u)
            cycle.extend(step)
            cur = cycle[-1]
        back = self._bfs(cur, scc, lambda u: u == root)
        cycle.extend(back[:-1])
        if covered != self.all_marks:
            raise InvariantViolation("accepting component lost its marks")
        return cycle

    def _bfs(self, src: int, scc: set[int], goal) -> list[int]:
        parent: dict[int, int] = {}
        queue = deque()
        for t in self.successors(src):
            if t in scc and t not in parent:
                parent[t] = src
                queue.append(t)
        while queue:
            u = queue.popleft()
            if goal(u):
                out = [u]
                while parent[out[-1]] != src:
                    out.append(parent[out[-1]])
                return out[::-1]
            for t in self.successors(u):
                if t in scc and t not in parent:
                    parent[t] = u
                    queue.append(t)
        raise InvariantViolation("no path inside a strongly connected component")

    def assignment(self, a: int) -> frozenset[str]:
        return frozenset(name for p, name in self.names.items() if (a >> p) & 1)

    def decide(self) -> SatResult:
        for a in self.phi_atoms():
            self._count()
            past = self.past_path(a)
            if past is None:
                continue
            found = self.accepting_lasso(a)
            if found is None:
                continue
            stem, cycle = found
            prefix = [self.assignment(u) for u in past[:-1] + stem[:-1]]
            loop = [self.assignment(u) for u in cycle]
            lasso = LassoStructure(tuple(prefix), tuple(loop))
            index = len(past) - 1
            if not eval_at(lasso, index, self.phi):
                raise InvariantViolation(f"tableau witness {lasso} at {index} fails {self.phi}")
            return SatResult(True, "Tableau", (lasso, index))
        return SatResult(False, "Tableau")


def decide_tableau(
    phi: Formula, max_atoms: int = DEFAULT_MAX_ATOMS, initial: bool = False
) -> SatResult:
    """Decide satisfiability of ``phi`` (at some state, or at state 0 with ``initial``)."""
    return Tableau(phi, max_atoms=max_atoms, initial=initial).decide()
