import itertools
import random

import pytest

from ltlpost.boolfn import AND, NAMED_BASES
from ltlpost.enumerate import enumerate_formulas, random_formula
from ltlpost.errors import FormulaSyntaxError
from ltlpost.formula import (
    Apply,
    Eventually,
    Globally,
    LassoStructure,
    Next,
    Since,
    Until,
    Var,
    const,
    eval_at,
    not_,
    parse,
    sat_bounded,
    since_depth,
    temporal_ops,
    to_text,
    x_depth,
)

L = LassoStructure.of
BF = NAMED_BASES["BF"]


def small_lassos(names, max_prefix, max_loop):
    states = [frozenset(c) for r in range(len(names) + 1) for c in itertools.combinations(names, r)]
    for p in range(max_prefix + 1):
        for l in range(1, max_loop + 1):
            for seq in itertools.product(states, repeat=p + l):
                yield LassoStructure(tuple(seq[:p]), tuple(seq[p:]))


def test_parse_examples():
    assert parse("x U y") == Until(Var("x"), Var("y"))
    assert parse("and(x, X y)") == Apply(AND, (Var("x"), Next(Var("y"))))
    with pytest.raises(FormulaSyntaxError):
        parse("x U (y U")


@pytest.mark.parametrize(
    "text",
    ["x U (y S z)", "F G x", "not(X (x S y))", "xor(true, F x)", "and(x, or(y, not(z))) U X y"],
)
def test_print_parse_roundtrip(text):
    phi = parse(text)
    assert parse(to_text(phi)) == phi


def test_chained_binary_operators_need_parentheses():
    with pytest.raises(FormulaSyntaxError):
        parse("x U y S z")
    assert parse("x U (y S z)") == Until(Var("x"), Since(Var("y"), Var("z")))


def test_reserved_prefix_rejected():
    with pytest.raises(FormulaSyntaxError):
        parse("__t0")
    assert parse("__t0", allow_reserved=True) == Var("__t0")


def test_unknown_function_and_arity():
    with pytest.raises(FormulaSyntaxError):
        parse("maj(x, y, z)")
    with pytest.raises(FormulaSyntaxError):
        parse("and(x)")
    assert parse("andnot(x, y)", NAMED_BASES["S1"]).fn.name == "andnot"


def test_eval_examples():
    assert eval_at(L([], [{"x"}]), 0, Globally(Var("x")))
    s = L([{"y"}, set()], [set()])
    phi = parse("x S y")
    assert not eval_at(s, 1, phi)
    assert eval_at(s, 0, phi)
    assert eval_at(L([set()], [{"x"}]), 0, Eventually(Var("x")))


def test_x_depth_examples():
    assert x_depth(parse("X X x")) == 2
    assert x_depth(parse("and(x, X y)")) == 1
    assert x_depth(parse("x")) == 0
    assert since_depth(parse("x S (y S z)")) == 2


def test_sat_bounded_examples():
    assert sat_bounded(parse("and(x, not(x))"), 3, 2) is None
    lasso, i = sat_bounded(parse("x"), 2, 2)
    assert lasso == L([], [{"x"}]) and i == 0
    lasso, i = sat_bounded(parse("and(x, X not(x))"), 2, 2)
    assert lasso == L([{"x"}], [set()]) and i == 0


def test_lasso_needs_loop():
    with pytest.raises(ValueError):
        L([{"x"}], [])


def test_lasso_json_roundtrip():
    s = L([{"x", "y"}, set()], [{"y"}])
    assert LassoStructure.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        LassoStructure.from_json({"prefix": [["x"]]})


FAMILY = enumerate_formulas(4, ("x", "y"), BF, "XFGUS")


def test_unrolling_invariance():
    lassos = list(small_lassos(("x", "y"), 1, 2))[::7]
    for phi in FAMILY[::5]:
        for s in lassos:
            for i in range(3):
                assert eval_at(s, i, phi) == eval_at(s.unrolled(2), i, phi)


def test_future_abbreviations():
    lassos = list(small_lassos(("x",), 2, 2))
    for phi in enumerate_formulas(3, ("x", "y"), BF, "XUS"):
        for s in lassos:
            for i in range(4):
                assert eval_at(s, i, Eventually(phi)) == eval_at(s, i, Until(const(1), phi))
                assert eval_at(s, i, Globally(phi)) == (not eval_at(s, i, Eventually(not_(phi))))


def test_stutter_invariance_for_since_only():
    rng = random.Random(7)
    lassos = list(small_lassos(("x", "y"), 3, 1))
    for _ in range(150):
        phi = random_formula(rng, 9, ("x", "y"), BF, "S")
        s = rng.choice(lassos)
        if not s.prefix:
            continue
        d = rng.randrange(len(s.prefix))
        t = s.duplicate_state(d)
        for i in range(len(s.prefix) + 2):
            j = i + 1 if i >= d else i
            assert eval_at(s, i, phi) == eval_at(t, j, phi), (to_text(phi), s, d, i)


def test_x_only_satisfaction_depends_on_first_states():
    rng = random.Random(3)
    for _ in range(200):
        phi = random_formula(rng, 9, ("x", "y"), BF, "X")
        k = x_depth(phi) + 1
        states = [frozenset(rng.sample(["x", "y"], rng.randint(0, 2))) for _ in range(k)]
        a = L(states, [{"x"}])
        b = L(states, [set(), {"y"}])
        assert eval_at(a, 0, phi) == eval_at(b, 0, phi)


def test_absent_variables_are_false():
    assert not eval_at(L([], [set()]), 0, parse("fresh"))


def test_temporal_ops_collected():
    assert temporal_ops(parse("F (x U X y)")) == frozenset({"F", "U", "X"})
