import random

import pytest

from ltlpost.boolfn import NAMED_BASES
from ltlpost.enumerate import enumerate_formulas, random_formula, up_to_renaming
from ltlpost.errors import PreconditionError, ResourceLimitError
from ltlpost.formula import eval_at, parse, rename, sat_bounded, to_text
from ltlpost.tableau import decide_tableau

BF = NAMED_BASES["BF"]


def test_examples():
    assert not decide_tableau(parse("and(x, not(x))")).satisfiable
    assert not decide_tableau(parse("and(G x, F not(x))")).satisfiable
    res = decide_tableau(parse("and(x, X not(x))"))
    assert res.satisfiable
    lasso, i = res.witness
    assert eval_at(lasso, i, parse("and(x, X not(x))"))


@pytest.mark.parametrize(
    "text, sat",
    [
        ("G F x", True),
        ("and(G F x, F G not(x))", False),
        ("and(x U y, G not(y))", False),
        ("and(not(x), true S x)", True),
        ("and(G not(x), F (true S x))", True),
        ("X (x S and(y, not(X true)))", False),
        ("and(G (x S y), G not(y))", True),
        ("and(F y, G (or(not(y), X (not(x) S y))))", True),
        ("xor(true, true)", False),
        ("xor(x, X x)", True),
    ],
)
def test_frozen_verdicts(text, sat):
    res = decide_tableau(parse(text))
    assert res.satisfiable is sat
    if sat:
        assert eval_at(res.witness[0], res.witness[1], parse(text))


@pytest.mark.parametrize(
    "text", ["and(not(x), true S x)", "and(G not(x), F (true S x))", "and(G (x S y), G not(y))"]
)
def test_past_obligations_need_a_history(text):
    phi = parse(text)
    assert decide_tableau(phi).satisfiable
    assert not decide_tableau(phi, initial=True).satisfiable


def test_initial_mode_witness_at_zero():
    res = decide_tableau(parse("and(x, F not(x))"), initial=True)
    assert res.witness[1] == 0


def test_rejects_non_builtin_connectives():
    with pytest.raises(PreconditionError):
        decide_tableau(parse("andnot(x, y)", NAMED_BASES["S1"]))


def test_atom_cap():
    phi = parse("and(and(F x, F y), and(F z, and(G F w, x U (y S (z U w)))))")
    with pytest.raises(ResourceLimitError):
        decide_tableau(phi, max_atoms=3)


def test_agrees_with_bounded_search():
    # a bounded witness forces SAT, and every SAT answer comes with a verified witness
    family = up_to_renaming(enumerate_formulas(5, ("x", "y"), BF, "XFGUS"), ("x", "y"))
    for phi in family[::3]:
        res = decide_tableau(phi)
        if res.satisfiable:
            assert eval_at(res.witness[0], res.witness[1], phi)
        else:
            assert sat_bounded(phi, 3, 2) is None, to_text(phi)


def test_random_agreement_both_ways():
    # on small random formulas models with prefix <= 3, loop <= 3 always exist when SAT
    rng = random.Random(11)
    for _ in range(300):
        phi = random_formula(rng, 7, ("x", "y"), BF, "XFGUS")
        res = decide_tableau(phi)
        assert res.satisfiable == (sat_bounded(phi, 3, 3) is not None), to_text(phi)


def test_alpha_invariance():
    rng = random.Random(5)
    for _ in range(100):
        phi = random_formula(rng, 8, ("x", "y"), BF, "XFGUS")
        swapped = rename(phi, {"x": "y", "y": "x"})
        assert decide_tableau(phi).satisfiable == decide_tableau(swapped).satisfiable
