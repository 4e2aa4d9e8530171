import itertools
import math
import random

import pytest

from ltlpost.boolfn import AND, ANDNOT, NAMED_BASES, NOT, ONE, OR, Base, tuples
from ltlpost.enumerate import enumerate_formulas, up_to_renaming
from ltlpost.errors import PreconditionError
from ltlpost.formula import (
    Globally,
    LassoStructure,
    Var,
    all_false_lasso,
    eval_at,
    parse,
    temporal_ops,
    to_text,
)
from ltlpost.reductions import (
    FlattenMode,
    SynthesisNotFound,
    always_anchor,
    canonical_model,
    extend_model,
    flatten,
    is_valid,
    parse_qbf,
    qbf_to_since,
    qbf_to_since_b,
    qbf_to_until,
    rewrite_with_true_anchor,
    synth_short,
    synthesize,
    to_builtin,
    verify_model_shape,
)
from ltlpost.reductions.qbf import balanced, enumerate_qbfs, format_qbf, tree_depth
from ltlpost.reductions.synth import occurrences
from ltlpost.tableau import decide_tableau

BF = NAMED_BASES["BF"]
S1 = NAMED_BASES["S1"]


def tableau_sat(phi):
    return decide_tableau(to_builtin(phi)).satisfiable


# -- flatten ----------------------------------------------------------------------------


def test_flatten_single_variable():
    out = flatten(parse("x"))
    assert out.fresh_names() == ["__x1"]
    assert tableau_sat(out.formula)


def test_flatten_examples():
    out = flatten(parse("F not(x)"))
    assert len(out.fresh_vars) == 3
    assert tableau_sat(out.formula)
    assert not tableau_sat(flatten(parse("and(x, not(x))")).formula)


def test_flatten_output_is_builtin_and_shallow():
    out = flatten(parse("and(x, F (y U X not(x)))"))
    assert all(f.name in ("and", "or", "not", "true", "false") for f in _fns(out.formula))
    assert {"U", "S"} >= temporal_ops(out.formula) - {"X"}


def _fns(phi):
    from ltlpost.formula import functions

    return functions(phi)


@pytest.mark.parametrize("mode", [FlattenMode.FULL, FlattenMode.FUTURE_ONLY])
def test_flatten_equisatisfiable_small(mode):
    ops = "XFGUS" if mode is FlattenMode.FULL else "FG"
    family = up_to_renaming(enumerate_formulas(4, ("x", "y"), BF, ops), ("x", "y"))
    for phi in family:
        out = flatten(phi, mode)
        ref = decide_tableau(phi)
        assert decide_tableau(out.formula).satisfiable == ref.satisfiable, to_text(phi)
        if ref.satisfiable and mode is FlattenMode.FULL:
            lasso, i = ref.witness
            assert eval_at(extend_model(phi, out, lasso), i, out.formula)


def test_flatten_fresh_names_avoid_collisions():
    phi = parse("and(__x1, F __x1)", allow_reserved=True)
    out = flatten(phi)
    assert "__x1" not in out.fresh_names()


# -- anchor rewrite ------------------------------------------------------------------------


def test_anchor_examples():
    out = rewrite_with_true_anchor(parse("F x"), S1, "FX")
    assert tableau_sat(out.formula)
    out = rewrite_with_true_anchor(parse("and(x, not(x))"), S1, "GX")
    assert not tableau_sat(out.formula)
    out = rewrite_with_true_anchor(parse("x"), S1, "GX")
    res = decide_tableau(to_builtin(out.formula))
    lasso, i = res.witness
    t = out.fresh_names()[0]
    assert all(t in lasso.state(j) for j in range(i, i + len(lasso.prefix) + len(lasso.loop) + 1))


def test_anchor_output_uses_only_the_base():
    out = rewrite_with_true_anchor(parse("or(X x, not(F y))"), S1, "FX")
    assert {f.name for f in _fns(out.formula)} == {"andnot"}
    assert temporal_ops(out.formula) <= frozenset("FX")


def test_anchor_preconditions():
    with pytest.raises(PreconditionError):
        rewrite_with_true_anchor(parse("x U y"), S1, "UX")
    with pytest.raises(PreconditionError):
        rewrite_with_true_anchor(parse("x"), NAMED_BASES["M"], "GX")


def _lassos(names, max_prefix, max_loop):
    states = [frozenset(c) for r in range(len(names) + 1) for c in itertools.combinations(names, r)]
    for p in range(max_prefix + 1):
        for l in range(1, max_loop + 1):
            for seq in itertools.product(states, repeat=p + l):
                yield LassoStructure(tuple(seq[:p]), tuple(seq[p:]))


def test_always_anchor_is_globally():
    t = Var("t")
    enc = always_anchor(t, parse("andnot(x, y)", S1))
    for s in _lassos(("t",), 3, 2):
        for i in range(len(s.prefix) + len(s.loop)):
            assert eval_at(s, i, enc) == eval_at(s, i, Globally(t))


# -- QBF ---------------------------------------------------------------------------------------


def qbf(text):
    return parse_qbf(text)


EXISTS_X = "exists x\nx\n"
FORALL_X = "forall x\nx\n"
FORALL_EXISTS = "forall x\nexists y\nand(or(x, not(y)), or(not(x), y))\n"


def test_qbf_parse_and_validity():
    assert is_valid(qbf(EXISTS_X))
    assert not is_valid(qbf(FORALL_X))
    assert is_valid(qbf(FORALL_EXISTS))
    psi = qbf(FORALL_EXISTS)
    assert parse_qbf(format_qbf(psi)) == psi
    with pytest.raises(ValueError):
        qbf("exists x\nand(x, y)\n")
    with pytest.raises(ValueError):
        qbf("exists x\nexists x\nx\n")


@pytest.mark.parametrize("encode", [qbf_to_since, qbf_to_until, lambda p: qbf_to_since_b(p, S1)])
@pytest.mark.parametrize("text, valid", [(EXISTS_X, True), (FORALL_X, False), (FORALL_EXISTS, True)])
def test_qbf_examples(encode, text, valid):
    assert tableau_sat(encode(qbf(text)).formula) is valid


def test_since_b_balanced_depth():
    psi = qbf("forall a\nexists b\nforall c\nor(and(a, b), c)\n")
    out = qbf_to_since_b(psi, S1)
    assert {f.name for f in _fns(out.formula)} == {"andnot"}
    assert temporal_ops(out.formula) == frozenset("S")


def test_balanced_tree_depth():
    from ltlpost.formula import and_

    for n in range(1, 40):
        tree = balanced([Var(f"v{i}") for i in range(n)], and_)
        assert tree_depth(tree, "and") == math.ceil(math.log2(n))


def test_since_b_requires_hard_base():
    with pytest.raises(PreconditionError):
        qbf_to_since_b(qbf(EXISTS_X), NAMED_BASES["M"])


def test_shape_of_tableau_witness():
    psi = qbf(EXISTS_X)
    lasso, m = decide_tableau(qbf_to_since(psi).formula).witness
    assert verify_model_shape(lasso, m, psi)


def test_shape_of_canonical_model():
    psi = qbf("forall x\nor(x, not(x))\n")
    lasso, m = canonical_model(psi)
    assert eval_at(lasso, m, qbf_to_since(psi).formula)
    assert verify_model_shape(lasso, m, psi)


def test_shape_rejects_non_models():
    with pytest.raises(PreconditionError):
        verify_model_shape(all_false_lasso(), 0, qbf(EXISTS_X))


def test_since_encoding_is_stutter_invariant():
    rng = random.Random(4)
    for psi in enumerate_qbfs(2, 3)[::3]:
        phi = qbf_to_since(psi).formula
        res = decide_tableau(phi)
        if not res.satisfiable:
            continue
        lasso, m = res.witness
        lasso = lasso.unrolled(1)
        d = rng.randrange(len(lasso.prefix))
        shifted = m + 1 if m >= d else m
        assert eval_at(lasso.duplicate_state(d), shifted, phi)


def test_small_qbf_suite():
    for psi in enumerate_qbfs(2, 3):
        want = is_valid(psi)
        for out in (qbf_to_since(psi), qbf_to_until(psi), qbf_to_since_b(psi, S1)):
            assert tableau_sat(out.formula) == want, str(psi)


# -- synth -------------------------------------------------------------------------------------


def _table(phi, names):
    out = []
    for t in tuples(len(names)):
        s = frozenset(n for n, b in zip(names, t) if b)
        out.append(int(eval_at(LassoStructure((), (s,)), 0, phi)))
    return tuple(out)


def test_synth_examples():
    assert to_text(synth_short(Base.of(AND), "and")) == "and(x, y)"
    assert to_text(synth_short(NAMED_BASES["N"], "not")) == "not(x)"
    base = Base.of(ANDNOT, ONE)
    phi = synth_short(base, "not")
    assert to_text(phi) == "andnot(one, x)"
    assert _table(phi, ["x"]) == (1, 0)


@pytest.mark.parametrize(
    "base, target",
    [
        (NAMED_BASES["V"], "or"),
        (NAMED_BASES["E"], "and"),
        (NAMED_BASES["N"], "not"),
        (NAMED_BASES["BF"], "and"),
        (NAMED_BASES["BF"], "or"),
        (NAMED_BASES["BF"], "not"),
        (Base.of(ANDNOT, ONE), "and"),
        (Base.of(ANDNOT, ONE), "not"),
    ],
)
def test_synth_read_once(base, target):
    phi = synth_short(base, target)
    names = ["x"] if target == "not" else ["x", "y"]
    want = {"and": AND, "or": OR, "not": NOT}[target]
    assert _table(phi, names) == want.table
    for n in names:
        assert occurrences(phi, n) == 1


def test_synth_not_found_is_reported():
    with pytest.raises(SynthesisNotFound):
        synth_short(Base.of(AND), "not")
    with pytest.raises(SynthesisNotFound):
        synth_short(S1, "and")
    assert to_text(synthesize(S1, AND, read_once=False)) == "andnot(x, andnot(x, y))"
