import pytest

from ltlpost.boolfn import AND, ANDNOT, NAMED_BASES, NOT, ONE, OR, XOR, Base
from ltlpost.classify import (
    RANK,
    Complexity,
    FragmentSpec,
    Strategy,
    Verdict,
    all_op_sets,
    classify,
    format_ops,
    parse_ops,
)


def verdict(base, ops):
    return classify(FragmentSpec(base, ops))


def test_examples():
    assert verdict(Base.of(AND, OR, NOT), "F").complexity is Complexity.NP_COMPLETE
    assert verdict(Base.of(ANDNOT), "U").complexity is Complexity.PSPACE_COMPLETE
    assert verdict(Base.of(XOR, ONE), "F").complexity is Complexity.OPEN
    assert verdict(Base.of(OR), "U,S,X").complexity is Complexity.TRIVIAL
    v = verdict(NAMED_BASES["N"], "F,X")
    assert (v.complexity, v.strategy) == (Complexity.PTIME, Strategy.CONSTANT_ANALYSIS)


def test_negation_alone_is_self_dual():
    # the self-dual rung comes before the one-argument rung
    v = verdict(Base.of(NOT), "F,X")
    assert (v.complexity, v.strategy) == (Complexity.TRIVIAL, Strategy.SELF_DUAL)


def test_empty_base_is_trivial():
    for ops in all_op_sets():
        assert verdict(Base(), ops).complexity is Complexity.TRIVIAL


def test_linear_with_next_only_is_polynomial():
    assert verdict(NAMED_BASES["L"], "X").strategy is Strategy.XOR_NEXT
    assert verdict(NAMED_BASES["L0"], "").strategy is Strategy.PROP_LINEAR
    assert verdict(NAMED_BASES["L0"], "X,S").strategy is Strategy.TABLEAU


def test_hard_column_split():
    bf = NAMED_BASES["BF"]
    assert verdict(bf, "").strategy is Strategy.PROP_ENUM
    assert verdict(bf, "X").strategy is Strategy.X_BOUNDED
    assert verdict(bf, "F,G").complexity is Complexity.NP_COMPLETE
    assert verdict(bf, "F,X").complexity is Complexity.PSPACE_COMPLETE
    assert verdict(bf, "S").complexity is Complexity.PSPACE_COMPLETE


def test_enlarging_ops_never_lowers_the_class():
    for name, base in NAMED_BASES.items():
        for small in all_op_sets():
            for big in all_op_sets():
                if not small <= big:
                    continue
                a, b = verdict(base, small).complexity, verdict(base, big).complexity
                if a in RANK and b in RANK:
                    assert RANK[a] <= RANK[b], (name, small, big)


def test_parse_and_format_ops():
    assert parse_ops("F,X") == frozenset("FX")
    assert parse_ops("") == frozenset()
    assert format_ops("XSF") == "{X,F,S}"
    with pytest.raises(ValueError):
        parse_ops("F,Q")


def test_verdict_invariants():
    with pytest.raises(ValueError):
        Verdict(Complexity.TRIVIAL, Strategy.TABLEAU, "")
    with pytest.raises(ValueError):
        Verdict(Complexity.OPEN, Strategy.XOR_NEXT, "")
    assert set(verdict(NAMED_BASES["M"], "U").to_json()) == {"class", "strategy", "citation"}


def test_all_op_sets():
    sets = all_op_sets()
    assert len(sets) == 32 and len(set(sets)) == 32
