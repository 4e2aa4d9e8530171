import pytest

from ltlpost import harness
from ltlpost.boolfn import NAMED_BASES
from ltlpost.classify import Complexity, FragmentSpec, classify, parse_ops
from ltlpost.enumerate import enumerate_by_size, up_to_renaming


def test_sweep_fragments_dispatch_to_their_strategy():
    for strategy, (name, ops) in harness.STRATEGY_FRAGMENTS.items():
        assert classify(FragmentSpec(NAMED_BASES[name], parse_ops(ops))).strategy is strategy


def test_expected_table_covers_every_cell():
    table = harness.expected_table()
    assert len(table) == len(harness.TABLE_ROWS) * 32
    assert table[("S1", frozenset("FX"))] is Complexity.PSPACE_COMPLETE
    assert table[("L", frozenset("X"))] is Complexity.PTIME
    assert table[("L0", frozenset("F"))] is Complexity.OPEN
    assert table[("BF", frozenset("FG"))] is Complexity.NP_COMPLETE


def test_expected_csv_roundtrip():
    table = harness.expected_table()
    assert harness.load_expected(harness.dump_expected(table)) == table
    with pytest.raises(ValueError):
        harness.load_expected("base,ops,class\nQ9,F,PTime\n")
    with pytest.raises(ValueError):
        harness.load_expected("base,ops,class\nM,F,Easy\n")


def test_corrupted_table_is_reported():
    table = harness.expected_table()
    table[("M", frozenset("U"))] = Complexity.NP_COMPLETE
    rep = harness.table_check(table)
    assert not rep.ok and len(rep.failures) == 1


def test_enumeration_counts():
    layers = enumerate_by_size(3, ("x",), NAMED_BASES["N"], "X")
    # leaves x, one, zero; then not/X over leaves; then not/X over those
    assert [len(l) for l in layers] == [0, 3, 6, 12]
    family = [f for l in enumerate_by_size(3, ("x", "y"), NAMED_BASES["E"], "") for f in l]
    reps = up_to_renaming(family, ("x", "y"))
    assert all("y" not in str(f) or "x" in str(f) for f in reps)


def test_small_sweeps_pass():
    rep = harness.agreement_sweep(harness.Strategy.XOR_NEXT, max_nodes=5)
    assert rep.ok and rep.total > 0
    assert harness.qbf_suite(1, 3).ok
    assert harness.flatten_sweep(max_nodes=4).ok
