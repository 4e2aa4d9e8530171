import json

import pytest

from ltlpost.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_classify_examples(capsys):
    code, out = run(capsys, "--json", "classify", "--base", "BF", "--ops", "F")
    assert code == 0 and records(out)[0]["class"] == "NPComplete"
    _, out = run(capsys, "--json", "classify", "--base", "S1", "--ops", "U")
    assert records(out)[0]["class"] == "PSPACEComplete"
    _, out = run(capsys, "--json", "classify", "--base", "I2", "--ops", "XFGUS")
    assert records(out)[0]["class"] == "Trivial"


def test_decide_exit_codes(capsys):
    code, out = run(capsys, "decide", "--base", "R1", "--ops", "U", "--formula", "x U y")
    assert code == 0 and "AllTrueWitness" in out
    code, out = run(capsys, "--json", "decide", "--formula", "and(x, F not(x))", "--oracle-check")
    rec = records(out)[0]
    assert code == 0 and rec["witness"]["lasso"] == {"prefix": [["x"]], "loop": [[]]}
    assert rec["oracle"] is True
    code, out = run(capsys, "decide", "--base", "M", "--ops", "U,S", "--formula", "x U zero")
    assert code == 2 and "MonotoneRewrite" in out


def test_decide_formula_file_gives_one_record_each(capsys, tmp_path):
    f = tmp_path / "phis.txt"
    f.write_text("x\n# skipped\nand(x, not(x))\n\nX y\n")
    code, out = run(capsys, "--json", "decide", "--formula-file", str(f))
    recs = records(out)
    assert [r["satisfiable"] for r in recs] == [True, False, True]
    assert code == 2


def test_errors_exit_one(capsys):
    assert main(["decide", "--formula", "x U (y U"]) == 1
    assert main(["decide", "--base", "R1", "--ops", "U", "--formula", "F x"]) == 1
    assert main(["classify", "--base", "/no/such/file"]) == 1
    capsys.readouterr()


def test_oracle_initial_mode(capsys):
    code, _ = run(capsys, "oracle", "--formula", "and(not(x), true S x)")
    assert code == 0
    code, _ = run(capsys, "oracle", "--initial", "--formula", "and(not(x), true S x)")
    assert code == 2


def test_table_check(capsys, tmp_path):
    code, out = run(capsys, "table-check")
    assert code == 0 and "0 failures" in out
    code, out = run(capsys, "--json", "table-check", "--base", "S1", "--ops", "F,X")
    assert records(out)[0]["class"] == "PSPACEComplete"
    _, csv_text = run(capsys, "table-check", "--dump-expected")
    bad = csv_text.replace("S1,XF,PSPACEComplete", "S1,XF,NPComplete")
    assert bad != csv_text
    path = tmp_path / "expected.csv"
    path.write_text(bad)
    code, out = run(capsys, "table-check", "--expected", str(path))
    assert code == 1 and "1 failures" in out


@pytest.mark.parametrize("q, n", [(1, 1), (0, 3)])
def test_qbf_suite_small(capsys, q, n):
    code, out = run(capsys, "--json", "qbf-suite", str(q), str(n))
    rec = records(out)[0]
    assert code == 0 and rec["ok"] and rec["total"] > 0


def test_reduce_and_verify_shape(capsys, tmp_path):
    q = tmp_path / "q.txt"
    q.write_text("forall x\nexists y\nand(or(x, not(y)), or(not(x), y))\n")
    code, out = run(capsys, "--json", "reduce", "qbf2s", "--qbf", str(q))
    formula = records(out)[0]["formula"]
    code, out = run(capsys, "--json", "oracle", "--formula", formula)
    assert code == 0
    w = tmp_path / "w.json"
    w.write_text(json.dumps(records(out)[0]["witness"]))
    code, out = run(capsys, "verify-shape", "--qbf", str(q), "--witness", str(w))
    assert code == 0 and "shape ok" in out


@pytest.mark.parametrize("mode", ["flatten", "flatten-future", "anchor"])
def test_reduce_formula_modes(capsys, mode):
    text = "F not(x)" if mode != "anchor" else "and(x, X F y)"
    args = ["--json", "reduce", mode, "--formula", text]
    if mode == "anchor":
        args += ["--base", "S1", "--ops", "F,X"]
    code, out = run(capsys, *args)
    rec = records(out)[0]
    assert code == 0 and rec["fresh"]


def test_synth(capsys):
    code, out = run(capsys, "synth", "--base", "E", "--target", "and")
    assert code == 0 and out.strip() == "and(x, y)"
    code, _ = run(capsys, "synth", "--base", "S1", "--target", "and")
    assert code == 1
    code, out = run(capsys, "synth", "--base", "S1", "--target", "and", "--allow-repeats")
    assert code == 0


def test_seeded_sweeps_are_reproducible(capsys):
    _, a = run(capsys, "--json", "sweep", "anchor", "--count", "10", "--seed", "5")
    _, b = run(capsys, "--json", "sweep", "anchor", "--count", "10", "--seed", "5")
    strip = lambda out: [{k: v for k, v in r.items() if k != "seconds"} for r in records(out)[0]["reports"]]
    assert strip(a) == strip(b)
    assert records(a)[0]["seed"] == 5
