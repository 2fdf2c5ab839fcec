from __future__ import annotations

import csv
import json
from io import StringIO

import pytest

from digitfn.cli import render, run
from digitfn.regular import FIXTURE_DIR


def call(*argv):
    out = StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call("--format", "json", *argv)
    return code, json.loads(text)


def test_split_example():
    code, rep = call_json("split", "--n", "314159265", "--q", "2", "--r", "2")
    assert code == 0
    assert rep["blocks"] == [4, 348, 432, 80, 1]
    assert rep["reduced"] == [1, 87, 27, 5, 1]


def test_split_text_golden():
    code, text = call("split", "--n", "204280974", "--r", "3")
    assert code == 0
    assert text == (
        "n: 204280974\nq: 2\nr: 3\n"
        "blocks: [48, 360, 328, 14]\nreduced: [3, 45, 41, 7]\nexponents: [4, 3, 3, 1]\n"
    )


def test_check_regular_opt_reps():
    code, text = call("check-regular", "--rep", "fixtures/opt_reps.json", "--mult", "--r", "3")
    assert code == 0
    assert "result: PASS" in text


def test_check_regular_finds_parameter():
    code, rep = call_json("check-regular", "--rep", str(FIXTURE_DIR / "opt_reps.json"), "--mult")
    assert code == 0 and rep["found_r"] == 3


def test_check_regular_remark_raw_fails():
    code, rep = call_json("check-regular", "--rep", str(FIXTURE_DIR / "remark_nonminimal.json"),
                          "--mult", "--r", "3", "--raw")
    assert code == 1 and rep["result"] == "FAIL"
    code, rep = call_json("check-regular", "--rep", str(FIXTURE_DIR / "remark_nonminimal.json"), "--minimize-only")
    assert code == 0 and rep["minimized"]["M"] == [[["1"]], [["2"]]]


def test_check_regular_additive_hn():
    code, rep = call_json("check-regular", "--rep", str(FIXTURE_DIR / "hn_rep.json"), "--add", "--r", "2",
                          "--show-closures")
    assert code == 0 and rep["result"] == "PASS"
    assert len(rep["U_basis"]) == 3 and len(rep["V_basis"]) == 3
    code, rep = call_json("check-regular", "--rep", str(FIXTURE_DIR / "hn_rep.json"), "--add", "--r", "0")
    assert code == 1


def test_constants_naf_exact():
    code, text = call("constants", "--fn", "naf-weight", "--exact")
    assert code == 0
    assert "mu: 1/3\n" in text and "sigma2: 2/27\n" in text


def test_constants_block_exact_json():
    code, rep = call_json("constants", "--fn", "block-count:0101", "--exact")
    assert code == 0
    assert (rep["mu"], rep["sigma2"]) == ("1/16", "17/256")
    assert list(rep)[:4] == ["function", "mu", "sigma2", "provenance"]


def test_constants_from_rep_file():
    code, rep = call_json("constants", "--rep", str(FIXTURE_DIR / "hn_rep.json"), "--r", "2")
    assert code == 0 and (rep["mu"], rep["sigma2"]) == ("1/3", "2/27")


def test_constants_rlt():
    code, rep = call_json("constants", "--fn", "rlt:jacobsthal", "--rlt")
    assert code == 0
    assert abs(rep["mu"] - 0.429947) < 1e-5 and abs(rep["sigma2"] - 0.121137) < 1e-5


def test_constants_truncated_with_tail_params():
    code, rep = call_json("constants", "--fn", "naf-weight", "--truncate", "24", "--singularity")
    assert code == 0
    assert abs(rep["mu"] - 1 / 3) < 1e-6
    assert rep["tail_params"]["window"] == [19, 24]
    assert abs(rep["singularity_mu"] - 1 / 3) < 1e-4
    code, rep = call_json("constants", "--fn", "naf-weight", "--truncate", "24", "--tail", "off")
    assert rep["tail_params"] is None


@pytest.mark.parametrize("fn, n, value", [
    ("naf-weight", 314159265, 11), ("opt-reps", 204280974, 10), ("block-count:0101", 240150, 3),
    ("naf-weight", 27, 3), ("opt-reps", 45, 5),
])
def test_eval_examples(fn, n, value):
    code, rep = call_json("eval", "--fn", fn, "--n", str(n), "--split")
    assert code == 0
    assert rep["value"] == rep["value_by_splitting"] == value


def test_eval_naf_string():
    code, rep = call_json("eval", "--fn", "naf-weight", "--n", "27")
    assert rep["naf"] == "100T0T"


def test_check_quasi_pass_and_fail():
    code, rep = call_json("check-quasi", "--fn", "naf-weight", "--amax", "16", "--kmax", "5")
    assert code == 0 and rep["result"] == "PASS"
    code, rep = call_json("check-quasi", "--fn", "naf-weight", "--r", "1", "--a-max", "16", "--k-max", "5")
    assert code == 1 and rep["counterexample"]["lhs"] != rep["counterexample"]["rhs"]
    code, rep = call_json("check-quasi", "--fn", "naf-weight", "--s", "4", "--amax", "8", "--kmax", "4")
    assert code == 0 and rep["r"] == 4


def test_check_quasi_mode_override():
    code, rep = call_json("check-quasi", "--fn", "naf-weight", "--mode", "mult", "--amax", "4", "--kmax", "3")
    assert code == 1 and rep["mode"] == "multiplicative"


def test_check_transducer():
    assert call("check-transducer", "--builtin", "naf-weight", "--r", "2")[0] == 0
    assert call("check-transducer", "--builtin", "block-count:0101", "--r", "3")[0] == 0
    assert call("check-transducer", "--transducer", str(FIXTURE_DIR / "naf_transducer.json"), "--r", "2")[0] == 0
    assert call("check-transducer", "--builtin", "naf-weight", "--r", "0")[0] == 1


def test_gf_check():
    code, rep = call_json("gf-check", "--fn", "opt-reps", "--K", "10")
    assert code == 0 and rep["result"] == "PASS" and rep["compared"] == 33


def test_bset():
    code, rep = call_json("bset", "--r", "2", "--max-len", "3")
    assert code == 0 and rep["members"] == [1, 3, 5, 7]
    code, rep = call_json("bset", "--r", "2", "--max-len", "12", "--count-only")
    assert "members" not in rep


def test_experiment_csv(tmp_path):
    out, hist = tmp_path / "e.csv", tmp_path / "h.csv"
    code, rep = call_json("experiment", "--fn", "naf-weight", "--k", "8", "10", "--out", str(out), "--hist", str(hist))
    assert code == 0 and len(rep["experiments"]) == 2
    rows = list(csv.DictReader(out.open()))
    assert [r["k"] for r in rows] == ["8", "10"]
    assert {"mean", "variance", "ks_distance"} <= set(rows[0])
    masses = [float(r["mass"]) for r in csv.DictReader(hist.open()) if r["k"] == "10"]
    assert abs(sum(masses) - 1) < 1e-9


def test_experiment_jobs_match_single():
    single = call("experiment", "--fn", "adjusted-gray", "--k", "6", "8")
    pooled = call("experiment", "--fn", "adjusted-gray", "--k", "6", "8", "--jobs", "2")
    assert single == pooled


@pytest.mark.parametrize("argv", [
    ("constants", "--fn", "block-count:0101", "--exact"),
    ("check-regular", "--rep", "fixtures/hn_rep.json", "--add", "--r", "2"),
    ("experiment", "--fn", "naf-weight", "--k", "10"),
])
def test_repeated_runs_identical(argv):
    assert call(*argv) == call(*argv)
    assert call("--format", "json", *argv) == call("--format", "json", *argv)


def test_exit_code_errors(tmp_path, capsys):
    assert call("eval", "--fn", "no-such-function", "--n", "3")[0] == 2
    assert call("check-regular", "--rep", str(tmp_path / "missing.json"), "--mult")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("check-regular", "--rep", str(bad), "--mult")[0] == 2
    assert call("split", "--n", "10", "--q", "1", "--r", "1")[0] == 2
    assert call("constants", "--fn", "opt-reps", "--exact")[0] == 2
    assert call("check-quasi", "--fn", "naf-weight", "--q", "3")[0] == 2
    err = capsys.readouterr().err
    assert err.count("digitfn: error:") == 6
    with pytest.raises(SystemExit) as exc:
        run(["constants"])
    assert exc.value.code == 2


def test_render():
    from fractions import Fraction
    assert render(Fraction(2, 27)) == "2/27"
    assert render(Fraction(4, 2)) == 2
    assert render(0.0608287123456) == 0.0608287123
    assert render({"a": [Fraction(1, 3), 1.0]}) == {"a": ["1/3", 1.0]}
