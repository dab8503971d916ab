import json
import subprocess
import sys

import pytest

from recmodal.cli import main
from recmodal.corpus import agreement, format_table, generate_corpus
from recmodal.formula import var_names


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("RECMODAL_BUDGET", raising=False)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decide_valid(capsys):
    code, out, _ = run(capsys, "decide", "--logic", "r", "false |> p")
    assert code == 0 and out.strip() == "valid"


def test_decide_refuted_writes_countermodel(capsys, in_tmp):
    code, out, _ = run(capsys, "decide", "--logic", "r", "(true |> p) |> p")
    assert code == 1 and out.startswith("refuted")
    data = json.loads((in_tmp / "countermodel.json").read_text())
    assert data["verdict"] == "refuted" and data["formula"] == "(true |> p) |> p"
    # the countermodel re-verifies: the formula fails at the recorded world
    code, out, _ = run(capsys, "check-model", "countermodel.json")
    assert code == 1 and "not forced at " + data["world"] in out


@pytest.mark.parametrize("logic", ["rd", "rforall"])
def test_deterministic_countermodel(capsys, logic):
    code, _, _ = run(capsys, "decide", "--logic", logic, "(true |> p) |> p", "-o", "cm.json")
    assert code == 1
    code, _, _ = run(capsys, "check-model", "cm.json")
    assert code == 1


def test_decide_from_file_and_json(capsys, in_tmp):
    (in_tmp / "f.txt").write_text("p |> q -> (p |> r -> p |> (q & r))\n")
    code, out, _ = run(capsys, "decide", "--logic", "rd", "--file", "f.txt", "--json")
    assert code == 0 and json.loads(out) == {"formula": "p |> q -> p |> r -> p |> q & r", "logic": "rd", "verdict": "valid"}


def test_check_model_on_plain_model(capsys, in_tmp):
    (in_tmp / "m.json").write_text(json.dumps({"worlds": ["a", "w", "b"], "triples": [["a", "w", "b"]], "valuation": {"p": ["a"]}}))
    code, _, _ = run(capsys, "check-model", "m.json", "p |> q", "--world", "w")
    assert code == 1
    code, _, _ = run(capsys, "check-model", "m.json", "false |> q")
    assert code == 0
    code, _, err = run(capsys, "check-model", "m.json", "p", "--world", "zz")
    assert code == 2 and "unknown world" in err
    (in_tmp / "nd.json").write_text(json.dumps({"worlds": ["a", "b"], "triples": [["a", "a", "a"], ["a", "a", "b"]]}))
    code, out, _ = run(capsys, "check-model", "nd.json", "p", "--logic", "rd")
    assert code == 1 and "not deterministic" in out


def test_check_model_errors(capsys, in_tmp):
    (in_tmp / "bad.json").write_text("{")
    assert run(capsys, "check-model", "bad.json", "p")[0] == 2
    (in_tmp / "bad2.json").write_text(json.dumps({"worlds": ["a"], "triples": [["a", "a", "zz"]]}))
    assert run(capsys, "check-model", "bad2.json", "p")[0] == 2
    assert run(capsys, "check-model", "missing.json", "p")[0] == 2


def test_check_proof(capsys):
    code, out, _ = run(capsys, "check-proof", "lemma1.proof")
    assert code == 0 and out.startswith("ok")
    assert run(capsys, "check-proof", "lemma2.proof")[0] == 0
    code, out, _ = run(capsys, "check-proof", "lemma2.proof", "--logic", "r")
    assert code == 1 and "line 2" in out
    assert run(capsys, "check-proof", "nothing.proof")[0] == 2


def test_realize_and_verify(capsys):
    run(capsys, "decide", "(true |> p) |> p")
    code, out, _ = run(capsys, "realize", "countermodel.json", "-o", "b.json")
    assert code == 0 and "deterministic" in out
    code, out, _ = run(capsys, "verify-realization", "b.json", "(true |> p) |> p")
    assert code == 0 and out.rstrip().endswith("agreement")
    report = json.loads(out[: out.rindex("}") + 1])
    assert report["agreement"] and report["mismatches"] == []


def test_eval(capsys, monkeypatch):
    code, out, _ = run(capsys, "eval", "(amb (quote a) (cons input input))", "b")
    assert code == 0 and out.splitlines() == ["(b . b)", "a"]
    code, out, err = run(capsys, "eval", "diverge")
    assert code == 0 and out == "" and "diverges" in err
    monkeypatch.setenv("RECMODAL_BUDGET", "10")
    code, _, err = run(capsys, "eval", "(head (head (head (head (head (head input))))))", "((((((a))))))")
    assert code == 1 and "exhausted" in err
    monkeypatch.setenv("RECMODAL_BUDGET", "ten")
    assert run(capsys, "eval", "input")[0] == 2
    assert run(capsys, "eval", "(head input)", "a")[0] == 2
    assert run(capsys, "eval", "(a", "a")[0] == 2


def test_corpus_command(capsys, in_tmp):
    (in_tmp / "fs.txt").write_text("# a comment\nfalse |> p\n(true |> p) |> p\n")
    code, out, _ = run(capsys, "corpus", "--file", "fs.txt", "--logic", "r", "--logic", "rd")
    assert code == 0 and "4 rows, 0 disagreements" in out
    code, out, _ = run(capsys, "corpus", "--count", "5", "--json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 5 and all(r["agree"] for r in rows)


def test_usage_errors(capsys):
    assert run(capsys, "decide", "p |>")[0] == 2
    assert run(capsys, "decide")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["decide", "--logic", "s5", "p"])
    assert exc.value.code == 2
    assert run(capsys, "eval", "input", "--budget", "0")[0] == 2


def test_output_is_reproducible(in_tmp):
    cmd = [sys.executable, "-m", "recmodal.cli", "corpus", "--count", "12", "--seed", "4", "--logic", "r"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    cmd = [sys.executable, "-m", "recmodal.cli", "decide", "((p |> q) |> (q |> p))", "-o", "x.json"]
    subprocess.run(cmd, check=False)
    a = (in_tmp / "x.json").read_bytes()
    subprocess.run(cmd, check=False)
    assert (in_tmp / "x.json").read_bytes() == a


def test_generated_corpus_shape():
    c = generate_corpus(200, seed=0)
    assert len(c) == len(set(c)) == 200
    assert generate_corpus(200, seed=0) == c
    assert all(set(var_names(phi)) <= {"p", "q"} for phi in c)


def test_agreement_rows():
    rows = [agreement(phi, "r") for phi in generate_corpus(10, seed=3)]
    assert all(a.ok for a in rows)
    assert format_table(rows).endswith("10 rows, 0 disagreements")
