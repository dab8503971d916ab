import json
import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from recmodal.decide import LogicMode, decide
from recmodal.formula import BOT, TOP, And, Implies, Not, Rhd, Var, parse
from recmodal.hilbert import (
    Proof,
    ProofBuilder,
    ProofFormatError,
    ProofLine,
    check_proof,
    instantiate_axiom,
    library_proof,
    load_proof,
    proof_from_json,
    proof_to_json,
    random_proof,
    save_proof,
)
from recmodal.kripke import forces, random_model
from support import lemma_mutants

p, q, r, a, b, c = (Var(n) for n in "pqrabc")


def test_axiom_instances():
    assert instantiate_axiom("ax2", {"phi": p}) == Rhd(BOT, p)
    assert instantiate_axiom("ax3", {"phi": BOT}) == Rhd(BOT, TOP)
    assert instantiate_axiom("ax4", {"phi": a, "psi": b, "chi": c}) == Implies(
        Rhd(a, b), Implies(Rhd(a, c), Rhd(a, And(b, c)))
    )
    assert instantiate_axiom("ax1", {"phi": p, "psi": q, "chi": r}) == parse("p |> q -> r |> q -> (p | r) |> q")


def test_axiom_missing_binding():
    with pytest.raises(KeyError):
        instantiate_axiom("ax1", {"phi": p, "psi": q})
    with pytest.raises(ValueError):
        instantiate_axiom("ax9", {"phi": p})


def test_first_lemma_in_both_logics():
    proof = library_proof("lemma1")
    report = check_proof(proof)
    assert report.ok and not report.is_theorem
    assert report.conclusion == Rhd(a, b)
    proof.logic = LogicMode.RD
    assert check_proof(proof).ok


def test_second_lemma_needs_determinism():
    proof = library_proof("lemma2")
    assert proof.logic is LogicMode.RD
    report = check_proof(proof)
    assert report.ok and report.conclusion == Rhd(a, Not(b))
    proof.logic = LogicMode.R
    report = check_proof(proof)
    assert not report.ok
    assert report.errors[0][0] == 2
    assert "A4" in report.errors[0][1]


@pytest.mark.parametrize("lemma", ["lemma1", "lemma2"])
def test_mutants_rejected(lemma):
    mutants = lemma_mutants(library_proof(lemma))
    assert len(mutants) == 10
    for name, proof in mutants:
        assert not check_proof(proof).ok, name


def test_m_over_hypothesis_is_rejected():
    b_ = ProofBuilder("r", [Implies(p, q)])
    h = b_.hyp(0)
    t = b_.classical(Implies(r, r))
    b_.proof.lines.append(ProofLine(Implies(Rhd(q, r), Rhd(p, r)), "m", (h, t)))
    report = check_proof(b_.proof)
    assert not report.ok
    assert report.errors == [(2, "rule m applies only to theorems, not to hypothesis-derived lines")]


def test_m_needs_implications():
    lines = [
        ProofLine(Rhd(BOT, p), "ax2", (), {"phi": p}),
        ProofLine(Implies(q, q), "classical"),
        ProofLine(Implies(Rhd(q, q), Rhd(q, q)), "m", (0, 1)),
    ]
    report = check_proof(Proof(LogicMode.R, [], lines))
    assert report.errors == [(2, "rule m needs two implications")]


def test_empty_and_unknown():
    assert not check_proof(Proof(LogicMode.R, [], [])).ok
    assert not check_proof(Proof(LogicMode.R, [], [ProofLine(p, "magic")])).ok
    assert not check_proof(Proof(LogicMode.R, [], [ProofLine(p, "mp", (0,))])).ok


def test_file_round_trip(tmp_path):
    proof = library_proof("lemma2")
    path = tmp_path / "x.proof"
    save_proof(proof, path)
    back = load_proof(path)
    assert [l.formula for l in back.lines] == [l.formula for l in proof.lines]
    assert proof_to_json(back) == proof_to_json(proof)


def test_malformed_files(tmp_path):
    path = tmp_path / "bad.proof"
    path.write_text("{")
    with pytest.raises(ProofFormatError):
        load_proof(path)
    with pytest.raises(ProofFormatError):
        proof_from_json({"logic": "r", "lines": [{"rule": "classical"}]})
    with pytest.raises(ProofFormatError):
        proof_from_json({"logic": "r", "lines": [{"formula": "p |>", "rule": "classical"}]})
    with pytest.raises(ProofFormatError):
        proof_from_json({"logic": "modal", "lines": []})


@given(st.integers(0, 10_000), st.sampled_from(["r", "rd"]))
@settings(max_examples=60, deadline=None)
def test_random_proofs_are_sound(seed, logic):
    proof = random_proof(seed, logic)
    report = check_proof(proof)
    assert report.ok and report.is_theorem
    assert decide(report.conclusion, logic).valid


HYPS = [Rhd(p, q), p, Implies(p, Rhd(q, p)), Not(Rhd(TOP, q))]


@given(st.integers(0, 10_000), st.sampled_from(["r", "rd"]))
@settings(max_examples=40, deadline=None)
def test_proofs_from_hypotheses_hold_where_hypotheses_do(seed, logic):
    hyps = random.Random(seed).sample(HYPS, 2)
    proof = random_proof(seed, logic, hypotheses=hyps)
    report = check_proof(proof)
    assert report.ok
    for k in range(5):
        m = random_model(3, 0.4, ["p", "q"], seed + k, deterministic=logic == "rd")
        for w in m.worlds:
            if all(forces(m, w, h) for h in hyps):
                assert all(forces(m, w, line.formula) for line in proof.lines)


def _permute(proof, rng):
    """Random topological reordering with references renumbered."""
    n = len(proof.lines)
    deps = {i: set(proof.lines[i].refs) if proof.lines[i].rule in ("mp", "m") else set() for i in range(n)}
    order, placed = [], set()
    while len(order) < n:
        ready = [i for i in range(n) if i not in placed and deps[i] <= placed | {j for j in deps[i] if not 0 <= j < n}]
        i = rng.choice(ready)
        order.append(i)
        placed.add(i)
    new_pos = {old: k for k, old in enumerate(order)}
    lines = []
    for old in order:
        line = proof.lines[old]
        if line.rule in ("mp", "m"):
            line = ProofLine(line.formula, line.rule, tuple(new_pos.get(j, j) for j in line.refs), line.bindings)
        lines.append(line)
    return Proof(proof.logic, proof.hypotheses, lines)


@given(st.integers(0, 10_000), st.booleans())
@settings(max_examples=60, deadline=None)
def test_verdict_ignores_order_of_independent_lines(seed, mutate):
    rng = random.Random(seed)
    proof = random_proof(seed, "rd", hypotheses=[Rhd(p, q)])
    if mutate:
        proof = rng.choice(lemma_mutants(library_proof("lemma2")))[1]
    expected = check_proof(proof).ok
    for _ in range(3):
        assert check_proof(_permute(proof, rng)).ok == expected


def test_library_json_is_readable():
    data = proof_to_json(library_proof("lemma1"))
    assert data["logic"] == "r"
    assert json.loads(json.dumps(data)) == data
