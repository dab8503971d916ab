import json

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from recmodal.decide import decide
from recmodal.formula import BOT, TOP, And, Implies, Or, Rhd, Var, iter_subformulas, parse
from recmodal.kripke import (
    KripkeModel,
    ModelError,
    extensions,
    forces,
    is_deterministic,
    load_model,
    model_from_json,
    random_model,
    save_model,
    valid_in_model,
)
from support import formulas, models

p, q, r = Var("p"), Var("q"), Var("r")


def example_model():
    return KripkeModel(("w", "a", "b"), frozenset({("a", "w", "b")}), {"p": {"a"}, "q": set()})


def test_is_deterministic_examples():
    assert is_deterministic(KripkeModel(("w",), frozenset(), {}))
    worlds = ("a", "b", "c", "w", "x")
    assert not is_deterministic(KripkeModel(worlds, frozenset({("a", "w", "b"), ("a", "w", "c")}), {}))
    assert is_deterministic(KripkeModel(worlds, frozenset({("a", "w", "b"), ("a", "x", "c")}), {}))


def test_forces_examples():
    m = example_model()
    assert all(forces(m, w, TOP) for w in m.worlds)
    assert not forces(m, "w", Rhd(p, q))
    assert forces(m, "a", Rhd(p, q))
    empty = KripkeModel(("x", "y"), frozenset(), {"p": {"x"}})
    assert all(forces(empty, w, Rhd(p, BOT)) for w in empty.worlds)
    assert not forces(empty, "y", Var("unassigned"))


def test_forces_unknown_world():
    with pytest.raises(ModelError):
        forces(example_model(), "nowhere", p)


def test_model_validation():
    with pytest.raises(ModelError):
        KripkeModel((), frozenset(), {})
    with pytest.raises(ModelError):
        KripkeModel(("a",), frozenset({("a", "a", "z")}), {})
    with pytest.raises(ModelError):
        KripkeModel(("a",), frozenset(), {"p": {"z"}})


@pytest.mark.parametrize("seed", range(10))
def test_axioms_two_and_three_hold_everywhere(seed):
    m = random_model(4, 0.4, ["p", "q"], seed)
    assert valid_in_model(m, Rhd(BOT, p))
    assert valid_in_model(m, Rhd(p, TOP))


def test_known_non_theorem_fails_in_some_model():
    phi = parse("(true |> p) |> p")
    for mode in ("r", "rd"):
        v = decide(phi, mode)
        assert not v.valid
        assert not forces(v.model, v.world, phi)
        assert not valid_in_model(v.model, phi)


def test_random_model_examples():
    one = random_model(1, 0.0, ["p"], 3)
    assert one.worlds == ("w0",) and not one.triples
    assert random_model(5, 0.5, ["p", "q"], 7) == random_model(5, 0.5, ["p", "q"], 7)
    assert is_deterministic(random_model(5, 1.0, [], 1, deterministic=True))


def test_save_load_round_trip(tmp_path):
    for m in (example_model(), KripkeModel(("x",), frozenset(), {})):
        path = tmp_path / "m.json"
        save_model(m, path)
        assert load_model(path) == m


def test_load_rejects_unknown_world(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"worlds": ["a"], "triples": [["a", "a", "b"]], "valuation": {}}))
    with pytest.raises(ModelError):
        load_model(path)
    path.write_text("{not json")
    with pytest.raises(ModelError):
        load_model(path)
    with pytest.raises(ModelError):
        model_from_json({"triples": []})


def naive_forces(m, w, phi, universal=False):
    if phi == BOT:
        return False
    if isinstance(phi, Var):
        return w in m.valuation.get(phi.name, ())
    if isinstance(phi, Implies):
        return not naive_forces(m, w, phi.lhs, universal) or naive_forces(m, w, phi.rhs, universal)
    for u in m.worlds:
        outs = m.successors(w, u)
        if not outs or not naive_forces(m, u, phi.lhs, universal):
            continue
        hits = [naive_forces(m, v, phi.rhs, universal) for v in outs]
        if not (all(hits) if universal else any(hits)):
            return False
    return True


@given(models(), formulas(max_leaves=8), st.booleans())
@settings(max_examples=200)
def test_memoised_forcing_matches_naive(m, phi, universal):
    ext = extensions(m, phi, universal)
    for psi in iter_subformulas(phi):
        for w in m.worlds:
            assert (w in ext[psi]) == naive_forces(m, w, psi, universal)


@given(models(deterministic=True), formulas(max_leaves=8))
@settings(max_examples=150)
def test_deterministic_clause_reads_both_ways(m, phi):
    # with at most one output per input, "some output" and "every output" coincide
    for w in m.worlds:
        assert forces(m, w, phi) == forces(m, w, phi, universal=True)


@given(models(names="pqrs"), st.data())
@settings(max_examples=150)
def test_monotonicity_rule_is_sound(m, data):
    a1, a2, b1, b2 = (Var(n) for n in "pqrs")
    # force the premises to hold everywhere by shrinking the valuation
    val = dict(m.valuation)
    val["p"] = val["p"] & val["q"]
    val["r"] = val["r"] & val["s"]
    m = KripkeModel(m.worlds, m.triples, val)
    for w in m.worlds:
        if forces(m, w, Rhd(a2, b1)):
            assert forces(m, w, Rhd(a1, b2))


@given(models(names="pqr"))
@settings(max_examples=100)
def test_first_axiom_valid_in_every_model(m):
    assert valid_in_model(m, Implies(Rhd(p, q), Implies(Rhd(r, q), Rhd(Or(p, r), q))))


@given(models(names="pqr", deterministic=True))
@settings(max_examples=100)
def test_fourth_axiom_valid_in_deterministic_models(m):
    assert valid_in_model(m, Implies(Rhd(p, q), Implies(Rhd(p, r), Rhd(p, And(q, r)))))
