"""Shared strategies and builders for the test suite."""

import hypothesis.strategies as st

from recmodal.formula import BOT, TOP, And, Implies, Not, Or, Rhd, Var
from recmodal.kripke import KripkeModel
from recmodal.recfun.kleene import Hole, Transformer
from recmodal.recfun.sexpr import lst

VARS = ("p", "q", "r")


def formulas(names=VARS[:2], max_leaves=8, rhd=True):
    leaves = st.sampled_from([Var(n) for n in names] + [BOT, TOP])
    ops = [Implies, And, Or] + ([Rhd] if rhd else [])

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.builds(lambda op, a, b: op(a, b), st.sampled_from(ops), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def models(draw, max_worlds=4, names=VARS[:2], deterministic=False):
    n = draw(st.integers(1, max_worlds))
    worlds = tuple(f"w{i}" for i in range(n))
    cells = [(u, w) for w in worlds for u in worlds]
    triples = set()
    for u, w in cells:
        if deterministic:
            v = draw(st.sampled_from((None,) + worlds))
            if v is not None:
                triples.add((u, w, v))
        else:
            for v in worlds:
                if draw(st.booleans()):
                    triples.add((u, w, v))
    valuation = {p: frozenset(w for w in worlds if draw(st.booleans())) for p in names}
    return KripkeModel(worlds, frozenset(triples), valuation)


def sample_transformers(n):
    """Total transformers for the recursion theorem: each builds a lookup code
    over the fixed points, with an ``amb`` branch and a data-returning
    default."""
    out = []
    for i in range(n):
        body = lst("cons", lst("quote", Hole(i)), "input")
        for j in reversed(range(n)):
            k, l = (i + j) % n, (i + 2 * j + 1) % n
            hit = lst("amb", lst("quote", Hole(k)), lst("quote", Hole(l)))
            body = lst("if", lst("eq", "input", lst("quote", Hole(j))), hit, body)
        out.append(Transformer.from_template(body, name=f"f{i}"))
    return out


def _edit(proof, n, **changes):
    from dataclasses import replace

    from recmodal.hilbert import Proof

    lines = list(proof.lines)
    lines[n] = replace(lines[n], **changes)
    return Proof(proof.logic, list(proof.hypotheses), lines)


def lemma_mutants(proof):
    """Ten broken variants of a nine-line lemma script: hyp, hyp, axiom,
    mp, mp, classical, classical, m, mp."""
    from recmodal.formula import Implies, Var
    from recmodal.hilbert import Proof

    ax = proof.lines[2]
    tainted = Proof(proof.logic, list(proof.hypotheses) + [proof.lines[5].formula], list(proof.lines))
    tainted = _edit(tainted, 5, rule="hyp", refs=(len(proof.hypotheses),))
    swapped = dict(ax.bindings)
    swapped["phi"], swapped["chi"] = swapped["chi"], swapped["phi"]
    other_schema = "ax4" if ax.rule == "ax1" else "ax1"
    return [
        ("final mp refs reversed", _edit(proof, 8, refs=(7, 4))),
        ("mp cites a later line", _edit(proof, 3, refs=(0, 5))),
        ("mp cites a missing line", _edit(proof, 4, refs=(1, 99))),
        ("rule m premises swapped", _edit(proof, 7, refs=(6, 5))),
        ("rule m over a hypothesis", tainted),
        ("rule m over an mp line from hypotheses", _edit(proof, 7, refs=(3, 6))),
        ("axiom bindings swapped", _edit(proof, 2, bindings=swapped)),
        ("classical line not a tautology", _edit(proof, 6, formula=Implies(Var("b"), Var("a")))),
        ("wrong axiom schema", _edit(proof, 2, rule=other_schema)),
        ("hypothesis index off by one", _edit(proof, 0, refs=(1,))),
    ]
