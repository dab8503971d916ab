"""Turn a finite Kripke model into actual program codes.

World number ``i`` becomes the fixed point ``code[i]`` of a lookup
transformer.  Given the codes, that transformer returns a program which, on
``code[j]``, nondeterministically returns some ``code[k]`` with the triple
``(j, i, k)`` in the model, and diverges on anything else.

A variable ``p`` denotes the codes of the worlds forcing ``p``.  Membership
of a code in the set denoted by a formula is then decided by running the
codes, and compared with forcing in the model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..formula import Bottom, ClosureSet, Formula, Implies, Rhd, Var, render
from ..kripke import KripkeModel, extensions, is_deterministic, model_from_json, model_to_json
from .kleene import Hole, KleeneSystem, Transformer, kleene_system
from .machine import DEFAULT_BUDGET, EvalResult, eval_program
from .sexpr import Expr, contains_atom, lst, parse, render as render_sexpr, to_pylist


class RealizationError(Exception):
    pass


class BudgetError(RealizationError):
    """An evaluation needed for membership did not finish within budget."""


def lookup_template(m: KripkeModel, i: int):
    """Lookup transformer template for one world, with one hole per code."""
    worlds = m.worlds
    pos = {w: k for k, w in enumerate(worlds)}
    prog = worlds[i]
    out = "diverge"
    for j in reversed(range(len(worlds))):
        targets = sorted(pos[v] for v in m.successors(prog, worlds[j]))
        if not targets:
            continue
        body = lst("quote", Hole(targets[-1]))
        for k in reversed(targets[:-1]):
            body = lst("amb", lst("quote", Hole(k)), body)
        out = lst("if", lst("eq", "input", lst("quote", Hole(j))), body, out)
    return out


def lookup_transformers(m: KripkeModel) -> list[Transformer]:
    return [Transformer.from_template(lookup_template(m, i), name=f"f[{w}]") for i, w in enumerate(m.worlds)]


@dataclass
class RealizationBundle:
    model: KripkeModel
    codes: dict[str, Expr]
    valuation: dict[str, frozenset]
    budget: int = DEFAULT_BUDGET
    system: KleeneSystem | None = field(default=None, repr=False)
    _outputs: dict = field(default_factory=dict, repr=False)
    _table: dict | None = field(default=None, repr=False)

    @property
    def worlds(self) -> tuple[str, ...]:
        return self.model.worlds

    def code(self, i: int) -> Expr:
        return self.codes[self.worlds[i]]

    @property
    def eval_mode(self) -> str:
        return "det" if is_deterministic(self.model) else "nondet"


def realize(m: KripkeModel, budget: int = DEFAULT_BUDGET) -> RealizationBundle:
    system = kleene_system(lookup_transformers(m), budget)
    codes = dict(zip(m.worlds, system.codes))
    if len(set(system.codes)) != len(codes):
        raise RealizationError("fixed points are not distinct")
    valuation = {p: frozenset(codes[w] for w in ws) for p, ws in m.valuation.items()}
    return RealizationBundle(m, codes, valuation, budget, system)


# -- static shape of realized codes ----------------------------------------------

def _lookup_table(code: Expr, index: dict) -> dict[int, frozenset[int]] | None:
    """Parse a lookup code ``(if (eq input (quote x_j)) BODY REST) .. diverge``.

    Returns ``j -> {k}`` or None when the shape is anything else; every input
    outside the tested codes then provably diverges.
    """
    table: dict[int, frozenset[int]] = {}
    while code != "diverge":
        items = to_pylist(code)
        if items is None or len(items) != 4 or items[0] != "if":
            return None
        test = to_pylist(items[1])
        if test is None or len(test) != 3 or test[0] != "eq" or test[1] != "input":
            return None
        q = to_pylist(test[2])
        if q is None or len(q) != 2 or q[0] != "quote" or q[1] not in index:
            return None
        outs = _amb_quotes(items[2], index)
        if outs is None:
            return None
        j = index[q[1]]
        # an earlier test on the same code shadows later ones
        table.setdefault(j, outs)
        code = items[3]
    return table


def _amb_quotes(body: Expr, index: dict) -> frozenset[int] | None:
    items = to_pylist(body)
    if items is None or len(items) != 2 and len(items) != 3:
        return None
    if items[0] == "quote" and len(items) == 2:
        return frozenset([index[items[1]]]) if items[1] in index else None
    if items[0] == "amb" and len(items) == 3:
        a = _amb_quotes(items[1], index)
        b = _amb_quotes(items[2], index)
        return None if a is None or b is None else a | b
    return None


def check_shape(b: RealizationBundle) -> dict[int, dict[int, frozenset[int]]]:
    """Establish that each code diverges on every input that is not a code.

    Each code must have the form ``(apply (apply (quote W) (quote WS)) input)``
    where ``W`` deterministically computes a lookup code from ``WS``.  Returns
    the lookup tables, which describe each code's behaviour exactly.
    """
    if b._table is not None:
        return b._table
    index = {b.code(i): i for i in range(len(b.worlds))}
    if len(index) != len(b.worlds):
        raise RealizationError("codes are not distinct")
    tables = {}
    for i in range(len(b.worlds)):
        items = to_pylist(b.code(i))
        inner = to_pylist(items[1]) if items and len(items) == 3 else None
        if not (items and items[0] == "apply" and items[2] == "input" and inner and len(inner) == 3 and inner[0] == "apply"):
            raise RealizationError(f"code of {b.worlds[i]} is not a realization code; refusing membership")
        w, ws = (to_pylist(inner[1]), to_pylist(inner[2]))
        if not (w and ws and w[0] == "quote" and ws[0] == "quote"):
            raise RealizationError(f"code of {b.worlds[i]} is not a realization code; refusing membership")
        res = eval_program(w[1], ws[1], b.budget, mode="det")
        if not res.conclusive or len(res.values) != 1:
            raise RealizationError(f"program inside the code of {b.worlds[i]} is not total")
        (lookup,) = res.values
        table = _lookup_table(lookup, index)
        if table is None:
            raise RealizationError(f"code of {b.worlds[i]} does not reduce to a lookup code")
        tables[i] = table
    b._table = tables
    return tables


# -- membership ----------------------------------------------------------------

def outputs(b: RealizationBundle, i: int, j: int) -> frozenset[int]:
    """Indices ``k`` with ``code[k]`` among the values of ``code[i]`` on ``code[j]``."""
    key = (i, j)
    if key not in b._outputs:
        res: EvalResult = eval_program(b.code(i), b.code(j), b.budget, b.eval_mode)
        if not res.conclusive:
            raise BudgetError(f"evaluation of {b.worlds[i]} on {b.worlds[j]} was cut short")
        index = {b.code(k): k for k in range(len(b.worlds))}
        try:
            b._outputs[key] = frozenset(index[v] for v in res.values)
        except KeyError:
            raise RealizationError(f"{b.worlds[i]} returned a non-code on {b.worlds[j]}") from None
    return b._outputs[key]


def extension(b: RealizationBundle, phi: Formula, universal: bool = False) -> frozenset[int]:
    """Indices ``i`` with ``code[i]`` in the set denoted by ``phi``."""
    check_shape(b)
    n = len(b.worlds)
    everyone = frozenset(range(n))
    memo: dict[Formula, frozenset[int]] = {}

    def ext(f: Formula) -> frozenset[int]:
        if f in memo:
            return memo[f]
        match f:
            case Bottom():
                out = frozenset()
            case Var(name):
                vals = b.valuation.get(name, frozenset())
                out = frozenset(i for i in range(n) if b.code(i) in vals)
            case Implies(a, c):
                out = (everyone - ext(a)) | ext(c)
            case Rhd(a, c):
                src, dst = ext(a), ext(c)
                # inputs outside the codes give empty output (check_shape), so
                # the quantifier over all data reduces to the codes in src
                out = frozenset(
                    i for i in range(n)
                    if all(_lands(outputs(b, i, j), dst, universal) for j in src)
                )
        memo[f] = out
        return out

    return ext(phi)


def _lands(vals: frozenset[int], dst: frozenset[int], universal: bool) -> bool:
    if not vals:
        return True
    return vals <= dst if universal else bool(vals & dst)


def membership(b: RealizationBundle, phi: Formula, i: int, universal: bool = False) -> bool:
    return i in extension(b, phi, universal)


@dataclass
class RealizationReport:
    formulas: list[Formula]
    worlds: tuple[str, ...]
    matrix: dict[tuple[Formula, str], tuple[bool, bool]]   # (member, forced)
    mismatches: list[tuple[Formula, str]]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "agreement": self.ok,
            "worlds": list(self.worlds),
            "rows": [
                {"formula": render(f), "member": [self.matrix[f, w][0] for w in self.worlds],
                 "forced": [self.matrix[f, w][1] for w in self.worlds]}
                for f in self.formulas
            ],
            "mismatches": [{"formula": render(f), "world": w} for f, w in self.mismatches],
        }


def verify_realization(b: RealizationBundle, c: ClosureSet | list[Formula], universal: bool = False) -> RealizationReport:
    formulas = list(c)
    matrix = {}
    bad = []
    for phi in formulas:
        forced = extensions(b.model, phi, universal)[phi]
        members = extension(b, phi, universal)
        for i, w in enumerate(b.worlds):
            pair = (i in members, w in forced)
            matrix[phi, w] = pair
            if pair[0] != pair[1]:
                bad.append((phi, w))
    return RealizationReport(formulas, b.worlds, matrix, bad)


# -- files -----------------------------------------------------------------------

def bundle_to_json(b: RealizationBundle) -> dict:
    return {
        "model": model_to_json(b.model),
        "codes": {w: render_sexpr(b.codes[w]) for w in b.worlds},
        "valuation": {p: sorted(render_sexpr(x) for x in xs) for p, xs in sorted(b.valuation.items())},
        "budget": b.budget,
    }


def bundle_from_json(data: dict) -> RealizationBundle:
    try:
        model = model_from_json(data["model"])
        codes = {w: parse(text) for w, text in data["codes"].items()}
        valuation = {p: frozenset(parse(t) for t in xs) for p, xs in data.get("valuation", {}).items()}
        budget = int(data.get("budget", DEFAULT_BUDGET))
    except (KeyError, TypeError, ValueError) as exc:
        raise RealizationError(f"malformed bundle: {exc}") from None
    if set(codes) != set(model.worlds):
        raise RealizationError("bundle codes must cover exactly the model's worlds")
    known = set(codes.values())
    for p, xs in valuation.items():
        if not xs <= known:
            raise RealizationError(f"valuation of {p!r} contains a non-code")
    return RealizationBundle(model, codes, valuation, budget)


def save_bundle(b: RealizationBundle, path: str | Path) -> None:
    Path(path).write_text(json.dumps(bundle_to_json(b), indent=1) + "\n")


def load_bundle(path: str | Path) -> RealizationBundle:
    return bundle_from_json(json.loads(Path(path).read_text()))


def amb_free(b: RealizationBundle) -> bool:
    return not any(contains_atom(u, "amb") for u in b.codes.values())
