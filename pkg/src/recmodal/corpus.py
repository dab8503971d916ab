"""Formula corpora and the three-way agreement check.

For each formula the check compares the decision procedure, model checking
of the extracted and enumerated countermodels, and membership of realized
program codes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .decide import LogicMode, Refuted, Verdict, decide
from .formula import BOT, TOP, And, Formula, Implies, Not, Or, Rhd, Var, closure, render
from .kripke import forces, is_deterministic
from .oracle import UNKNOWN, brute_force_oracle

BINARY = (And, Or, Implies, Rhd)
MAX_REALIZED_WORLDS = 6


def _leaves(names: Sequence[str]) -> list[Formula]:
    return [Var(n) for n in names] + [BOT, TOP]


def _layer(names: Sequence[str]) -> list[Formula]:
    """All formulas of depth exactly one, counting sugar as written."""
    leaves = _leaves(names)
    out = [Not(a) for a in leaves]
    out += [op(a, b) for op in BINARY for a in leaves for b in leaves]
    return out


def generate_corpus(n: int = 200, seed: int = 0, names: Sequence[str] = ("p", "q"), rhd_bias: float = 0.5) -> list[Formula]:
    """``n`` distinct formulas of depth at most two.

    Depth counts ``~``, ``&``, ``|``, ``->`` and ``|>`` as written, with the
    constants ``true`` and ``false`` as leaves.  Every depth-one ``|>``
    formula comes first; the rest are sampled, with ``|>`` at the root with
    probability ``rhd_bias``.
    """
    rng = random.Random(seed)
    leaves = _leaves(names)
    shallow = leaves + _layer(names)
    out: list[Formula] = []
    seen: set[Formula] = set()

    def add(phi):
        if phi not in seen:
            seen.add(phi)
            out.append(phi)

    for a in leaves:
        for b in leaves:
            add(Rhd(a, b))
    attempts = 0
    while len(out) < n and attempts < 100 * n:
        attempts += 1
        if rng.random() < 0.1:
            add(Not(rng.choice(shallow)))
            continue
        op = Rhd if rng.random() < rhd_bias else rng.choice(BINARY[:3])
        add(op(rng.choice(shallow), rng.choice(shallow)))
    return out[:n]


@dataclass
class Agreement:
    formula: Formula
    mode: LogicMode
    verdict: Verdict
    oracle: Refuted | str
    model_checked: bool      # every countermodel at hand refutes the formula
    realized: bool | None    # refuting code lies outside the formula's set; None when skipped
    worlds: int

    @property
    def ok(self) -> bool:
        if self.verdict.valid and self.oracle != UNKNOWN:
            return False
        return self.model_checked and self.realized is not False

    def row(self) -> dict:
        return {
            "formula": render(self.formula),
            "logic": self.mode.value,
            "decide": "valid" if self.verdict.valid else "refuted",
            "oracle": "refuted" if isinstance(self.oracle, Refuted) else UNKNOWN,
            "model_check": self.model_checked,
            "realized": self.realized,
            "worlds": self.worlds,
            "agree": self.ok,
        }


def _realized_refutes(ref: Refuted, phi: Formula, universal: bool, budget: int | None) -> bool | None:
    from .recfun.machine import DEFAULT_BUDGET
    from .recfun.realize import membership, realize, verify_realization

    if len(ref.model.worlds) > MAX_REALIZED_WORLDS:
        return None
    b = realize(ref.model, budget or DEFAULT_BUDGET)
    if not verify_realization(b, closure(phi), universal).ok:
        return False
    return not membership(b, phi, ref.model.worlds.index(ref.world), universal)


def agreement(
    phi: Formula,
    mode: LogicMode | str = LogicMode.R,
    oracle_bound: int = 3,
    realize_models: bool = True,
    budget: int | None = None,
) -> Agreement:
    mode = LogicMode.parse(mode)
    universal = mode is LogicMode.RFORALL
    verdict = decide(phi, mode)
    oracle = brute_force_oracle(phi, mode, oracle_bound) if oracle_bound else UNKNOWN
    refutations = [r for r in (verdict, oracle) if isinstance(r, Refuted)]
    checked = True
    for r in refutations:
        if forces(r.model, r.world, phi, universal):
            checked = False
        if mode.deterministic and not is_deterministic(r.model):
            checked = False
    realized = None
    if realize_models and refutations:
        results = [_realized_refutes(r, phi, universal, budget) for r in refutations]
        if False in results:
            realized = False
        elif True in results:
            realized = True
    worlds = len(verdict.model.worlds) if isinstance(verdict, Refuted) else 0
    return Agreement(phi, mode, verdict, oracle, checked, realized, worlds)


def run_corpus(formulas: Iterable[Formula], modes: Sequence[LogicMode | str] = ("r",), **kw) -> list[Agreement]:
    return [agreement(phi, m, **kw) for phi in formulas for m in modes]


def format_table(rows: Sequence[Agreement]) -> str:
    lines = [f"{'logic':<8}{'decide':<9}{'oracle':<9}{'check':<7}{'real':<6}formula"]
    for a in rows:
        r = a.row()
        real = {True: "yes", False: "NO", None: "-"}[r["realized"]]
        lines.append(
            f"{r['logic']:<8}{r['decide']:<9}{r['oracle']:<9}{'ok' if r['model_check'] else 'BAD':<7}{real:<6}{r['formula']}"
        )
    bad = sum(not a.ok for a in rows)
    lines.append(f"{len(rows)} rows, {bad} disagreements")
    return "\n".join(lines)
