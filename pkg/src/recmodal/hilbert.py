"""Hilbert-style proofs for R and Rd and a line-by-line checker.

Rules: ``hyp`` (a hypothesis, by index), ``classical`` (any propositional
tautology over modal atoms), ``ax1``..``ax4`` (explicit bindings for
``phi``/``psi``/``chi``), ``mp`` (refs ``[i, j]``, line ``j`` is
``line_i -> this``) and ``m`` (monotonicity, refs ``[i, j]`` with
``i: a1 -> a2`` and ``j: b1 -> b2`` giving ``a2 |> b1 -> a1 |> b2``).

Rule ``m`` applies to theorems only: both premises must be derived without
hypotheses.  Modus ponens may mix hypotheses freely.  Line references are
0-based.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .decide import LogicMode
from .formula import (
    BOT,
    TOP,
    And,
    Formula,
    Implies,
    Not,
    Or,
    Rhd,
    Var,
    is_prop_tautology,
    parse,
    render,
    subformulas,
)

AXIOMS = ("ax1", "ax2", "ax3", "ax4")
RULES = ("hyp", "classical", *AXIOMS, "mp", "m")
PROOF_DIR = Path(__file__).parent / "proofs"
_METAVARS = {"ax1": ("phi", "psi", "chi"), "ax2": ("phi",), "ax3": ("phi",), "ax4": ("phi", "psi", "chi")}


class ProofFormatError(ValueError):
    pass


def instantiate_axiom(schema: str, bindings: dict[str, Formula]) -> Formula:
    if schema not in _METAVARS:
        raise ValueError(f"unknown axiom schema {schema!r}")
    missing = [v for v in _METAVARS[schema] if v not in bindings]
    if missing:
        raise KeyError(f"{schema} needs a binding for {', '.join(missing)}")
    phi = bindings["phi"]
    if schema == "ax1":
        psi, chi = bindings["psi"], bindings["chi"]
        return Implies(Rhd(phi, psi), Implies(Rhd(chi, psi), Rhd(Or(phi, chi), psi)))
    if schema == "ax2":
        return Rhd(BOT, phi)
    if schema == "ax3":
        return Rhd(phi, TOP)
    psi, chi = bindings["psi"], bindings["chi"]
    return Implies(Rhd(phi, psi), Implies(Rhd(phi, chi), Rhd(phi, And(psi, chi))))


def rule_m(premise1: Formula, premise2: Formula) -> Formula:
    if not isinstance(premise1, Implies) or not isinstance(premise2, Implies):
        raise ValueError("rule m needs two implications")
    return Implies(Rhd(premise1.rhs, premise2.lhs), Rhd(premise1.lhs, premise2.rhs))


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    rule: str
    refs: tuple[int, ...] = ()
    bindings: dict[str, Formula] = field(default_factory=dict, compare=False)


@dataclass
class Proof:
    logic: LogicMode
    hypotheses: list[Formula]
    lines: list[ProofLine]

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1].formula if self.lines else None


@dataclass
class CheckReport:
    errors: list[tuple[int, str]]
    theorem_flags: list[bool]
    conclusion: Formula | None

    @property
    def ok(self) -> bool:
        return not self.errors and self.conclusion is not None

    @property
    def is_theorem(self) -> bool:
        return self.ok and self.theorem_flags[-1]

    def __str__(self):
        if self.ok:
            return f"ok: {render(self.conclusion)}"
        return "\n".join(f"line {i}: {reason}" for i, reason in self.errors) or "error: empty proof"


def check_proof(p: Proof) -> CheckReport:
    logic = LogicMode.parse(p.logic)
    errors: list[tuple[int, str]] = []
    flags: list[bool] = []
    valid: list[bool] = []

    def premise(n: int, ref: int) -> ProofLine | None:
        if not 0 <= ref < n:
            errors.append((n, f"reference {ref} is not an earlier line"))
            return None
        if not valid[ref]:
            errors.append((n, f"premise {ref} did not check"))
            return None
        return p.lines[ref]

    for n, line in enumerate(p.lines):
        nerr = len(errors)
        flag = True
        rule = line.rule
        if rule not in RULES:
            errors.append((n, f"unknown rule {rule!r}"))
        elif rule == "hyp":
            flag = False
            if len(line.refs) != 1 or not 0 <= line.refs[0] < len(p.hypotheses):
                errors.append((n, "hyp needs one valid hypothesis index"))
            elif p.hypotheses[line.refs[0]] != line.formula:
                errors.append((n, "formula differs from the cited hypothesis"))
        elif rule == "classical":
            if not is_prop_tautology(line.formula):
                errors.append((n, "not a propositional tautology"))
        elif rule in AXIOMS:
            if rule == "ax4" and logic is LogicMode.R:
                errors.append((n, "axiom A4 is not available in logic R"))
            else:
                try:
                    expected = instantiate_axiom(rule, line.bindings)
                except KeyError as exc:
                    errors.append((n, str(exc.args[0])))
                else:
                    if expected != line.formula:
                        errors.append((n, f"expected axiom instance {render(expected)}"))
        else:
            if len(line.refs) != 2:
                errors.append((n, f"{rule} needs exactly two references"))
            else:
                a = premise(n, line.refs[0])
                b = premise(n, line.refs[1])
                if a is not None and b is not None:
                    if rule == "mp":
                        if b.formula != Implies(a.formula, line.formula):
                            errors.append((n, f"line {line.refs[1]} is not 'line {line.refs[0]} -> this'"))
                        flag = flags[line.refs[0]] and flags[line.refs[1]]
                    else:
                        if not (flags[line.refs[0]] and flags[line.refs[1]]):
                            errors.append((n, "rule m applies only to theorems, not to hypothesis-derived lines"))
                        elif not isinstance(a.formula, Implies) or not isinstance(b.formula, Implies):
                            errors.append((n, "rule m needs two implications"))
                        elif rule_m(a.formula, b.formula) != line.formula:
                            errors.append((n, f"expected {render(rule_m(a.formula, b.formula))}"))
        flags.append(flag)
        valid.append(len(errors) == nerr)
    return CheckReport(errors, flags, p.conclusion)


# -- files ---------------------------------------------------------------------

def proof_from_json(data: dict) -> Proof:
    try:
        logic = LogicMode.parse(data.get("logic", "r"))
        hyps = [parse(h) for h in data.get("hypotheses", [])]
        lines = []
        for item in data["lines"]:
            lines.append(
                ProofLine(
                    parse(item["formula"]),
                    item["rule"],
                    tuple(int(r) for r in item.get("refs", [])),
                    {k: parse(v) for k, v in item.get("bindings", {}).items()},
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ProofFormatError(f"malformed proof: {exc}") from None
    return Proof(logic, hyps, lines)


def proof_to_json(p: Proof) -> dict:
    out_lines = []
    for line in p.lines:
        item = {"formula": render(line.formula), "rule": line.rule}
        if line.refs:
            item["refs"] = list(line.refs)
        if line.bindings:
            item["bindings"] = {k: render(v) for k, v in sorted(line.bindings.items())}
        out_lines.append(item)
    return {"logic": LogicMode.parse(p.logic).value, "hypotheses": [render(h) for h in p.hypotheses], "lines": out_lines}


def load_proof(path: str | Path) -> Proof:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProofFormatError(f"malformed proof file {path}: {exc}") from None
    return proof_from_json(data)


def save_proof(p: Proof, path: str | Path) -> None:
    Path(path).write_text(json.dumps(proof_to_json(p), indent=2) + "\n")


def library_proof(name: str) -> Proof:
    """A proof shipped with the package, e.g. ``lemma1`` or ``lemma2``."""
    return load_proof(library_path(name))


def library_path(name: str) -> Path:
    path = PROOF_DIR / f"{name}.proof"
    if not path.is_file():
        raise FileNotFoundError(f"no library proof named {name!r}")
    return path


# -- random proofs -------------------------------------------------------------

class ProofBuilder:
    """Append-only proof assembly that tracks theorem flags."""

    def __init__(self, logic: LogicMode | str = LogicMode.R, hypotheses: Sequence[Formula] = ()):
        self.proof = Proof(LogicMode.parse(logic), list(hypotheses), [])
        self.flags: list[bool] = []

    def _add(self, line: ProofLine, flag: bool) -> int:
        self.proof.lines.append(line)
        self.flags.append(flag)
        return len(self.proof.lines) - 1

    def formula(self, i: int) -> Formula:
        return self.proof.lines[i].formula

    def hyp(self, k: int) -> int:
        return self._add(ProofLine(self.proof.hypotheses[k], "hyp", (k,)), False)

    def classical(self, phi: Formula) -> int:
        return self._add(ProofLine(phi, "classical"), True)

    def axiom(self, schema: str, **bindings: Formula) -> int:
        return self._add(ProofLine(instantiate_axiom(schema, bindings), schema, (), bindings), True)

    def mp(self, i: int, j: int) -> int:
        target = self.formula(j)
        assert isinstance(target, Implies) and target.lhs == self.formula(i)
        return self._add(ProofLine(target.rhs, "mp", (i, j)), self.flags[i] and self.flags[j])

    def m(self, i: int, j: int) -> int:
        return self._add(ProofLine(rule_m(self.formula(i), self.formula(j)), "m", (i, j)), True)


def _rhd_count(phi: Formula) -> int:
    return sum(1 for s in subformulas(phi) if isinstance(s, Rhd))


def random_proof(
    seed: int,
    logic: LogicMode | str = LogicMode.R,
    steps: int = 12,
    names: Sequence[str] = ("p", "q"),
    max_rhd: int = 5,
    max_size: int = 40,
    hypotheses: Sequence[Formula] = (),
) -> Proof:
    """A proof assembled by random rule applications.

    Every line is correct by construction; ``max_rhd`` bounds the number of
    distinct ``|>``-subformulas per line so the conclusions stay decidable
    quickly.  With ``hypotheses`` some lines cite them, and rule ``m`` is
    only applied to hypothesis-free lines.
    """
    from .formula import size

    rng = random.Random(seed)
    logic = LogicMode.parse(logic)
    b = ProofBuilder(logic, hypotheses)
    atoms = [Var(n) for n in names]
    small = atoms + [BOT, TOP] + [Not(a) for a in atoms]

    def pick():
        lines = [b.formula(i) for i in range(len(b.proof.lines))]
        pool = small + [f for f in lines if _rhd_count(f) <= 2 and size(f) <= 12]
        x = rng.choice(pool)
        if rng.random() < 0.25:
            x = rng.choice([And, Or, Implies, Rhd])(x, rng.choice(small))
        return x

    def ok(phi):
        return _rhd_count(phi) <= max_rhd and size(phi) <= max_size

    schemas = ["ax1", "ax2", "ax3"] + (["ax4"] if logic.deterministic else [])
    attempts = 0
    while len(b.proof.lines) < steps and attempts < 50 * steps:
        attempts += 1
        n = len(b.proof.lines)
        mp_pairs = [
            (i, j)
            for j in range(n)
            for i in range(n)
            if isinstance(b.formula(j), Implies) and b.formula(j).lhs == b.formula(i)
            and not any(line.formula == b.formula(j).rhs for line in b.proof.lines)
        ]
        choice = rng.random()
        if hypotheses and rng.random() < 0.15:
            b.hyp(rng.randrange(len(hypotheses)))
        elif mp_pairs and choice < 0.35:
            b.mp(*rng.choice(mp_pairs))
        elif choice < 0.6:
            schema = rng.choice(schemas)
            binds = {v: pick() for v in _METAVARS[schema]}
            if ok(instantiate_axiom(schema, binds)):
                b.axiom(schema, **binds)
        elif choice < 0.8:
            a, c = pick(), pick()
            existing = [b.formula(i) for i in range(n)]
            if existing and rng.random() < 0.6:
                a = rng.choice(existing)
            phi = rng.choice([
                Implies(a, Implies(c, a)),
                Implies(a, a),
                Implies(And(a, c), a),
                Implies(a, Or(a, c)),
                Implies(a, Implies(c, And(a, c))),
                Implies(Not(Not(a)), a),
            ])
            if ok(phi):
                b.classical(phi)
        else:
            imps = [i for i in range(n) if isinstance(b.formula(i), Implies) and b.flags[i]]
            if imps:
                i, j = rng.choice(imps), rng.choice(imps)
                if ok(rule_m(b.formula(i), b.formula(j))):
                    b.m(i, j)
    return b.proof
