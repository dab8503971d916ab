"""Formulas of the modal language with ``false``, ``->`` and the binary
modality ``|>``.

Only four shapes are stored: :class:`Var`, :class:`Bottom`, :class:`Implies`
and :class:`Rhd`.  Derived connectives are expanded when built:

    ~a       = a -> false
    true     = false -> false
    a & b    = ~(a -> ~b)
    a | b    = ~a -> b

Concrete syntax, tightest binding first: ``~``, ``&``, ``|``, ``|>``, ``->``.
``&`` and ``|`` associate to the left, ``->`` to the right and ``|>`` does not
associate (nested ``|>`` needs parentheses).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator


@dataclass(frozen=True, slots=True)
class Formula:
    _hash: int = field(init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)

    # operator sugar; keeps test and library code short
    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def rhd(self, other: Formula) -> Formula:
        return Rhd(self, other)


@dataclass(frozen=True, slots=True, repr=False)
class Var(Formula):
    name: str

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("var", self.name)))

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Bottom(Formula):
    def __post_init__(self):
        object.__setattr__(self, "_hash", hash("bottom"))

    def __repr__(self):
        return "Bottom()"


@dataclass(frozen=True, slots=True, repr=False)
class Implies(Formula):
    lhs: Formula
    rhs: Formula

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("->", self.lhs._hash, self.rhs._hash)))

    def __repr__(self):
        return f"Implies({self.lhs!r}, {self.rhs!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Rhd(Formula):
    lhs: Formula
    rhs: Formula

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("|>", self.lhs._hash, self.rhs._hash)))

    def __repr__(self):
        return f"Rhd({self.lhs!r}, {self.rhs!r})"


BOT = Bottom()
TOP = Implies(BOT, BOT)


def Not(phi: Formula) -> Formula:
    return Implies(phi, BOT)


def And(phi: Formula, psi: Formula) -> Formula:
    return Not(Implies(phi, Not(psi)))


def Or(phi: Formula, psi: Formula) -> Formula:
    return Implies(Not(phi), psi)


def Iff(phi: Formula, psi: Formula) -> Formula:
    return And(Implies(phi, psi), Implies(psi, phi))


def variables(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n) for n in names)


def is_negation(phi: Formula) -> bool:
    return isinstance(phi, Implies) and isinstance(phi.rhs, Bottom)


def sim_neg(phi: Formula) -> Formula:
    """Strip one outer negation if ``phi`` is syntactically ``~x``, else add one."""
    if is_negation(phi):
        return phi.lhs
    return Not(phi)


# -- ordering, traversal ------------------------------------------------------

def size(phi: Formula) -> int:
    match phi:
        case Implies(a, b) | Rhd(a, b):
            return 1 + size(a) + size(b)
        case _:
            return 1


def depth(phi: Formula) -> int:
    match phi:
        case Implies(a, b) | Rhd(a, b):
            return 1 + max(depth(a), depth(b))
        case _:
            return 0


def modal_depth(phi: Formula) -> int:
    match phi:
        case Implies(a, b):
            return max(modal_depth(a), modal_depth(b))
        case Rhd(a, b):
            return 1 + max(modal_depth(a), modal_depth(b))
        case _:
            return 0


def sort_key(phi: Formula) -> tuple[int, str]:
    """Fixed total order: by size, then by canonical text."""
    return (size(phi), render(phi))


def iter_subformulas(phi: Formula) -> Iterator[Formula]:
    """Post-order walk; children come before parents, duplicates included."""
    match phi:
        case Implies(a, b) | Rhd(a, b):
            yield from iter_subformulas(a)
            yield from iter_subformulas(b)
    yield phi


def subformulas(phi: Formula) -> frozenset[Formula]:
    return frozenset(iter_subformulas(phi))


def subformula_list(phi: Formula) -> list[Formula]:
    """Distinct subformulas in post-order (every child precedes its parent)."""
    seen: dict[Formula, None] = {}
    for sub in iter_subformulas(phi):
        seen.setdefault(sub, None)
    return list(seen)


def var_names(phi: Formula) -> list[str]:
    return sorted({s.name for s in iter_subformulas(phi) if isinstance(s, Var)})


def big_and(gamma: Iterable[Formula]) -> Formula:
    """Conjunction of a finite set, folded right over :func:`sort_key`; empty is ``true``."""
    items = sorted(set(gamma), key=sort_key)
    if not items:
        return TOP
    out = items[-1]
    for phi in reversed(items[:-1]):
        out = And(phi, out)
    return out


def substitute(phi: Formula, mapping: dict[str, Formula]) -> Formula:
    match phi:
        case Var(name):
            return mapping.get(name, phi)
        case Implies(a, b):
            return Implies(substitute(a, mapping), substitute(b, mapping))
        case Rhd(a, b):
            return Rhd(substitute(a, mapping), substitute(b, mapping))
        case _:
            return phi


# -- closure ------------------------------------------------------------------

class ClosureSet:
    """Least set containing a seed formula that is closed under subformulas
    and :func:`sim_neg`.

    Members are ordered by :func:`sort_key`, so every subformula of a member
    sits at a smaller position.
    """

    def __init__(self, formulas: Iterable[Formula], seed: Formula | None = None):
        self.formulas: tuple[Formula, ...] = tuple(sorted(set(formulas), key=sort_key))
        self.index: dict[Formula, int] = {phi: i for i, phi in enumerate(self.formulas)}
        self.seed = seed

    def __len__(self):
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)

    def __contains__(self, phi):
        return phi in self.index

    def __repr__(self):
        return "ClosureSet({" + ", ".join(render(f) for f in self.formulas) + "})"

    def is_closed(self) -> bool:
        for phi in self.formulas:
            if sim_neg(phi) not in self.index:
                return False
            if any(s not in self.index for s in iter_subformulas(phi)):
                return False
        return True

    def rhd_members(self) -> list[Formula]:
        return [phi for phi in self.formulas if isinstance(phi, Rhd)]

    def atoms(self) -> list[Formula]:
        """Members whose truth is a free choice: variables and ``|>``-formulas."""
        return [phi for phi in self.formulas if isinstance(phi, (Var, Rhd))]


def closure(phi0: Formula, extra: Iterable[Formula] = ()) -> ClosureSet:
    members: set[Formula] = set()
    todo = [phi0, BOT, *extra]
    while todo:
        phi = todo.pop()
        if phi in members:
            continue
        members.add(phi)
        match phi:
            case Implies(a, b) | Rhd(a, b):
                todo.append(a)
                todo.append(b)
        todo.append(sim_neg(phi))
    return ClosureSet(members, seed=phi0)


# -- propositional tautologies -------------------------------------------------

def modal_atoms(phi: Formula) -> list[Formula]:
    """Maximal subformulas that are variables or ``|>``-formulas, in order of
    first appearance."""
    out: dict[Formula, None] = {}

    def walk(f):
        match f:
            case Var() | Rhd():
                out.setdefault(f, None)
            case Implies(a, b):
                walk(a)
                walk(b)

    walk(phi)
    return list(out)


def truth_table(phi: Formula, atoms: list[Formula]) -> int:
    """Bit-parallel truth table: bit ``r`` of the result is the value of
    ``phi`` in row ``r``, where atom ``k`` takes bit ``k`` of ``r``."""
    rows = 1 << len(atoms)
    full = (1 << rows) - 1
    columns = {}
    for k, atom in enumerate(atoms):
        col = 0
        for r in range(rows):
            if (r >> k) & 1:
                col |= 1 << r
        columns[atom] = col

    memo: dict[Formula, int] = {}

    def ev(f):
        if f in columns:
            return columns[f]
        if f in memo:
            return memo[f]
        match f:
            case Bottom():
                val = 0
            case Implies(a, b):
                val = (~ev(a) | ev(b)) & full
            case _:
                raise ValueError(f"atom {render(f)} not in table")
        memo[f] = val
        return val

    return ev(phi)


def is_prop_tautology(phi: Formula) -> bool:
    atoms = modal_atoms(phi)
    return truth_table(phi, atoms) == (1 << (1 << len(atoms))) - 1


# -- concrete syntax ------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\|>|->|[~&|()])|([A-Za-z_][A-Za-z0-9_]*))")
_KEYWORDS = {"false", "true"}


def tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unknown token {text[pos]!r}", text, pos)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append(("<end>", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self) -> tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        raise FormulaSyntaxError(message, self.text, self.tokens[self.i][1])

    def parse(self) -> Formula:
        phi = self.implication()
        if self.peek() != "<end>":
            self.fail(f"unexpected {self.peek()!r}")
        return phi

    def implication(self) -> Formula:
        lhs = self.rhd()
        if self.peek() == "->":
            self.take()
            return Implies(lhs, self.implication())
        return lhs

    def rhd(self) -> Formula:
        lhs = self.disjunction()
        if self.peek() == "|>":
            self.take()
            rhs = self.disjunction()
            if self.peek() == "|>":
                self.fail("'|>' does not associate; add parentheses")
            return Rhd(lhs, rhs)
        return lhs

    def disjunction(self) -> Formula:
        phi = self.conjunction()
        while self.peek() == "|":
            self.take()
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self) -> Formula:
        phi = self.unary()
        while self.peek() == "&":
            self.take()
            phi = And(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            phi = self.implication()
            if self.peek() != ")":
                self.fail("unbalanced parentheses, expected ')'")
            self.take()
            return phi
        if tok == "false":
            self.take()
            return BOT
        if tok == "true":
            self.take()
            return TOP
        if tok == ")":
            self.fail("unbalanced parentheses, unexpected ')'")
        if tok == "<end>":
            self.fail("unexpected end of input")
        if tok[0].isalpha() or tok[0] == "_":
            self.take()
            return Var(tok)
        self.fail(f"unexpected {tok!r}")


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# precedence levels for the printer; larger binds tighter
_IMP, _RHD, _OR, _AND, _NOT = 1, 2, 3, 4, 5


def _view(phi: Formula):
    """Recognize sugar so the printer can emit the short form."""
    if phi == TOP:
        return ("true",)
    if is_negation(phi):
        inner = phi.lhs
        if isinstance(inner, Implies) and is_negation(inner.rhs) and not isinstance(inner.rhs.lhs, Bottom):
            return ("and", inner.lhs, inner.rhs.lhs)
        return ("not", inner)
    if isinstance(phi, Implies) and is_negation(phi.lhs) and not isinstance(phi.lhs.lhs, Bottom):
        return ("or", phi.lhs.lhs, phi.rhs)
    return None


def render(phi: Formula) -> str:
    """Canonical text with minimal parentheses."""
    text, _ = _render(phi)
    return text


def _wrap(sub: tuple[str, int], need: int) -> str:
    text, level = sub
    return text if level >= need else f"({text})"


def _render(phi: Formula) -> tuple[str, int]:
    match phi:
        case Var(name):
            return name, 9
        case Bottom():
            return "false", 9
    view = _view(phi)
    if view is not None:
        kind = view[0]
        if kind == "true":
            return "true", 9
        if kind == "not":
            return "~" + _wrap(_render(view[1]), _NOT), _NOT
        if kind == "and":
            return f"{_wrap(_render(view[1]), _AND)} & {_wrap(_render(view[2]), _AND + 1)}", _AND
        if kind == "or":
            return f"{_wrap(_render(view[1]), _OR)} | {_wrap(_render(view[2]), _OR + 1)}", _OR
    if isinstance(phi, Rhd):
        return f"{_wrap(_render(phi.lhs), _RHD + 1)} |> {_wrap(_render(phi.rhs), _RHD + 1)}", _RHD
    return f"{_wrap(_render(phi.lhs), _IMP + 1)} -> {_wrap(_render(phi.rhs), _IMP)}", _IMP
