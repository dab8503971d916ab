"""S-expressions: the shared universe of data, program codes and outputs.

An atom is a Python ``str``; a pair is a 2-tuple ``(car, cdr)``.  Lists end
in the atom ``nil``.
"""

from __future__ import annotations

import random
import re
from typing import Iterable, Union

Expr = Union[str, tuple]

NIL = "nil"
T = "t"

_ATOM = re.compile(r"[^\s().']+")


class SexprSyntaxError(ValueError):
    pass


def cons(a: Expr, b: Expr) -> Expr:
    return (a, b)


def lst(*items: Expr) -> Expr:
    out: Expr = NIL
    for item in reversed(items):
        out = (item, out)
    return out


def quote(x: Expr) -> Expr:
    return lst("quote", x)


def is_atom(x: Expr) -> bool:
    return isinstance(x, str)


def to_pylist(x: Expr) -> list[Expr] | None:
    """Elements of a proper list, or None for atoms other than ``nil`` and for
    improper lists."""
    out = []
    while isinstance(x, tuple):
        out.append(x[0])
        x = x[1]
    return out if x == NIL else None


def from_pylist(items: Iterable[Expr]) -> Expr:
    return lst(*items)


def size(x: Expr) -> int:
    n = 0
    stack = [x]
    while stack:
        y = stack.pop()
        n += 1
        if isinstance(y, tuple):
            stack.extend(y)
    return n


def contains_atom(x: Expr, atom: str) -> bool:
    stack = [x]
    while stack:
        y = stack.pop()
        if isinstance(y, tuple):
            stack.extend(y)
        elif y == atom:
            return True
    return False


def render(x: Expr) -> str:
    parts: list[str] = []
    _render(x, parts)
    return "".join(parts)


def _render(x: Expr, out: list[str]) -> None:
    # explicit stack; codes nest deeply enough to hit the recursion limit
    stack: list = [x]
    while stack:
        item = stack.pop()
        if isinstance(item, _Lit):
            out.append(item.text)
            continue
        if isinstance(item, str):
            out.append(item)
            continue
        out.append("(")
        tail_items = []
        y = item
        first = True
        while isinstance(y, tuple):
            if not first:
                tail_items.append(_Lit(" "))
            tail_items.append(y[0])
            first = False
            y = y[1]
        if y != NIL:
            tail_items.append(_Lit(" . "))
            tail_items.append(y)
        tail_items.append(_Lit(")"))
        stack.extend(reversed(tail_items))


class _Lit:
    __slots__ = ("text",)

    def __init__(self, text):
        self.text = text


def parse(text: str) -> Expr:
    tokens = re.findall(r"\(|\)|\.(?=[\s()])|\.$|'|" + _ATOM.pattern, text)
    check = re.sub(r"\s+", "", text)
    if "".join(tokens) != check:
        raise SexprSyntaxError(f"unexpected characters in {text!r}")
    if not tokens:
        raise SexprSyntaxError("unexpected end of input")
    # explicit stack of open lists: [items, dotted tail or None, quote marks]
    stack: list[list] = []
    quotes = 0
    result = None
    pos = 0

    def emit(x):
        nonlocal quotes, result
        for _ in range(quotes):
            x = quote(x)
        quotes = 0
        if not stack:
            result = x
            return
        frame = stack[-1]
        if frame[1] is _DOT:
            frame[1] = x
        elif frame[1] is not None:
            raise SexprSyntaxError("expected ')' after dotted tail")
        else:
            frame[0].append(x)

    while pos < len(tokens):
        if result is not None:
            raise SexprSyntaxError(f"trailing input after position {pos}")
        tok = tokens[pos]
        pos += 1
        if tok == "'":
            quotes += 1
        elif tok == "(":
            stack.append([[], None, quotes])
            quotes = 0
        elif tok == ")":
            if not stack:
                raise SexprSyntaxError("unbalanced ')'")
            if quotes or stack[-1][1] is _DOT:
                raise SexprSyntaxError("unexpected ')'")
            items, tail, quotes = stack.pop()
            out = NIL if tail is None else tail
            for item in reversed(items):
                out = (item, out)
            emit(out)
        elif tok == ".":
            if not stack or not stack[-1][0] or stack[-1][1] is not None or quotes:
                raise SexprSyntaxError("misplaced '.'")
            stack[-1][1] = _DOT
        else:
            emit(tok)
    if stack or quotes:
        raise SexprSyntaxError("unexpected end of input")
    return result


_DOT = object()


ATOMS = ("a", "b", "c", "nil", "t")


def random_sexpr(rng: random.Random, depth: int = 3, atoms: tuple[str, ...] = ATOMS) -> Expr:
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(atoms)
    return (random_sexpr(rng, depth - 1, atoms), random_sexpr(rng, depth - 1, atoms))
