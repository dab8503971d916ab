"""The n-ary recursion theorem, constructively.

Given total transformers ``f[0] .. f[n-1]`` (programs taking the list of all
codes and returning a code), build codes ``code[0] .. code[n-1]`` such that
``code[i]`` and ``f[i](code)`` compute the same nondeterministic function.

Construction, for a list of programs ``ws``:

    gen(i, ws)  = (apply (apply (quote ws[i]) (quote ws)) input)
    maker[i]    = program taking ws to f[i](gen(0, ws) .. gen(n-1, ws))
    code[i]     = gen(i, makers)

Running ``code[i]`` first runs ``maker[i]`` on the list of makers, which
yields ``f[i](code)``, and then runs that code on the argument.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .machine import DEFAULT_BUDGET, EvalError, EvalResult, eval_program
from .sexpr import NIL, Expr, lst, quote, random_sexpr, render


class TransformerError(Exception):
    """A transformer did not return exactly one code within budget."""


@dataclass(frozen=True)
class Hole:
    """Placeholder in a code template: argument ``index`` (0-based), or the
    whole argument list when ``index`` is None."""

    index: int | None = None


ALL = Hole(None)


def fill(template, args: Sequence[Expr]) -> Expr:
    """Host-level instantiation of a template."""
    if isinstance(template, Hole):
        return lst(*args) if template.index is None else args[template.index]
    if isinstance(template, tuple):
        return (fill(template[0], args), fill(template[1], args))
    return template


def _has_hole(template) -> bool:
    if isinstance(template, Hole):
        return True
    if isinstance(template, tuple):
        return _has_hole(template[0]) or _has_hole(template[1])
    return False


def arg_expr(index: int) -> Expr:
    """Program fragment selecting argument ``index`` from the input list."""
    e: Expr = "input"
    for _ in range(index):
        e = lst("tail", e)
    return lst("head", e)


def quasi(template) -> Expr:
    """Compile a template into a program that builds it from the input list."""
    if isinstance(template, Hole):
        return "input" if template.index is None else arg_expr(template.index)
    if not _has_hole(template):
        return quote(template)
    return lst("cons", quasi(template[0]), quasi(template[1]))


@dataclass(frozen=True)
class Transformer:
    """A total map from ``n`` codes to a code, as an object-language program
    (run on the list of codes) and optionally as a host-level builder."""

    program: Expr
    host: Callable[[Sequence[Expr]], Expr] | None = field(default=None, compare=False)
    name: str = ""

    @classmethod
    def from_template(cls, template, name: str = "") -> Transformer:
        return cls(quasi(template), lambda args: fill(template, args), name)

    def apply(self, codes: Sequence[Expr], budget: int = DEFAULT_BUDGET) -> Expr:
        try:
            res = eval_program(self.program, lst(*codes), budget, mode="det")
        except EvalError as exc:
            raise TransformerError(f"transformer {self.name or render(self.program)} failed: {exc}") from None
        if not res.conclusive or len(res.values) != 1:
            raise TransformerError(f"transformer {self.name or render(self.program)} is not total on the probed codes")
        (out,) = res.values
        if self.host is not None and self.host(codes) != out:
            raise TransformerError(f"host builder and program of {self.name!r} disagree")
        return out


def g_code(x: Expr, xs: Expr) -> Expr:
    return lst("apply", lst("apply", quote(x), quote(xs)), "input")


def g_template(j: int):
    return lst("apply", lst("apply", lst("quote", Hole(j)), lst("quote", ALL)), "input")


def h_program(i: int, transformers: Sequence[Transformer]) -> Expr:
    """The maker program for index ``i``: build every generator over its input
    list and pass them to transformer ``i``.  The leading tag keeps makers
    distinct even when two transformers coincide."""
    n = len(transformers)
    codes: Expr = quote(NIL)
    for j in reversed(range(n)):
        codes = lst("cons", quasi(g_template(j)), codes)
    body = lst("apply", quote(transformers[i].program), codes)
    return lst("tail", lst("cons", quote(lst("h", str(i))), body))


@dataclass(frozen=True)
class KleeneSystem:
    transformers: tuple[Transformer, ...]
    programs: tuple[Expr, ...]    # the maker programs
    codes: tuple[Expr, ...]       # the fixed points
    images: tuple[Expr, ...]      # each transformer applied to all codes


def kleene_system(transformers: Sequence[Transformer], budget: int = DEFAULT_BUDGET) -> KleeneSystem:
    if not transformers:
        raise ValueError("need at least one transformer")
    transformers = tuple(transformers)
    ws = tuple(h_program(i, transformers) for i in range(len(transformers)))
    ws_list = lst(*ws)
    us = tuple(g_code(w, ws_list) for w in ws)
    images = tuple(t.apply(us, budget) for t in transformers)
    return KleeneSystem(transformers, ws, us, images)


def fixed_points(transformers: Sequence[Transformer], budget: int = DEFAULT_BUDGET) -> list[Expr]:
    return list(kleene_system(transformers, budget).codes)


@dataclass(frozen=True)
class Mismatch:
    index: int
    arg: Expr
    lhs: EvalResult
    rhs: EvalResult


def check_fixed_points(
    system: KleeneSystem,
    inputs: Sequence[Expr] = (),
    n_random: int = 20,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> tuple[list[Mismatch], int]:
    """Compare each code with its transformer's image on every code, ``inputs`` and random
    data.  Returns the mismatches and the number of budget exhaustions."""
    rng = random.Random(seed)
    probes = list(system.codes) + list(inputs) + [random_sexpr(rng) for _ in range(n_random)]
    bad = []
    exhausted = 0
    for i, (u, image) in enumerate(zip(system.codes, system.images)):
        for x in probes:
            a = eval_program(u, x, budget)
            b = eval_program(image, x, budget)
            exhausted += a.budget_exhausted + b.budget_exhausted
            if not a.same_outcome(b):
                bad.append(Mismatch(i, x, a, b))
    return bad, exhausted
