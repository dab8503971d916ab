"""Budgeted nondeterministic evaluator for the toy quoting language.

Program forms (``x`` is the single argument)::

    input                 the argument
    nil, t                self-evaluating literals
    diverge               never returns
    (quote e)             e, unevaluated
    (if c a b)            b when c evaluates to nil, else a
    (eq a b)              t or nil, structural equality
    (cons a b) (head a) (tail a)
    (amb a b)             either a or b
    (apply c a)           run the code that c evaluates to on the value of a

Evaluation is a CEK-style machine.  ``amb`` forks the machine; branches are
explored breadth-first, each with its own step budget.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .sexpr import NIL, T, Expr, render

DEFAULT_BUDGET = 10_000
MAX_BRANCHES = 256


class EvalError(Exception):
    pass


class StuckError(EvalError):
    """The program is malformed or applied a primitive to the wrong shape."""


class NondeterminismError(EvalError):
    """``amb`` reached in deterministic mode."""


@dataclass(frozen=True)
class EvalResult:
    values: frozenset
    budget_exhausted: bool = False
    definitely_divergent: bool = False
    branch_overflow: bool = False
    steps: int = 0

    @property
    def conclusive(self) -> bool:
        """No branch was cut short, so ``values`` is the complete value set."""
        return not (self.budget_exhausted or self.branch_overflow)

    def same_outcome(self, other: EvalResult) -> bool:
        return (
            self.values == other.values
            and self.budget_exhausted == other.budget_exhausted
            and self.branch_overflow == other.branch_overflow
        )


_ARITY = {"quote": 1, "if": 3, "eq": 2, "cons": 2, "head": 1, "tail": 1, "amb": 2, "apply": 2}


def _args(form: Expr, op: str) -> list[Expr]:
    out = []
    x = form[1]
    while isinstance(x, tuple):
        out.append(x[0])
        x = x[1]
    if x != NIL or len(out) != _ARITY[op]:
        raise StuckError(f"malformed ({op} ...) form: {render(form)}")
    return out


def eval_program(
    code: Expr,
    arg: Expr,
    budget: int = DEFAULT_BUDGET,
    mode: str = "nondet",
    max_branches: int = MAX_BRANCHES,
    order: str = "bfs",
    seed: int = 0,
) -> EvalResult:
    """Run ``code`` on ``arg``; collect every value reachable within budget.

    ``order`` picks the exploration order of pending branches (``bfs``,
    ``dfs`` or ``random``); the result never depends on it.
    """
    if mode not in ("det", "nondet"):
        raise ValueError(f"unknown mode {mode!r}")
    det = mode == "det"
    rng = random.Random(seed)
    values = set()
    exhausted = False
    overflow = False
    diverged_only = True
    branches = 1
    total_steps = 0
    # a state is (expr_or_value, input, kont, steps, returning)
    pending = deque([(code, arg, None, 0, False)])
    while pending:
        if order == "dfs":
            state = pending.pop()
        elif order == "random":
            k = rng.randrange(len(pending))
            pending.rotate(-k)
            state = pending.popleft()
        else:
            state = pending.popleft()
        c, inp, kont, steps, returning = state
        while True:
            if steps >= budget:
                exhausted = True
                diverged_only = False
                break
            steps += 1
            total_steps += 1
            if returning:
                if kont is None:
                    values.add(c)
                    diverged_only = False
                    break
                frame, kont = kont
                tag = frame[0]
                if tag == "if":
                    c, inp, returning = (frame[2] if c == NIL else frame[1]), frame[3], False
                elif tag == "eq1":
                    kont = (("eq2", c), kont)
                    c, inp, returning = frame[1], frame[2], False
                elif tag == "eq2":
                    c = T if frame[1] == c else NIL
                elif tag == "cons1":
                    kont = (("cons2", c), kont)
                    c, inp, returning = frame[1], frame[2], False
                elif tag == "cons2":
                    c = (frame[1], c)
                elif tag == "head":
                    if not isinstance(c, tuple):
                        raise StuckError(f"head of atom {c}")
                    c = c[0]
                elif tag == "tail":
                    if not isinstance(c, tuple):
                        raise StuckError(f"tail of atom {c}")
                    c = c[1]
                elif tag == "app1":
                    kont = (("app2", c), kont)
                    c, inp, returning = frame[1], frame[2], False
                else:  # app2: c is the argument, frame[1] the code
                    c, inp, returning = frame[1], c, False
                continue
            # evaluating expression c under input inp
            if isinstance(c, str):
                if c == "input":
                    c, returning = inp, True
                elif c == NIL or c == T:
                    returning = True
                elif c == "diverge":
                    break
                else:
                    raise StuckError(f"unbound atom {c}")
                continue
            op = c[0]
            if not isinstance(op, str) or op not in _ARITY:
                raise StuckError(f"unknown form {render(c)}")
            args = _args(c, op)
            if op == "quote":
                c, returning = args[0], True
            elif op == "if":
                kont = (("if", args[1], args[2], inp), kont)
                c = args[0]
            elif op == "eq":
                kont = (("eq1", args[1], inp), kont)
                c = args[0]
            elif op == "cons":
                kont = (("cons1", args[1], inp), kont)
                c = args[0]
            elif op == "head" or op == "tail":
                kont = ((op,), kont)
                c = args[0]
            elif op == "apply":
                kont = (("app1", args[1], inp), kont)
                c = args[0]
            else:  # amb
                if det:
                    raise NondeterminismError(f"amb in deterministic mode: {render(c)}")
                if branches >= max_branches:
                    overflow = True
                    diverged_only = False
                    c = args[0]
                    continue
                branches += 1
                pending.append((args[1], inp, kont, steps, False))
                c = args[0]
    return EvalResult(
        values=frozenset(values),
        budget_exhausted=exhausted,
        definitely_divergent=diverged_only and not values,
        branch_overflow=overflow,
        steps=total_steps,
    )
