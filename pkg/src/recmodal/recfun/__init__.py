"""Program codes over s-expressions: evaluation, the recursion theorem and
realization of Kripke models."""

from .kleene import Hole, KleeneSystem, Transformer, TransformerError, check_fixed_points, fixed_points, kleene_system
from .machine import DEFAULT_BUDGET, EvalResult, StuckError, eval_program
from .realize import (
    RealizationBundle,
    RealizationError,
    check_shape,
    load_bundle,
    membership,
    realize,
    save_bundle,
    verify_realization,
)
from .sexpr import Expr, lst, parse, quote, render

__all__ = [
    "DEFAULT_BUDGET",
    "EvalResult",
    "Expr",
    "Hole",
    "KleeneSystem",
    "RealizationBundle",
    "RealizationError",
    "StuckError",
    "Transformer",
    "TransformerError",
    "check_fixed_points",
    "check_shape",
    "eval_program",
    "fixed_points",
    "kleene_system",
    "load_bundle",
    "lst",
    "membership",
    "parse",
    "quote",
    "realize",
    "render",
    "save_bundle",
    "verify_realization",
]
