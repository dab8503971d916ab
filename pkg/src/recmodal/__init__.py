"""Modal logic of (non)deterministic partial recursive functions.

The binary modality ``a |> b`` holds of a program code when the program maps
some (or, in the universal reading, every) output on inputs satisfying ``a``
into ``b``.
"""

from .decide import LogicMode, Refuted, Valid, decide, is_valid
from .formula import BOT, TOP, And, Formula, Implies, Not, Or, Rhd, Var, closure, parse, render
from .kripke import KripkeModel, forces, is_deterministic

__version__ = "0.1.0"

__all__ = [
    "BOT",
    "TOP",
    "And",
    "Formula",
    "Implies",
    "KripkeModel",
    "LogicMode",
    "Not",
    "Or",
    "Refuted",
    "Rhd",
    "Valid",
    "Var",
    "closure",
    "decide",
    "forces",
    "is_deterministic",
    "is_valid",
    "parse",
    "render",
]
