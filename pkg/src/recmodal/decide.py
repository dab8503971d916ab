"""Validity in the logics of nondeterministic (``R``) and deterministic
(``Rd``) partial recursive functions, by elimination of Hintikka types.

A world type is a propositionally coherent subset of the closure set, stored
as an int bitset over closure positions.  Types whose refuted ``|>``-members
cannot be witnessed by surviving types are removed until nothing changes.
Every refutation comes with an explicit countermodel that is re-checked with
:func:`recmodal.kripke.forces` before it is returned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .formula import (
    Bottom,
    ClosureSet,
    Formula,
    Implies,
    Rhd,
    Var,
    closure,
    render,
    sim_neg,
)
from .kripke import KripkeModel, extensions, forces, is_deterministic, model_from_json, model_to_json


class LogicMode(enum.Enum):
    R = "r"
    RD = "rd"
    RFORALL = "rforall"

    @property
    def deterministic(self) -> bool:
        return self is not LogicMode.R

    @classmethod
    def parse(cls, text: str | LogicMode) -> LogicMode:
        if isinstance(text, LogicMode):
            return text
        return cls(text.lower())


class VerificationError(RuntimeError):
    """A countermodel failed the model checker; always an implementation bug."""


@dataclass(frozen=True)
class Valid:
    mode: LogicMode

    @property
    def valid(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"verdict": "valid"}


@dataclass(frozen=True)
class Refuted:
    mode: LogicMode
    model: KripkeModel
    world: str

    @property
    def valid(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"verdict": "refuted", "model": model_to_json(self.model), "world": self.world}


Verdict = Valid | Refuted


def verdict_from_json(data: dict, mode: LogicMode = LogicMode.R) -> Verdict:
    if data.get("verdict") == "valid":
        return Valid(mode)
    if data.get("verdict") == "refuted":
        return Refuted(mode, model_from_json(data["model"]), data["world"])
    raise ValueError(f"unknown verdict {data.get('verdict')!r}")


# -- types ------------------------------------------------------------------

class TypeSpace:
    """Index structures over a closure set shared by the elimination steps."""

    def __init__(self, c: ClosureSet):
        self.closure = c
        idx = c.index
        self.atoms = [i for i, phi in enumerate(c.formulas) if isinstance(phi, (Var, Rhd))]
        # (position, lhs position, rhs position) of every |>-member
        self.rhds = [
            (i, idx[phi.lhs], idx[phi.rhs])
            for i, phi in enumerate(c.formulas)
            if isinstance(phi, Rhd)
        ]
        self.bottom = idx[c.formulas[0]] if isinstance(c.formulas[0], Bottom) else None

    def member(self, t: int, phi: Formula) -> bool:
        return bool((t >> self.closure.index[phi]) & 1)

    def formulas(self, t: int) -> list[Formula]:
        return [phi for i, phi in enumerate(self.closure.formulas) if (t >> i) & 1]


def hintikka_types(c: ClosureSet) -> list[int]:
    """All coherent subsets of ``c``, one per truth assignment to its atoms.

    The result is in canonical order: the assignment counter runs over atoms in
    closure order, lowest position as the least significant digit.
    """
    formulas = c.formulas
    idx = c.index
    atoms = [i for i, phi in enumerate(formulas) if isinstance(phi, (Var, Rhd))]
    # formulas are sorted by size, so operands are always decided first
    plan = []
    for i, phi in enumerate(formulas):
        if isinstance(phi, Implies):
            plan.append((i, idx[phi.lhs], idx[phi.rhs]))
    out = []
    for assignment in range(1 << len(atoms)):
        t = 0
        for k, pos in enumerate(atoms):
            if (assignment >> k) & 1:
                t |= 1 << pos
        for i, a, b in plan:
            if not (t >> a) & 1 or (t >> b) & 1:
                t |= 1 << i
        out.append(t)
    return out


def check_type(c: ClosureSet, t: int) -> bool:
    """Direct check of the world-type conditions (used by tests)."""
    for i, phi in enumerate(c.formulas):
        has = bool((t >> i) & 1)
        if isinstance(phi, Bottom) and has:
            return False
        if isinstance(phi, Implies):
            a = bool((t >> c.index[phi.lhs]) & 1)
            b = bool((t >> c.index[phi.rhs]) & 1)
            if has != ((not a) or b):
                return False
        if has == bool((t >> c.index[sim_neg(phi)]) & 1):
            return False
    return True


@dataclass(frozen=True)
class Witness:
    """How one refuted ``|>``-member of a type is realized: a source type and
    the types of its outputs."""

    demand: int
    source: int
    images: tuple[int, ...]


class _Realizer:
    """Answers demand queries against a fixed surviving set ``S``."""

    def __init__(self, space: TypeSpace, S: list[int], mode: LogicMode):
        self.space = space
        self.S = S
        self.det = LogicMode.parse(mode).deterministic
        self._images: dict[tuple[int, int], tuple[int, ...] | None] = {}

    def positives(self, t: int, u: int) -> int:
        """Bitset of right-hand sides of ``a |> b`` in ``t`` with ``a`` in ``u``."""
        need = 0
        for pos, a, b in self.space.rhds:
            if (t >> pos) & 1 and (u >> a) & 1:
                need |= 1 << b
        return need

    def images(self, psi: int, need: int, order: list[int] | None = None) -> tuple[int, ...] | None:
        """Image set avoiding ``psi`` and covering ``need``: an anchor plus at
        most one extra image per needed formula, scanning ``order``."""
        key = (psi, need, None if order is None else tuple(order))
        if key in self._images:
            return self._images[key]
        candidates = [v for v in (self.S if order is None else order) if not (v >> psi) & 1]
        result = None
        if self.det:
            for v in candidates:
                if v & need == need:
                    result = (v,)
                    break
        elif candidates:
            chosen = [candidates[0]]
            covered = candidates[0] & need
            rest = need & ~covered
            while rest:
                bit = rest & -rest
                v = next((v for v in candidates if v & bit), None)
                if v is None:
                    chosen = None
                    break
                if v not in chosen:
                    chosen.append(v)
                covered |= v & need
                rest = need & ~covered
            result = tuple(chosen) if chosen is not None else None
        self._images[key] = result
        return result

    def witness(self, t: int, demand: tuple[int, int, int], order: list[int] | None = None) -> Witness | None:
        """First ``(source, images)`` pair for ``demand``, scanning types in
        ``order`` (canonical order by default)."""
        pos, a, b = demand
        for u in self.S if order is None else order:
            if not (u >> a) & 1:
                continue
            imgs = self.images(b, self.positives(t, u), order)
            if imgs is not None:
                return Witness(pos, u, imgs)
        return None

    def demands(self, t: int):
        return [d for d in self.space.rhds if not (t >> d[0]) & 1]

    def realizable(self, t: int) -> bool:
        return all(self.witness(t, d) is not None for d in self.demands(t))


def demands_realizable(space: TypeSpace, t: int, S: Iterable[int], mode: LogicMode) -> bool:
    return _Realizer(space, list(S), mode).realizable(t)


def eliminate(space: TypeSpace, types: Iterable[int], mode: LogicMode) -> list[int]:
    """Greatest subset of ``types`` in which every member's demands are met."""
    S = list(types)
    while True:
        realizer = _Realizer(space, S, mode)
        keep = [t for t in S if realizer.realizable(t)]
        if len(keep) == len(S):
            return S
        S = keep


# -- countermodels ------------------------------------------------------------

def build_countermodel(
    space: TypeSpace, S: list[int], witness: int, mode: LogicMode
) -> tuple[KripkeModel, str]:
    """Finite model in which every world forces exactly the members of its
    type (checked by :func:`truth_lemma_holds`)."""
    model, root, _ = countermodel_with_types(space, S, witness, mode)
    return model, root


def countermodel_with_types(space: TypeSpace, S: list[int], witness: int, mode: LogicMode):
    """Build the countermodel and also return the type of every world.

    There is one base world ``t<k>`` per needed type ``S[k]``.  Under program
    ``x`` each refuted ``|>``-member needs its own source world: the base world
    of the chosen source type when ``x`` does not use it yet, else a copy
    ``s<k>_<d>`` tagged by the program's type and the demand.  Only these
    sources have outputs under ``x``, so demands never interfere.

    Witnesses are chosen to keep the model small: types already in the model
    come first, then types with fewer refuted ``|>``-members, then canonical
    order.
    """
    realizer = _Realizer(space, S, mode)
    pos_of = {t: k for k, t in enumerate(S)}
    type_of: dict[str, int] = {}
    triples: set[tuple[str, str, str]] = set()
    plans: dict[int, list[Witness]] = {}

    def base(t: int) -> str:
        return f"t{pos_of[t]}"

    def preference() -> list[int]:
        present = [type_of[w] for w in order if w.startswith("t")]
        rest = sorted((t for t in S if t not in present), key=lambda t: (len(realizer.demands(t)), pos_of[t]))
        return present + rest

    def plan(t: int) -> list[Witness]:
        if t not in plans:
            found = []
            for d in realizer.demands(t):
                wit = realizer.witness(t, d, preference())
                if wit is None:
                    raise VerificationError("type has an unmet demand; set is not an elimination fixpoint")
                found.append(wit)
            plans[t] = found
        return plans[t]

    def sources(t: int) -> list[str]:
        used = set()
        out = []
        for wit in plan(t):
            name = base(wit.source)
            if name in used:
                name = f"s{pos_of[t]}_{wit.demand}"
            used.add(name)
            out.append(name)
        return out

    root = base(witness)
    type_of[root] = witness
    order = [root]
    todo = [root]
    while todo:
        w = todo.pop(0)
        t = type_of[w]
        for wit, src in zip(plan(t), sources(t)):
            targets = [base(v) for v in wit.images]
            for name, ty in [(src, wit.source), *zip(targets, wit.images)]:
                if name not in type_of:
                    type_of[name] = ty
                    order.append(name)
                    todo.append(name)
            triples.update((src, w, v) for v in targets)

    valuation = {}
    for i, phi in enumerate(space.closure.formulas):
        if isinstance(phi, Var):
            valuation[phi.name] = frozenset(w for w in order if (type_of[w] >> i) & 1)
    return KripkeModel(tuple(order), frozenset(triples), valuation), root, type_of


def truth_lemma_holds(space: TypeSpace, m: KripkeModel, type_of: dict[str, int]) -> bool:
    formulas = space.closure.formulas
    ext = {}
    for phi in formulas:
        ext.update(extensions(m, phi))
    for w, t in type_of.items():
        for i, phi in enumerate(formulas):
            if (w in ext[phi]) != bool((t >> i) & 1):
                return False
    return True


def decide(phi0: Formula, mode: LogicMode | str = LogicMode.R) -> Verdict:
    mode = LogicMode.parse(mode)
    c = closure(phi0)
    space = TypeSpace(c)
    S = eliminate(space, hintikka_types(c), mode)
    neg = c.index[sim_neg(phi0)]
    witness = next((t for t in S if (t >> neg) & 1), None)
    if witness is None:
        return Valid(mode)
    model, world = build_countermodel(space, S, witness, mode)
    if forces(model, world, phi0):
        raise VerificationError(f"countermodel does not refute {render(phi0)}")
    if mode.deterministic and not is_deterministic(model):
        raise VerificationError(f"countermodel for {render(phi0)} is not deterministic")
    return Refuted(mode, model, world)


def is_valid(phi0: Formula, mode: LogicMode | str = LogicMode.R) -> bool:
    return decide(phi0, mode).valid
