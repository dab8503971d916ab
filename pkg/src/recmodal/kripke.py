"""Finite Kripke models with a ternary computability relation.

A triple ``(u, w, v)`` means program ``w`` run on input ``u`` may output ``v``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .formula import Bottom, Formula, Implies, Rhd, Var, render, subformula_list


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple[str, ...]
    triples: frozenset[tuple[str, str, str]] = frozenset()
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        worlds = tuple(self.worlds)
        if not worlds:
            raise ModelError("a model needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ModelError("duplicate world identifiers")
        known = set(worlds)
        triples = frozenset(tuple(t) for t in self.triples)
        for t in triples:
            if len(t) != 3:
                raise ModelError(f"malformed triple {t!r}")
            for x in t:
                if x not in known:
                    raise ModelError(f"triple {t!r} references unknown world {x!r}")
        valuation = {}
        for var, ws in self.valuation.items():
            ws = frozenset(ws)
            bad = ws - known
            if bad:
                raise ModelError(f"valuation of {var!r} references unknown world {sorted(bad)[0]!r}")
            valuation[var] = ws
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "triples", triples)
        object.__setattr__(self, "valuation", valuation)

    def __hash__(self):
        return hash((self.worlds, self.triples))

    def successors(self, program: str, source: str) -> frozenset[str]:
        return self._index().get((program, source), frozenset())

    def slices(self) -> dict[tuple[str, str], frozenset[str]]:
        """``(program, source) -> targets`` for every pair with a nonempty image."""
        return self._index()

    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            acc: dict[tuple[str, str], set[str]] = {}
            for u, w, v in self.triples:
                acc.setdefault((w, u), set()).add(v)
            idx = {k: frozenset(vs) for k, vs in acc.items()}
            object.__setattr__(self, "_idx", idx)
        return idx


def is_deterministic(m: KripkeModel) -> bool:
    return all(len(vs) <= 1 for vs in m.slices().values())


def extensions(m: KripkeModel, phi: Formula, universal: bool = False) -> dict[Formula, frozenset[str]]:
    """Truth set of every subformula of ``phi``, computed bottom-up.

    With ``universal`` set, ``a |> b`` holds at ``w`` when every output of ``w``
    on an ``a``-input satisfies ``b`` (instead of at least one output).
    """
    worlds = frozenset(m.worlds)
    slices = m.slices()
    ext: dict[Formula, frozenset[str]] = {}
    for sub in subformula_list(phi):
        match sub:
            case Var(name):
                ext[sub] = m.valuation.get(name, frozenset())
            case Bottom():
                ext[sub] = frozenset()
            case Implies(a, b):
                ext[sub] = (worlds - ext[a]) | ext[b]
            case Rhd(a, b):
                src, dst = ext[a], ext[b]
                failing = set()
                for (w, u), vs in slices.items():
                    if u not in src:
                        continue
                    if universal:
                        if not vs <= dst:
                            failing.add(w)
                    elif not (vs & dst):
                        failing.add(w)
                ext[sub] = worlds - failing
    return ext


def forces(m: KripkeModel, w: str, phi: Formula, universal: bool = False) -> bool:
    if w not in m.worlds:
        raise ModelError(f"unknown world {w!r}")
    return w in extensions(m, phi, universal)[phi]


def truth_set(m: KripkeModel, phi: Formula, universal: bool = False) -> frozenset[str]:
    return extensions(m, phi, universal)[phi]


def valid_in_model(m: KripkeModel, phi: Formula, universal: bool = False) -> bool:
    return len(truth_set(m, phi, universal)) == len(m.worlds)


def random_model(
    n_worlds: int,
    density: float,
    vars: Iterable[str],
    seed: int,
    deterministic: bool = False,
    var_density: float = 0.5,
) -> KripkeModel:
    if n_worlds < 1:
        raise ValueError("n_worlds must be at least 1")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = random.Random(seed)
    worlds = tuple(f"w{i}" for i in range(n_worlds))
    triples = set()
    for w in worlds:
        for u in worlds:
            targets = [v for v in worlds if rng.random() < density]
            if deterministic and len(targets) > 1:
                targets = [rng.choice(targets)]
            triples.update((u, w, v) for v in targets)
    valuation = {p: frozenset(w for w in worlds if rng.random() < var_density) for p in vars}
    return KripkeModel(worlds, frozenset(triples), valuation)


# -- files --------------------------------------------------------------------

def model_to_json(m: KripkeModel) -> dict:
    return {
        "worlds": list(m.worlds),
        "triples": [list(t) for t in sorted(m.triples)],
        "valuation": {p: sorted(ws) for p, ws in sorted(m.valuation.items())},
    }


def model_from_json(data: dict) -> KripkeModel:
    if not isinstance(data, dict):
        raise ModelError("model must be a JSON object")
    try:
        worlds = data["worlds"]
        triples = data.get("triples", [])
        valuation = data.get("valuation", {})
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed model: missing {exc}") from None
    if not isinstance(worlds, list) or not all(isinstance(w, str) for w in worlds):
        raise ModelError("'worlds' must be a list of strings")
    if not isinstance(triples, list) or not all(isinstance(t, list) and len(t) == 3 for t in triples):
        raise ModelError("'triples' must be a list of [u, w, v] lists")
    if not isinstance(valuation, dict):
        raise ModelError("'valuation' must map variables to world lists")
    return KripkeModel(tuple(worlds), frozenset(tuple(t) for t in triples), valuation)


def save_model(m: KripkeModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_json(m), indent=2) + "\n")


def load_model(path: str | Path) -> KripkeModel:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed model file {path}: {exc}") from None
    return model_from_json(data)


def describe(m: KripkeModel, phi: Formula | None = None) -> str:
    lines = [f"worlds: {' '.join(m.worlds)}"]
    for (w, u), vs in sorted(m.slices().items()):
        lines.append(f"  {u} ->_{w} {{{', '.join(sorted(vs))}}}")
    for p, ws in sorted(m.valuation.items()):
        lines.append(f"  {p}: {{{', '.join(sorted(ws))}}}")
    if phi is not None:
        lines.append(f"  [{render(phi)}] = {{{', '.join(sorted(truth_set(m, phi)))}}}")
    return "\n".join(lines)
