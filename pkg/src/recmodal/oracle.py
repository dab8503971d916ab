"""Bounded exhaustive search for countermodels, independent of type elimination.

:func:`brute_force_oracle` covers every model with at most ``max_worlds``
worlds over the formula's variables.  It never answers "valid": a formula with
no small countermodel is reported as :data:`UNKNOWN`.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from . import kernels
from .decide import LogicMode, Refuted, VerificationError
from .formula import Bottom, Formula, Implies, Rhd, Var, render, subformula_list, var_names
from .kripke import KripkeModel, forces, is_deterministic
from ._search_py import BOT, IMP, RHD, VAR, node_masks, output_sets

UNKNOWN = "unknown"


def compile_formula(phi: Formula):
    """Flatten ``phi`` into post-order node arrays for the search kernels."""
    names = var_names(phi)
    nodes = subformula_list(phi)
    pos = {f: i for i, f in enumerate(nodes)}
    rows = []
    for f in nodes:
        match f:
            case Var(name):
                rows.append((VAR, names.index(name), 0))
            case Bottom():
                rows.append((BOT, 0, 0))
            case Implies(a, b):
                rows.append((IMP, pos[a], pos[b]))
            case Rhd(a, b):
                rows.append((RHD, pos[a], pos[b]))
    kinds, lhs, rhs = (list(col) for col in zip(*rows))
    return names, kinds, lhs, rhs, pos[phi]


def _rebuild(names, kinds, lhs, rhs, n, vecs, guess, det, universal):
    """Turn a kernel hit into an explicit model by choosing output sets."""
    full = (1 << n) - 1
    rhd_nodes = [i for i, k in enumerate(kinds) if k == RHD]
    k = len(rhd_nodes)
    varmask = [0] * len(names)
    for w, vec in enumerate(vecs):
        for j in range(len(names)):
            if (vec >> j) & 1:
                varmask[j] |= 1 << w
    atom_masks = [(guess >> (t * n)) & full for t in range(k)]
    m = node_masks(kinds, lhs, rhs, varmask, atom_masks, full)
    pairs = [(m[lhs[a]], m[rhs[a]]) for a in rhd_nodes]
    sets = [0] + output_sets(n, det)

    def viol(u, S):
        v = 0
        if not S:
            return 0
        for t, (pm, qm) in enumerate(pairs):
            if (pm >> u) & 1 and ((S & ~qm) if universal else not (S & qm)):
                v |= 1 << t
        return v

    worlds = [f"w{i}" for i in range(n)]
    triples = set()
    for w in range(n):
        F = sum(1 << t for t in range(k) if not (atom_masks[t] >> w) & 1)
        # layered reachability with back-pointers
        layers = [{0: None}]
        for u in range(n):
            nxt = {}
            for r in layers[-1]:
                for S in sets:
                    o = viol(u, S)
                    if o & ~F:
                        continue
                    nxt.setdefault(r | o, (r, S))
            layers.append(nxt)
        if F not in layers[-1]:
            raise VerificationError("kernel reported an unrealizable guess")
        cur = F
        for u in range(n - 1, -1, -1):
            prev, S = layers[u + 1][cur]
            for v in range(n):
                if (S >> v) & 1:
                    triples.add((worlds[u], worlds[w], worlds[v]))
            cur = prev
    valuation = {p: frozenset(worlds[w] for w in range(n) if (varmask[j] >> w) & 1) for j, p in enumerate(names)}
    return KripkeModel(tuple(worlds), frozenset(triples), valuation)


def search_countermodel(
    phi: Formula, n_worlds: int, deterministic: bool, universal: bool = False, backend=None
) -> tuple[KripkeModel, str] | None:
    """Countermodel with exactly ``n_worlds`` worlds, or None."""
    names, kinds, lhs, rhs, root = compile_formula(phi)
    search = kernels.search if backend is None else kernels.load_backend(backend)
    hit = search(kinds, lhs, rhs, root, len(names), n_worlds, deterministic, universal)
    if hit is None:
        return None
    vecs, guess = hit
    model = _rebuild(names, kinds, lhs, rhs, n_worlds, vecs, guess, deterministic, universal)
    for w in model.worlds:
        if not forces(model, w, phi, universal):
            if deterministic and not is_deterministic(model):
                raise VerificationError("oracle produced a nondeterministic model")
            return model, w
    raise VerificationError(f"oracle model does not refute {render(phi)}")


def brute_force_oracle(phi0: Formula, mode: LogicMode | str, max_worlds: int = 3, backend=None):
    """``Refuted`` with the first countermodel found (fewest worlds first), else ``UNKNOWN``."""
    mode = LogicMode.parse(mode)
    for n in range(1, max_worlds + 1):
        hit = search_countermodel(phi0, n, mode.deterministic, backend=backend)
        if hit is not None:
            return Refuted(mode, *hit)
    return UNKNOWN


def enumerate_models(n_worlds: int, names: list[str], deterministic: bool) -> Iterator[KripkeModel]:
    """Every model over ``w0..w{n-1}``, literally; only usable for tiny bounds."""
    worlds = [f"w{i}" for i in range(n_worlds)]
    pairs = [(w, u) for w in worlds for u in worlds]
    if deterministic:
        choices = [[()] + [(v,) for v in worlds]] * len(pairs)
    else:
        subsets = [tuple(c) for r in range(n_worlds + 1) for c in itertools.combinations(worlds, r)]
        choices = [subsets] * len(pairs)
    valuations = itertools.product(
        *[[frozenset(c) for r in range(n_worlds + 1) for c in itertools.combinations(worlds, r)]] * len(names)
    )
    valuations = list(valuations)
    for images in itertools.product(*choices):
        triples = frozenset((u, w, v) for (w, u), vs in zip(pairs, images) for v in vs)
        for val in valuations:
            yield KripkeModel(tuple(worlds), triples, dict(zip(names, val)))


def naive_oracle(phi0: Formula, mode: LogicMode | str, max_worlds: int = 2, universal: bool = False):
    """Literal enumeration counterpart of :func:`brute_force_oracle`."""
    mode = LogicMode.parse(mode)
    names = var_names(phi0)
    for n in range(1, max_worlds + 1):
        for m in enumerate_models(n, names, mode.deterministic):
            for w in m.worlds:
                if not forces(m, w, phi0, universal):
                    return Refuted(mode, m, w)
    return UNKNOWN


__all__ = [
    "UNKNOWN",
    "brute_force_oracle",
    "compile_formula",
    "enumerate_models",
    "naive_oracle",
    "search_countermodel",
]
